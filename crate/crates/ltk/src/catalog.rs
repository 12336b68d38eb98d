//! The named elements shipped with the tool, plus loading from a directory.

use std::fs;
use std::path::{Path, PathBuf};

use ltk_core::transfer::{Catalog, CatalogEntry};

use crate::io::{parse_document, ParseError};

macro_rules! embedded {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../data/catalog/", $name, ".f2elt")))),*]
    };
}

/// File stem and contents of every shipped catalog file.
pub const EMBEDDED: &[(&str, &str)] = embedded![
    "h0", "h1", "h2", "h3", "h4", "c0", "d0", "e0_lin", "e0_paper", "g1", "u14", "u20", "u24",
    "witness_i", "witness_ii",
];

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("{file}:{source}")]
    Parse { file: String, source: ParseError },
    #[error("{file}: {source}")]
    Invalid { file: String, source: ltk_core::Error },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

fn entry(file: &str, stem: &str, text: &str) -> Result<CatalogEntry, CatalogError> {
    let doc = parse_document(text).map_err(|source| CatalogError::Parse {
        file: file.to_string(),
        source,
    })?;
    let name = doc.name.unwrap_or_else(|| stem.to_string());
    CatalogEntry::new(name, doc.bidegree, doc.payload).map_err(|source| CatalogError::Invalid {
        file: file.to_string(),
        source,
    })
}

/// The catalog compiled into the binary.
pub fn embedded() -> Catalog {
    let mut c = Catalog::new();
    for (stem, text) in EMBEDDED {
        let e = entry(&format!("{stem}.f2elt"), stem, text).expect("shipped catalog files parse");
        c.insert(e);
    }
    c
}

/// Adds every `*.f2elt` file in `dir` to `catalog`, replacing entries with
/// the same name.
pub fn overlay_dir(catalog: &mut Catalog, dir: &Path) -> Result<usize, CatalogError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CatalogError::Io { path, source }
    };
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "f2elt"))
        .collect();
    files.sort();
    for path in &files {
        let text = fs::read_to_string(path).map_err(io(path))?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
        catalog.insert(entry(&path.display().to_string(), stem, &text)?);
    }
    Ok(files.len())
}

/// The embedded catalog, overlaid with `dir` when given.
pub fn load(dir: Option<&Path>) -> Result<Catalog, CatalogError> {
    let mut c = embedded();
    if let Some(d) = dir {
        overlay_dir(&mut c, d)?;
    }
    Ok(c)
}
