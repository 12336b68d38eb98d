//! Command-line front end.
//!
//! Exit codes: 0 when a computation finished or a verification passed, 1 when
//! a mathematical check failed, 2 for usage, input and resource errors.

use std::ffi::OsString;
use std::fs;
use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::sync::mpsc;
use std::thread;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use ltk_core::gamma::{gamma_basis_len, is_primitive, primitive_basis_limited, sq_right};
use ltk_core::homology::DEFAULT_BASIS_LIMIT;
use ltk_core::lambda::{admissible_basis, admissible_basis_len, Normalizer};
use ltk_core::transfer::{sq0_family, Payload, TheoremClass, Verdict, Verifier};
use ltk_core::{Bidegree, GammaElement, Homology, LambdaElement};
use serde_json::json;

use crate::catalog::{self, CatalogError};
use crate::io::{parse_document, ElementDocument, ParseError};
use crate::parallel;
use crate::report::{self, Format, SCHEMA};

#[derive(Debug, Parser)]
#[command(name = "ltk", version, about = "Lambda algebra computations and transfer certificates over F2")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Largest basis (in monomials) any single step may build.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_BASIS_LIMIT, global = true)]
    max_basis: usize,

    /// Lift the basis size guard.
    #[arg(long, global = true)]
    force: bool,

    /// Give up after this many seconds.
    #[arg(long, value_name = "SECONDS", global = true)]
    time_budget: Option<f64>,

    /// Directory of .f2elt files overriding the built-in catalog.
    #[arg(long, value_name = "DIR", global = true)]
    catalog: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Read the element from a .f2elt file (`-` for standard input).
    #[arg(long = "in", value_name = "FILE")]
    file: Option<PathBuf>,

    /// The element itself, e.g. "L[3,3,2]" or "a(1,2) + a(2,1)".
    #[arg(value_name = "ELEMENT")]
    text: Option<String>,
}

#[derive(Debug, Args)]
struct ElementArgs {
    #[command(flatten)]
    source: Source,

    /// Rank of a Gamma element (or of the sought preimage), needed only for `0`.
    #[arg(long)]
    rank: Option<usize>,
}

#[derive(Debug, Args)]
struct BidegreeArgs {
    /// Homological degree (word length).
    #[arg(long)]
    s: u32,
    /// Internal degree (sum of indices).
    #[arg(long)]
    deg: u32,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rewrite a Lambda element to admissible normal form.
    Normalize(ElementArgs),
    /// Apply the differential.
    Diff(ElementArgs),
    /// List the admissible words of one bidegree.
    Basis(BidegreeArgs),
    /// Dimension of H^{s,d}(Lambda).
    Homology(BidegreeArgs),
    /// Apply the squaring operation Sq0.
    Sq0 {
        #[command(flatten)]
        element: ElementArgs,
        /// Number of times to apply it.
        #[arg(long, default_value_t = 1)]
        times: u32,
    },
    /// Right action of Sq^i on a Gamma element.
    Steenrod {
        #[command(flatten)]
        element: ElementArgs,
        #[arg(long)]
        sq: u32,
    },
    /// Check that a Gamma element is annihilated by positive squares.
    PrimitiveCheck(ElementArgs),
    /// A basis of the primitives of one rank and degree.
    PrimitiveBasis {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        deg: u32,
    },
    /// The transfer representative of a Gamma element.
    Psi(ElementArgs),
    /// Verify one of the detection results end to end.
    Verify {
        #[arg(long, value_parser = ["h0d0", "h2e0", "h1h4c0"])]
        class: String,
        /// Replace the catalog's primitive with this one.
        #[arg(long = "in", value_name = "FILE")]
        file: Option<PathBuf>,
    },
    /// Dimension of the image of the transfer in one bidegree.
    TransferImage(BidegreeArgs),
    /// Search the primitives for a preimage of a class.
    FindPreimage(ElementArgs),
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{origin}:{source}")]
    Parse { origin: String, source: ParseError },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("{0}")]
    Core(ltk_core::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl From<ltk_core::Error> for CliError {
    fn from(e: ltk_core::Error) -> Self {
        CliError::Core(e)
    }
}

/// What a command printed and how it should exit.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }
}

struct Context {
    format: Format,
    limit: usize,
    catalog_dir: Option<PathBuf>,
}

fn read_text(path: &Path) -> Result<String, CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(io)
    }
}

fn load(args: &ElementArgs, rank: Option<usize>) -> Result<ElementDocument, CliError> {
    let (origin, text) = match (&args.source.file, &args.source.text) {
        (Some(p), _) => (p.display().to_string(), read_text(p)?),
        (None, Some(t)) => ("<argument>".to_string(), t.clone()),
        (None, None) => unreachable!("clap requires a source"),
    };
    let parsed = match rank {
        // a rank flag turns a bare element into a gamma document
        Some(r) if !text.contains('@') => parse_document(&format!("@kind gamma\n@rank {r}\n{text}")).map_err(
            |mut e| {
                e.line = e.line.saturating_sub(2).max(1);
                e
            },
        ),
        _ => parse_document(&text),
    };
    let doc = parsed.map_err(|source| CliError::Parse { origin, source })?;
    if let (Some(r), Payload::Gamma(g)) = (rank, &doc.payload) {
        if g.rank() != r {
            return Err(CliError::Usage(format!("element has rank {}, --rank says {r}", g.rank())));
        }
    }
    Ok(doc)
}

fn lambda_input(args: &ElementArgs) -> Result<LambdaElement, CliError> {
    match load(args, None)?.payload {
        Payload::Lambda(e) => Ok(e),
        Payload::Gamma(_) => Err(CliError::Usage("expected a Lambda element (L[...])".into())),
    }
}

fn gamma_input(args: &ElementArgs) -> Result<GammaElement, CliError> {
    match load(args, args.rank)?.payload {
        Payload::Gamma(e) => Ok(e),
        Payload::Lambda(_) => Err(CliError::Usage("expected a Gamma element (a(...))".into())),
    }
}

fn guard(needed: usize, limit: usize) -> Result<(), CliError> {
    if needed > limit {
        return Err(ltk_core::Error::ResourceLimit { needed, limit }.into());
    }
    Ok(())
}

fn json_line(v: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json renders");
    s.push('\n');
    s
}

fn element_output(ctx: &Context, e: &impl ToString) -> Outcome {
    let text = e.to_string();
    Outcome::ok(match ctx.format {
        Format::Text => format!("{text}\n"),
        Format::Json => json_line(json!({ "schema": SCHEMA, "element": text })),
    })
}

fn execute(cmd: Command, ctx: &Context) -> Result<Outcome, CliError> {
    match cmd {
        Command::Normalize(a) => Ok(element_output(ctx, &Normalizer::new().normalize(&lambda_input(&a)?))),
        Command::Diff(a) => Ok(element_output(ctx, &Normalizer::new().differential(&lambda_input(&a)?))),
        Command::Sq0 { element, times } => Ok(element_output(ctx, &sq0_family(&lambda_input(&element)?, times))),
        Command::Steenrod { element, sq } => Ok(element_output(ctx, &sq_right(&gamma_input(&element)?, sq))),
        Command::Psi(a) => {
            let g = gamma_input(&a)?;
            Ok(element_output(ctx, &parallel::psi_all(&[g], 1).remove(0)))
        }
        Command::Basis(b) => {
            guard(admissible_basis_len(b.s, b.deg), ctx.limit)?;
            let words: Vec<String> = admissible_basis(b.s, b.deg).iter().map(ToString::to_string).collect();
            Ok(Outcome::ok(match ctx.format {
                Format::Text => words.iter().map(|w| format!("{w}\n")).collect(),
                Format::Json => json_line(json!({ "schema": SCHEMA, "bidegree": [b.s, b.deg], "basis": words })),
            }))
        }
        Command::Homology(b) => {
            let dim = Homology::with_limit(ctx.limit).ext_dimension(b.s, b.deg)?;
            Ok(Outcome::ok(match ctx.format {
                Format::Text => format!("dim = {dim}\n"),
                Format::Json => json_line(json!({ "schema": SCHEMA, "bidegree": [b.s, b.deg], "dim": dim })),
            }))
        }
        Command::PrimitiveCheck(a) => {
            let g = gamma_input(&a)?;
            let ev = is_primitive(&g)?;
            let holds = ev.holds();
            let stdout = match ctx.format {
                Format::Text => {
                    let mut s = String::new();
                    for c in &ev.checks {
                        s.push_str(&format!("Sq^{}: {}\n", c.square, c.image));
                    }
                    s.push_str(&format!("primitive: {}\n", if holds { "yes" } else { "no" }));
                    s
                }
                Format::Json => {
                    let checks: Vec<_> = ev
                        .checks
                        .iter()
                        .map(|c| json!({ "square": c.square, "image": c.image.to_string(), "below_cutoff": c.below_cutoff }))
                        .collect();
                    json_line(json!({ "schema": SCHEMA, "degree": ev.degree, "checks": checks, "primitive": holds }))
                }
            };
            Ok(Outcome {
                stdout,
                code: if holds { 0 } else { 1 },
            })
        }
        Command::PrimitiveBasis { rank, deg } => {
            if rank == 0 {
                return Err(CliError::Usage("--rank must be positive".into()));
            }
            guard(gamma_basis_len(rank, deg), ctx.limit)?;
            let basis = primitive_basis_limited(rank, deg, ctx.limit)?;
            let items: Vec<String> = basis.iter().map(ToString::to_string).collect();
            Ok(Outcome::ok(match ctx.format {
                Format::Text => {
                    let mut s = format!("dim = {}\n", items.len());
                    for i in &items {
                        s.push_str(&format!("{i}\n"));
                    }
                    s
                }
                Format::Json => json_line(json!({ "schema": SCHEMA, "rank": rank, "degree": deg, "dim": items.len(), "basis": items })),
            }))
        }
        Command::TransferImage(b) => {
            if b.s == 0 {
                return Err(CliError::Usage("--s must be positive".into()));
            }
            let mut v = Verifier::with_limit(ctx.limit);
            let primitives = primitive_basis_limited(b.s as usize, b.deg, ctx.limit)?;
            let images = parallel::psi_all(&primitives, parallel::thread_count());
            let t = v.transfer_image_from(Bidegree::new(b.s, b.deg), primitives, images)?;
            let ext = v.homology.ext_dimension(b.s, b.deg)?;
            Ok(Outcome::ok(match ctx.format {
                Format::Text => {
                    let mut s = format!("dim = {}\nprimitives = {}\next_dim = {ext}\n", t.dim, t.primitives);
                    for (src, img) in t.sources.iter().zip(&t.representatives) {
                        s.push_str(&format!("{src} -> {img}\n"));
                    }
                    s
                }
                Format::Json => {
                    let reps: Vec<_> = t
                        .sources
                        .iter()
                        .zip(&t.representatives)
                        .map(|(s, r)| json!({ "source": s.to_string(), "image": r.to_string() }))
                        .collect();
                    json_line(json!({
                        "schema": SCHEMA, "bidegree": [b.s, b.deg], "dim": t.dim,
                        "primitives": t.primitives, "ext_dim": ext, "representatives": reps,
                    }))
                }
            }))
        }
        Command::FindPreimage(a) => {
            let target = lambda_input(&a)?;
            let s = match Normalizer::new().normalize(&target).bidegree()? {
                Some(b) => b.s,
                None => a.rank.unwrap_or(1) as u32,
            };
            let mut v = Verifier::with_limit(ctx.limit);
            let found = v.find_preimage(s, &target)?;
            let code = if found.is_some() { 0 } else { 1 };
            let stdout = match (ctx.format, &found) {
                (Format::Text, Some(p)) => format!(
                    "preimage: {}\nwitness: {}\ntrivial: {}\n",
                    p.element,
                    p.witness,
                    if p.trivial { "yes" } else { "no" }
                ),
                (Format::Text, None) => "preimage: none\n".to_string(),
                (Format::Json, p) => json_line(json!({
                    "schema": SCHEMA,
                    "preimage": p.as_ref().map(|p| p.element.to_string()),
                    "witness": p.as_ref().map(|p| p.witness.to_string()),
                    "trivial": p.as_ref().map(|p| p.trivial),
                })),
            };
            Ok(Outcome { stdout, code })
        }
        Command::Verify { class, file } => {
            let class = TheoremClass::from_name(&class).expect("clap restricts the class names");
            let mut cat = catalog::load(ctx.catalog_dir.as_deref())?;
            if let Some(path) = file {
                let text = read_text(&path)?;
                let doc = parse_document(&text).map_err(|source| CliError::Parse {
                    origin: path.display().to_string(),
                    source,
                })?;
                if doc.kind() != crate::io::Kind::Gamma {
                    return Err(CliError::Usage("--in must hold a Gamma element".into()));
                }
                cat.insert(ltk_core::transfer::CatalogEntry::new(class.input(), None, doc.payload)?);
            }
            let mut v = Verifier::with_limit(ctx.limit);
            let r = v.verify_class(class, &cat)?;
            Ok(Outcome {
                stdout: report::render(&r, ctx.format),
                code: if r.verdict == Verdict::Verified { 0 } else { 1 },
            })
        }
    }
}

fn describe(e: &CliError) -> String {
    match e {
        CliError::Core(ltk_core::Error::ResourceLimit { .. }) => {
            format!("error: {e}; raise --max-basis or pass --force")
        }
        _ => format!("error: {e}"),
    }
}

/// Parses `args`, runs the command under the time budget and returns the
/// outcome. Diagnostics for failures are in `stdout` only for clap's help and
/// version output; everything else is returned as `Err` text.
pub fn run_captured<I, T>(args: I) -> Result<Outcome, (i32, String)>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Ok(Outcome::ok(e.to_string()))
                }
                _ => Err((2, e.to_string())),
            };
        }
    };
    let ctx = Context {
        format: cli.format,
        limit: if cli.force { usize::MAX } else { cli.max_basis },
        catalog_dir: cli.catalog,
    };
    let budget = match cli.time_budget {
        Some(t) if !(t.is_finite() && t > 0.0) => {
            return Err((2, "error: --time-budget must be a positive number of seconds".into()))
        }
        Some(t) => Some(Duration::from_secs_f64(t)),
        None => None,
    };
    let command = cli.command;
    let result = match budget {
        None => execute(command, &ctx),
        Some(limit) => {
            let (tx, rx) = mpsc::channel();
            // detached: on timeout the process exits and takes the worker with it
            thread::spawn(move || {
                let _ = tx.send(execute(command, &ctx));
            });
            match rx.recv_timeout(limit) {
                Ok(r) => r,
                Err(_) => {
                    return Err((2, format!("error: time budget of {}s exceeded", limit.as_secs_f64())));
                }
            }
        }
    };
    result.map_err(|e| (2, describe(&e)))
}

/// Entry point for the binary: prints results and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match run_captured(args) {
        Ok(out) => {
            print!("{}", out.stdout);
            out.code
        }
        Err((code, msg)) => {
            eprint!("{msg}");
            if !msg.ends_with('\n') {
                eprintln!();
            }
            code
        }
    }
}
