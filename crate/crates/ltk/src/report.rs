//! Text and JSON renderings of detection reports.

use std::fmt::Write as _;

use ltk_core::transfer::{DetectionReport, Verdict};
use serde::Serialize;

/// Version of the JSON layout below.
pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Serialize)]
struct SquareJson {
    square: u32,
    image: String,
    below_cutoff: bool,
}

#[derive(Serialize)]
struct TargetJson<'a> {
    name: &'a str,
    element: String,
    nonzero: Option<bool>,
}

#[derive(Serialize)]
struct WitnessJson<'a> {
    name: &'a str,
    element: String,
    valid: bool,
}

#[derive(Serialize)]
struct IdentityJson<'a> {
    name: &'a str,
    holds: bool,
    witness: Option<String>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    schema: u32,
    input: &'a str,
    bidegree: Option<[u32; 2]>,
    primitive: Option<bool>,
    primitivity_checks: Vec<SquareJson>,
    psi_image: String,
    is_cycle: bool,
    target: TargetJson<'a>,
    witness: Option<String>,
    witness_reverified: bool,
    reference_witness: Option<WitnessJson<'a>>,
    identities: Vec<IdentityJson<'a>>,
    ext_dim: Option<usize>,
    expected_dim: Option<usize>,
    failed_checks: Vec<String>,
    verdict: &'static str,
}

pub fn to_json(r: &DetectionReport) -> serde_json::Value {
    let checks = r
        .primitivity
        .iter()
        .flat_map(|p| &p.checks)
        .map(|c| SquareJson {
            square: c.square,
            image: c.image.to_string(),
            below_cutoff: c.below_cutoff,
        })
        .collect();
    let json = ReportJson {
        schema: SCHEMA,
        input: &r.input,
        bidegree: r.bidegree.map(|b| [b.s, b.d]),
        primitive: r.primitivity.as_ref().map(|p| p.holds()),
        primitivity_checks: checks,
        psi_image: r.psi_image.to_string(),
        is_cycle: r.is_cycle,
        target: TargetJson {
            name: &r.target_name,
            element: r.target.to_string(),
            nonzero: r.target_nonzero,
        },
        witness: r.witness.as_ref().map(ToString::to_string),
        witness_reverified: r.witness_reverified,
        reference_witness: r.reference_witness.as_ref().map(|w| WitnessJson {
            name: &w.name,
            element: w.element.to_string(),
            valid: w.valid,
        }),
        identities: r
            .identities
            .iter()
            .map(|i| IdentityJson {
                name: &i.name,
                holds: i.holds,
                witness: i.witness.as_ref().map(ToString::to_string),
            })
            .collect(),
        ext_dim: r.ext_dim,
        expected_dim: r.expected_dim,
        failed_checks: r.failed.iter().map(ToString::to_string).collect(),
        verdict: r.verdict.as_str(),
    };
    serde_json::to_value(json).expect("report serializes")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn to_text(r: &DetectionReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "input: {}", r.input);
    if let Some(b) = r.bidegree {
        let _ = writeln!(s, "bidegree: {b}");
    }
    if let Some(p) = &r.primitivity {
        let _ = writeln!(s, "primitive: {}", yes_no(p.holds()));
        for c in &p.checks {
            let note = if c.below_cutoff { "" } else { " (past the unstable cutoff)" };
            let _ = writeln!(s, "  Sq^{}: {}{note}", c.square, c.image);
        }
    }
    if r.verdict != Verdict::Trivial || !r.psi_image.is_zero() {
        let _ = writeln!(s, "psi_image: {}", r.psi_image);
        let _ = writeln!(s, "is_cycle: {}", yes_no(r.is_cycle));
    }
    let _ = writeln!(s, "target: {} = {}", r.target_name, r.target);
    if let Some(nz) = r.target_nonzero {
        let _ = writeln!(s, "target class nonzero: {}", yes_no(nz));
    }
    match &r.witness {
        Some(w) => {
            let _ = writeln!(s, "witness: {w}");
            let _ = writeln!(s, "witness re-verified: {}", yes_no(r.witness_reverified));
        }
        None => {
            let _ = writeln!(s, "witness: none");
        }
    }
    if let Some(w) = &r.reference_witness {
        let _ = writeln!(
            s,
            "stored witness {}: {} ({})",
            w.name,
            w.element,
            if w.valid { "valid" } else { "does not match" }
        );
    }
    for i in &r.identities {
        let _ = writeln!(s, "identity {}: {}", i.name, if i.holds { "holds" } else { "fails" });
        if let Some(w) = &i.witness {
            let _ = writeln!(s, "  witness: {w}");
        }
    }
    if let Some(d) = r.ext_dim {
        match r.expected_dim {
            Some(e) => {
                let _ = writeln!(s, "ext_dim: {d} (expected {e})");
            }
            None => {
                let _ = writeln!(s, "ext_dim: {d}");
            }
        }
    }
    if !r.failed.is_empty() {
        let names: Vec<String> = r.failed.iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "failed checks: {}", names.join(", "));
    }
    let _ = writeln!(s, "verdict: {}", r.verdict);
    s
}

pub fn render(r: &DetectionReport, format: Format) -> String {
    match format {
        Format::Text => to_text(r),
        Format::Json => {
            let mut out = serde_json::to_string_pretty(&to_json(r)).expect("json renders");
            out.push('\n');
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ltk_core::transfer::Verifier;
    use ltk_core::{GammaElement, LambdaElement};

    #[test]
    fn trivial_report() {
        let mut v = Verifier::new();
        let r = v
            .verify_detection("zero", &GammaElement::zero(2), "t", &LambdaElement::zero(), None)
            .unwrap();
        let j = to_json(&r);
        assert_eq!(j["verdict"], "trivial");
        assert_eq!(j["schema"], 1);
        for key in ["input", "bidegree", "primitive", "psi_image", "is_cycle", "target", "witness", "ext_dim", "verdict"] {
            assert!(j.get(key).is_some(), "missing {key}");
        }
        assert!(to_text(&r).ends_with("verdict: trivial\n"));
    }
}
