//! The chain-level transfer `ψ : Γ → Λ`, the catalog of named elements and
//! the detection verifier.
//!
//! On a monomial of rank 1, `ψ(a^{(t)}) = λ_t`. On higher rank the first
//! variable is peeled off:
//!
//! ```text
//! ψ(a_1^{(t_1)} a_2^{(t_2)}···) = Σ_{j ≥ t_1} λ_j · ψ((a_2^{(t_2)}···) Sq^{j - t_1})
//! ```
//!
//! and the sum stops at `j = t_1 + ⌊deg/2⌋` where `deg` is the degree of the
//! peeled tail, since higher squares vanish on it.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVector};
use crate::gamma::{is_primitive, primitive_basis_limited, sq_right_monomial_into, GammaElement, GammaMonomial, PrimitivityEvidence};
use crate::homology::Homology;
use crate::lambda::{Bidegree, LambdaElement, LambdaMonomial, Normalizer};

/// Evaluates `ψ` with a memo table keyed on monomials.
#[derive(Clone, Debug, Default)]
pub struct Psi {
    normalizer: Normalizer,
    memo: BTreeMap<GammaMonomial, LambdaElement>,
}

impl Psi {
    pub fn new() -> Self {
        Self::default()
    }

    /// `ψ` of one monomial, in normal form. Rank 0 maps to the unit.
    pub fn psi_monomial(&mut self, m: &GammaMonomial) -> LambdaElement {
        if let Some(hit) = self.memo.get(m) {
            return hit.clone();
        }
        let value = match m.exponents() {
            [] => LambdaElement::unit(),
            [t] => LambdaElement::generator(*t),
            [first, ..] => {
                let tail = m.tail();
                let mut words = LambdaElement::zero();
                for i in 0..=tail.degree() / 2 {
                    let head = LambdaMonomial::generator(first + i);
                    let mut squared = GammaElement::zero(tail.rank());
                    sq_right_monomial_into(&tail, i, &mut squared);
                    for n in squared.terms() {
                        for w in self.psi_monomial(n).terms() {
                            words.toggle(head.concat(w));
                        }
                    }
                }
                self.normalizer.normalize(&words)
            }
        };
        self.memo.insert(m.clone(), value.clone());
        value
    }

    /// `ψ(e)` in normal form. Linear in `e`.
    pub fn psi(&mut self, e: &GammaElement) -> LambdaElement {
        let mut out = LambdaElement::zero();
        for m in e.terms() {
            out += &self.psi_monomial(m);
        }
        out
    }
}

/// `ψ(e)` with a fresh memo table.
pub fn psi(e: &GammaElement) -> LambdaElement {
    Psi::new().psi(e)
}

/// `(Sq⁰)^t e`.
pub fn sq0_family(e: &LambdaElement, t: u32) -> LambdaElement {
    let mut n = Normalizer::new();
    let mut x = n.normalize(e);
    for _ in 0..t {
        x = n.sq0(&x);
    }
    x
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    Lambda(LambdaElement),
    Gamma(GammaElement),
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Lambda(_) => "lambda",
            Payload::Gamma(_) => "gamma",
        }
    }

    /// `(s, d)`: word length and internal degree, or rank and degree.
    pub fn bidegree(&self) -> Result<Option<Bidegree>> {
        match self {
            Payload::Lambda(e) => e.bidegree(),
            Payload::Gamma(e) => Ok(e.degree()?.map(|d| Bidegree::new(e.rank() as u32, d))),
        }
    }
}

/// A named element with a declared bidegree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub bidegree: Option<Bidegree>,
    pub payload: Payload,
}

impl CatalogEntry {
    /// Checks the payload against the declared bidegree, if any. Without a
    /// declaration the payload's own bidegree is recorded.
    pub fn new(name: impl Into<String>, declared: Option<Bidegree>, payload: Payload) -> Result<Self> {
        let found = payload.bidegree()?;
        let bidegree = match (declared, found) {
            (Some(expected), Some(found)) if expected != found => {
                return Err(Error::BidegreeMismatch { expected, found });
            }
            (Some(b), _) => Some(b),
            (None, found) => found,
        };
        Ok(CatalogEntry {
            name: name.into(),
            bidegree,
            payload,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Catalog {
    entries: BTreeMap<String, CatalogEntry>,
}

impl Catalog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds or replaces an entry, returning the previous one.
    pub fn insert(&mut self, entry: CatalogEntry) -> Option<CatalogEntry> {
        self.entries.insert(entry.name.clone(), entry)
    }

    pub fn get(&self, name: &str) -> Result<&CatalogEntry> {
        self.entries
            .get(name)
            .ok_or_else(|| Error::MissingEntry(name.to_string()))
    }

    pub fn lambda(&self, name: &str) -> Result<&LambdaElement> {
        match &self.get(name)?.payload {
            Payload::Lambda(e) => Ok(e),
            Payload::Gamma(_) => Err(Error::WrongKind {
                name: name.to_string(),
                expected: "lambda",
            }),
        }
    }

    pub fn gamma(&self, name: &str) -> Result<&GammaElement> {
        match &self.get(name)?.payload {
            Payload::Gamma(e) => Ok(e),
            Payload::Lambda(_) => Err(Error::WrongKind {
                name: name.to_string(),
                expected: "gamma",
            }),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = &CatalogEntry> + '_ {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Verified,
    Falsified,
    Trivial,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::Falsified => "falsified",
            Verdict::Trivial => "trivial",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A sub-check of a detection run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Homogeneity,
    Primitivity,
    Cycle,
    TargetCycle,
    TargetNonzero,
    ClassEquality,
    WitnessReverification,
    ExtDimension,
    Identity(String),
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::Homogeneity => f.write_str("homogeneity"),
            Check::Primitivity => f.write_str("primitivity"),
            Check::Cycle => f.write_str("cycle"),
            Check::TargetCycle => f.write_str("target_cycle"),
            Check::TargetNonzero => f.write_str("target_nonzero"),
            Check::ClassEquality => f.write_str("class_equality"),
            Check::WitnessReverification => f.write_str("witness_reverification"),
            Check::ExtDimension => f.write_str("ext_dimension"),
            Check::Identity(name) => write!(f, "identity: {name}"),
        }
    }
}

/// A stored boundary witness, checked against the computed difference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceWitness {
    pub name: String,
    pub element: LambdaElement,
    pub valid: bool,
}

/// A class identity checked alongside a detection run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
    /// For homology identities, `b` with `∂b` equal to the difference.
    pub witness: Option<LambdaElement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetectionReport {
    pub input: String,
    pub bidegree: Option<Bidegree>,
    pub primitivity: Option<PrimitivityEvidence>,
    pub psi_image: LambdaElement,
    pub is_cycle: bool,
    pub target_name: String,
    pub target: LambdaElement,
    pub target_nonzero: Option<bool>,
    /// `b` with `∂b = ψ(u) + target`.
    pub witness: Option<LambdaElement>,
    pub witness_reverified: bool,
    pub reference_witness: Option<ReferenceWitness>,
    pub identities: Vec<IdentityCheck>,
    pub ext_dim: Option<usize>,
    pub expected_dim: Option<usize>,
    pub failed: Vec<Check>,
    pub verdict: Verdict,
}

impl DetectionReport {
    fn empty(input: &str, target_name: &str, target: LambdaElement) -> Self {
        DetectionReport {
            input: input.to_string(),
            bidegree: None,
            primitivity: None,
            psi_image: LambdaElement::zero(),
            is_cycle: false,
            target_name: target_name.to_string(),
            target,
            target_nonzero: None,
            witness: None,
            witness_reverified: false,
            reference_witness: None,
            identities: Vec::new(),
            ext_dim: None,
            expected_dim: None,
            failed: Vec::new(),
            verdict: Verdict::Falsified,
        }
    }

    fn fail(&mut self, c: Check) {
        if !self.failed.contains(&c) {
            self.failed.push(c);
        }
    }

    fn settle(&mut self) {
        self.verdict = if self.failed.is_empty() && self.witness_reverified {
            Verdict::Verified
        } else {
            if self.failed.is_empty() {
                self.failed.push(Check::WitnessReverification);
            }
            Verdict::Falsified
        };
    }
}

/// The three detection results certified by the verifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoremClass {
    H0D0,
    H2E0,
    H1H4C0,
}

impl TheoremClass {
    pub const ALL: [TheoremClass; 3] = [TheoremClass::H0D0, TheoremClass::H2E0, TheoremClass::H1H4C0];

    pub fn name(self) -> &'static str {
        match self {
            TheoremClass::H0D0 => "h0d0",
            TheoremClass::H2E0 => "h2e0",
            TheoremClass::H1H4C0 => "h1h4c0",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }

    /// The catalog name of the primitive that detects this class.
    pub fn input(self) -> &'static str {
        match self {
            TheoremClass::H0D0 => "u14",
            TheoremClass::H2E0 => "u20",
            TheoremClass::H1H4C0 => "u24",
        }
    }
}

/// Dimension of the image of the transfer in one bidegree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferImage {
    pub bidegree: Bidegree,
    /// Dimension of the primitives in the source.
    pub primitives: usize,
    pub dim: usize,
    /// Primitives whose images are independent modulo boundaries.
    pub sources: Vec<GammaElement>,
    /// Their images, which span the image in homology.
    pub representatives: Vec<LambdaElement>,
}

/// A primitive preimage of a class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preimage {
    pub element: GammaElement,
    /// `b` with `∂b = ψ(element) + target`.
    pub witness: LambdaElement,
    /// The target is a boundary and the zero element was returned.
    pub trivial: bool,
}

/// Shared state for detection runs: the slice cache and the `ψ` memo.
#[derive(Clone, Debug, Default)]
pub struct Verifier {
    pub homology: Homology,
    pub psi: Psi,
}

impl Verifier {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_limit(limit: usize) -> Self {
        Verifier {
            homology: Homology::with_limit(limit),
            psi: Psi::new(),
        }
    }

    /// Runs every sub-check of "`ψ(u)` represents the class of `target`".
    ///
    /// Failed mathematical checks are recorded in the report. Only the
    /// resource guard is returned as an error.
    pub fn verify_detection(
        &mut self,
        input: &str,
        u: &GammaElement,
        target_name: &str,
        target: &LambdaElement,
        expected_dim: Option<usize>,
    ) -> Result<DetectionReport> {
        let target = self.homology.normalize(target);
        let mut r = DetectionReport::empty(input, target_name, target.clone());
        r.expected_dim = expected_dim;
        let degree = match u.degree() {
            Ok(Some(d)) => d,
            Ok(None) => {
                r.verdict = Verdict::Trivial;
                return Ok(r);
            }
            Err(_) => {
                r.fail(Check::Homogeneity);
                r.settle();
                return Ok(r);
            }
        };
        let b = Bidegree::new(u.rank() as u32, degree);
        r.bidegree = Some(b);

        let evidence = is_primitive(u)?;
        if !evidence.holds() {
            r.fail(Check::Primitivity);
        }
        r.primitivity = Some(evidence);

        r.psi_image = self.psi.psi(u);
        r.is_cycle = self.homology.is_cycle(&r.psi_image)?;
        if !r.is_cycle {
            r.fail(Check::Cycle);
        }

        let target_cycle = match target.bidegree() {
            Ok(Some(tb)) if tb != b => {
                r.fail(Check::ClassEquality);
                false
            }
            Ok(_) => self.homology.is_cycle(&target)?,
            Err(_) => {
                r.fail(Check::ClassEquality);
                false
            }
        };
        if !target_cycle {
            r.fail(Check::TargetCycle);
        }

        if r.is_cycle && target_cycle {
            let difference = &r.psi_image + &target;
            match self.homology.boundary_witness(&difference)? {
                Some(w) => {
                    r.witness_reverified = self.homology.differential(&w) == difference;
                    r.witness = Some(w);
                }
                None => r.fail(Check::ClassEquality),
            }
            let nonzero = self.homology.class_nonzero(&target)?;
            r.target_nonzero = Some(nonzero);
            if !nonzero {
                r.fail(Check::TargetNonzero);
            }
        }

        let dim = self.homology.ext_dimension(b.s, b.d)?;
        r.ext_dim = Some(dim);
        if expected_dim.is_some_and(|e| e != dim) {
            r.fail(Check::ExtDimension);
        }
        r.settle();
        Ok(r)
    }

    /// Checks a stored witness `w` against `∂w = ψ(u) + target`.
    pub fn check_reference_witness(
        &mut self,
        report: &DetectionReport,
        name: &str,
        w: &LambdaElement,
    ) -> ReferenceWitness {
        let difference = &report.psi_image + &report.target;
        let valid = self.homology.differential(w) == difference;
        ReferenceWitness {
            name: name.to_string(),
            element: self.homology.normalize(w),
            valid,
        }
    }

    /// Whether `x` and `y` are homologous cycles, as a named identity.
    pub fn check_same_class(&mut self, name: &str, x: &LambdaElement, y: &LambdaElement) -> Result<IdentityCheck> {
        let (x, y) = (self.homology.normalize(x), self.homology.normalize(y));
        let witness = match self.homology.same_class(&x, &y) {
            Ok(w) => w,
            Err(Error::ResourceLimit { needed, limit }) => return Err(Error::ResourceLimit { needed, limit }),
            Err(_) => None,
        };
        Ok(IdentityCheck {
            name: name.to_string(),
            holds: witness.is_some(),
            witness,
        })
    }

    /// Verifies one of the theorem classes from catalog data, including its
    /// side identities and the stored reference witness where there is one.
    pub fn verify_class(&mut self, class: TheoremClass, catalog: &Catalog) -> Result<DetectionReport> {
        let u = catalog.gamma(class.input())?.clone();
        let prod = |h: &mut Homology, names: &[&str]| -> Result<LambdaElement> {
            let mut acc = LambdaElement::unit();
            for n in names {
                acc = h.product(&acc, catalog.lambda(n)?);
            }
            Ok(acc)
        };
        let h = &mut self.homology;
        let (target_name, target, reference) = match class {
            TheoremClass::H0D0 => ("h0*d0", prod(h, &["h0", "d0"])?, Some("witness_i")),
            TheoremClass::H2E0 => ("h2*e0", prod(h, &["h2", "e0_paper"])?, Some("witness_ii")),
            TheoremClass::H1H4C0 => ("h1*h4*c0", prod(h, &["h1", "h4", "c0"])?, None),
        };
        let side = match class {
            TheoremClass::H0D0 => None,
            TheoremClass::H2E0 => Some(("h2*e0 = h0*g1", prod(h, &["h0", "g1"])?)),
            TheoremClass::H1H4C0 => Some(("h1*h4*c0 = h3*e0", prod(h, &["h3", "e0_paper"])?)),
        };

        let mut report = self.verify_detection(class.input(), &u, target_name, &target, Some(1))?;
        if report.verdict == Verdict::Trivial {
            report.fail(Check::Cycle);
            report.settle();
        }
        if let Some((name, other)) = side {
            let id = self.check_same_class(name, &target, &other)?;
            if !id.holds {
                report.fail(Check::Identity(id.name.clone()));
            }
            report.identities.push(id);
        }
        if class == TheoremClass::H1H4C0 {
            let holds = report.psi_image == report.target;
            let name = "psi(u24) = h1*h4*c0";
            if !holds {
                report.fail(Check::Identity(name.to_string()));
            }
            report.identities.push(IdentityCheck {
                name: name.to_string(),
                holds,
                witness: None,
            });
        }
        if let Some(name) = reference {
            if let Ok(w) = catalog.lambda(name) {
                report.reference_witness = Some(self.check_reference_witness(&report, name, w));
            }
        }
        report.settle();
        Ok(report)
    }

    /// Rank of `images` in `H^{s,d}` with the indices of an independent subset.
    pub fn project_images(&mut self, b: Bidegree, images: &[LambdaElement]) -> Result<(usize, Vec<usize>)> {
        let slice = self.homology.slice(b)?;
        let mut columns: Vec<BitVector> = (0..slice.d_in.ncols()).map(|j| slice.d_in.column(j)).collect();
        let boundaries = columns.len();
        for img in images {
            columns.push(slice.coordinates(img)?);
        }
        let m = BitMatrix::from_columns(slice.dim(), &columns)?;
        let chosen: Vec<usize> = m
            .pivot_columns()
            .into_iter()
            .filter(|&c| c >= boundaries)
            .map(|c| c - boundaries)
            .collect();
        Ok((chosen.len(), chosen))
    }

    /// Assembles a [`TransferImage`] from primitives and their `ψ`-images,
    /// which callers may have computed in parallel.
    pub fn transfer_image_from(
        &mut self,
        b: Bidegree,
        primitives: Vec<GammaElement>,
        images: Vec<LambdaElement>,
    ) -> Result<TransferImage> {
        for img in &images {
            if !self.homology.is_cycle(img)? {
                return Err(Error::NotACycle { what: "transfer image" });
            }
        }
        let (dim, chosen) = self.project_images(b, &images)?;
        Ok(TransferImage {
            bidegree: b,
            primitives: primitives.len(),
            dim,
            sources: chosen.iter().map(|&i| primitives[i].clone()).collect(),
            representatives: chosen.iter().map(|&i| images[i].clone()).collect(),
        })
    }

    /// The image of the transfer in `H^{s,d}`, by mapping a basis of the
    /// primitives through `ψ`.
    pub fn transfer_image_dim(&mut self, s: u32, d: u32) -> Result<TransferImage> {
        let primitives = primitive_basis_limited(s as usize, d, self.homology.limit())?;
        let images = primitives.iter().map(|p| self.psi.psi(p)).collect();
        self.transfer_image_from(Bidegree::new(s, d), primitives, images)
    }

    /// A primitive `θ` of rank `s` with `ψ(θ)` homologous to `target`.
    pub fn find_preimage(&mut self, s: u32, target: &LambdaElement) -> Result<Option<Preimage>> {
        let target = self.homology.normalize(target);
        if !self.homology.is_cycle(&target)? {
            return Err(Error::NotACycle { what: "target" });
        }
        let Some(b) = target.bidegree()? else {
            return Ok(Some(Preimage {
                element: GammaElement::zero(s as usize),
                witness: LambdaElement::zero(),
                trivial: true,
            }));
        };
        if b.s != s {
            return Err(Error::RankMismatch {
                expected: s as usize,
                found: b.s as usize,
            });
        }
        if let Some(w) = self.homology.boundary_witness(&target)? {
            return Ok(Some(Preimage {
                element: GammaElement::zero(s as usize),
                witness: w,
                trivial: true,
            }));
        }
        let primitives = primitive_basis_limited(s as usize, b.d, self.homology.limit())?;
        let images: Vec<LambdaElement> = primitives.iter().map(|p| self.psi.psi(p)).collect();
        let slice = self.homology.slice(b)?;
        let mut columns = Vec::with_capacity(images.len() + slice.d_in.ncols());
        for img in &images {
            columns.push(slice.coordinates(img)?);
        }
        for j in 0..slice.d_in.ncols() {
            columns.push(slice.d_in.column(j));
        }
        let m = BitMatrix::from_columns(slice.dim(), &columns)?;
        let Some(x) = m.solve(&slice.coordinates(&target)?)? else {
            return Ok(None);
        };
        let mut element = GammaElement::zero(s as usize);
        let mut image = LambdaElement::zero();
        let mut boundary_part = LambdaElement::zero();
        for i in x.ones() {
            if i < primitives.len() {
                element += &primitives[i];
                image += &images[i];
            } else {
                boundary_part.toggle(slice.prev_basis[i - primitives.len()].clone());
            }
        }
        let difference = &image + &target;
        assert_eq!(
            self.homology.differential(&boundary_part),
            difference,
            "preimage witness failed re-verification"
        );
        Ok(Some(Preimage {
            element,
            witness: boundary_part,
            trivial: false,
        }))
    }
}
