//! Cycles, boundaries and `H^{s,d}(Λ) = Ext_A^{s, s+d}(F₂, F₂)`.
//!
//! Classes are always handled through explicit normalized representatives;
//! every class-level question becomes a rank or solve call against the
//! differential matrices of a [`Slice`].

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVector};
use crate::lambda::{admissible_basis, Bidegree, LambdaElement, LambdaMonomial, Normalizer};

/// Default guard on the number of basis words in one bidegree.
pub const DEFAULT_BASIS_LIMIT: usize = 200_000;

/// Everything needed to do linear algebra in one bidegree `(s, d)`.
#[derive(Clone, Debug)]
pub struct Slice {
    pub bidegree: Bidegree,
    pub basis: Vec<LambdaMonomial>,
    /// Basis of `(s+1, d-1)`, the rows of `d_out`.
    pub next_basis: Vec<LambdaMonomial>,
    /// Basis of `(s-1, d+1)`, the columns of `d_in`.
    pub prev_basis: Vec<LambdaMonomial>,
    /// `∂ : (s, d) → (s+1, d-1)`, columns indexed by `basis`.
    pub d_out: BitMatrix,
    /// `∂ : (s-1, d+1) → (s, d)`, columns indexed by `prev_basis`.
    pub d_in: BitMatrix,
    pub rank_out: usize,
    pub rank_in: usize,
}

fn coordinates_in(basis: &[LambdaMonomial], e: &LambdaElement) -> Option<BitVector> {
    let mut v = BitVector::zeros(basis.len());
    for m in e.terms() {
        v.flip(basis.binary_search(m).ok()?);
    }
    Some(v)
}

impl Slice {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Number of cycles minus number of boundaries.
    pub fn ext_dimension(&self) -> usize {
        self.dim() - self.rank_out - self.rank_in
    }

    /// Coordinates of a normalized element of this bidegree.
    pub fn coordinates(&self, e: &LambdaElement) -> Result<BitVector> {
        if let Some(found) = e.bidegree()? {
            if found != self.bidegree {
                return Err(Error::BidegreeMismatch {
                    expected: self.bidegree,
                    found,
                });
            }
        }
        // the basis is sorted, and a normalized element only has basis words
        coordinates_in(&self.basis, e).ok_or(Error::NotHomogeneous)
    }

    pub fn element(&self, v: &BitVector) -> LambdaElement {
        v.ones().map(|i| self.basis[i].clone()).collect()
    }

    pub fn prev_element(&self, v: &BitVector) -> LambdaElement {
        v.ones().map(|i| self.prev_basis[i].clone()).collect()
    }
}

/// Per-bidegree slice cache plus a shared normalizer.
#[derive(Clone, Debug)]
pub struct Homology {
    normalizer: Normalizer,
    slices: BTreeMap<Bidegree, Slice>,
    limit: usize,
}

impl Default for Homology {
    fn default() -> Self {
        Self::new()
    }
}

impl Homology {
    pub fn new() -> Self {
        Self::with_limit(DEFAULT_BASIS_LIMIT)
    }

    pub fn with_limit(limit: usize) -> Self {
        Homology {
            normalizer: Normalizer::new(),
            slices: BTreeMap::new(),
            limit,
        }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn normalizer(&mut self) -> &mut Normalizer {
        &mut self.normalizer
    }

    fn basis(&self, b: Bidegree) -> Result<Vec<LambdaMonomial>> {
        let needed = crate::lambda::admissible_basis_len(b.s, b.d);
        if needed > self.limit {
            return Err(Error::ResourceLimit {
                needed,
                limit: self.limit,
            });
        }
        Ok(admissible_basis(b.s, b.d))
    }

    fn differential_matrix(
        &mut self,
        source: &[LambdaMonomial],
        target: &[LambdaMonomial],
    ) -> BitMatrix {
        let columns: Vec<BitVector> = source
            .iter()
            .map(|m| {
                let img = self.normalizer.differential(&m.clone().into());
                coordinates_in(target, &img).expect("differential of a basis word lies in the next bidegree")
            })
            .collect();
        BitMatrix::from_columns(target.len(), &columns).expect("columns have the target length")
    }

    /// The slice at `b`, building and caching it on first use.
    pub fn slice(&mut self, b: Bidegree) -> Result<&Slice> {
        if !self.slices.contains_key(&b) {
            let basis = self.basis(b)?;
            let next_basis = match b.next() {
                Some(n) => self.basis(n)?,
                None => Vec::new(),
            };
            let prev_basis = match b.prev() {
                Some(p) => self.basis(p)?,
                None => Vec::new(),
            };
            let d_out = self.differential_matrix(&basis, &next_basis);
            let d_in = self.differential_matrix(&prev_basis, &basis);
            let slice = Slice {
                bidegree: b,
                rank_out: d_out.rank(),
                rank_in: d_in.rank(),
                basis,
                next_basis,
                prev_basis,
                d_out,
                d_in,
            };
            self.slices.insert(b, slice);
        }
        Ok(&self.slices[&b])
    }

    pub fn normalize(&mut self, e: &LambdaElement) -> LambdaElement {
        self.normalizer.normalize(e)
    }

    pub fn differential(&mut self, e: &LambdaElement) -> LambdaElement {
        self.normalizer.differential(e)
    }

    pub fn product(&mut self, x: &LambdaElement, y: &LambdaElement) -> LambdaElement {
        self.normalizer.product(x, y)
    }

    /// Whether `∂e = 0`. Rejects non-homogeneous input.
    pub fn is_cycle(&mut self, e: &LambdaElement) -> Result<bool> {
        e.bidegree()?;
        Ok(self.normalizer.differential(e).is_zero())
    }

    /// Some `b` with `∂b = r`, or `None` when `r` is not a boundary.
    ///
    /// The returned witness has been checked by applying the differential.
    pub fn boundary_witness(&mut self, r: &LambdaElement) -> Result<Option<LambdaElement>> {
        let r = self.normalizer.normalize(r);
        let Some(b) = r.bidegree()? else {
            return Ok(Some(LambdaElement::zero()));
        };
        if b.prev().is_none() {
            return Ok(None);
        }
        let slice = self.slice(b)?;
        let rhs = slice.coordinates(&r)?;
        let Some(x) = slice.d_in.solve(&rhs)? else {
            return Ok(None);
        };
        let witness = slice.prev_element(&x);
        let check = self.normalizer.differential(&witness);
        assert_eq!(check, r, "boundary witness failed re-verification");
        Ok(Some(witness))
    }

    /// `dim H^{s,d}(Λ)`: cycles in `(s, d)` modulo boundaries from `(s-1, d+1)`.
    pub fn ext_dimension(&mut self, s: u32, d: u32) -> Result<usize> {
        Ok(self.slice(Bidegree::new(s, d))?.ext_dimension())
    }

    fn require_cycle(&mut self, e: &LambdaElement, what: &'static str) -> Result<()> {
        if self.is_cycle(e)? {
            Ok(())
        } else {
            Err(Error::NotACycle { what })
        }
    }

    /// Whether two cycles of equal bidegree are homologous. On success the
    /// witness `b` satisfies `∂b = e1 + e2`.
    pub fn same_class(
        &mut self,
        e1: &LambdaElement,
        e2: &LambdaElement,
    ) -> Result<Option<LambdaElement>> {
        self.require_cycle(e1, "first element")?;
        self.require_cycle(e2, "second element")?;
        if let (Some(a), Some(b)) = (e1.bidegree()?, e2.bidegree()?) {
            if a != b {
                return Err(Error::BidegreeMismatch {
                    expected: a,
                    found: b,
                });
            }
        }
        self.boundary_witness(&(e1 + e2))
    }

    /// Whether a cycle represents a nonzero class.
    pub fn class_nonzero(&mut self, e: &LambdaElement) -> Result<bool> {
        self.require_cycle(e, "element")?;
        Ok(self.boundary_witness(e)?.is_none())
    }
}
