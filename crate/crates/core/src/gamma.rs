//! The divided power algebra `Γ(a_1, …, a_s) = H_*(BV_s; F₂)` as a right
//! module over the Steenrod algebra.
//!
//! On one generator `(a^{(t)})Sq^i = C(t-i, i) a^{(t-i)}`; on monomials the
//! action is given by the Cartan formula. Because `C(t-i, i)` vanishes once
//! `2i > t`, `Sq^i` kills everything of degree below `2i`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::f2::{binom_mod2, BitMatrix, BitVector};

pub type Exponents = SmallVec<[u32; 6]>;

/// `a_1^{(t_1)} ··· a_s^{(t_s)}`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GammaMonomial(Exponents);

impl GammaMonomial {
    pub fn new(exponents: impl IntoIterator<Item = u32>) -> Self {
        GammaMonomial(exponents.into_iter().collect())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// The monomial in the variables `a_2, …, a_s` obtained by dropping `a_1`.
    pub fn tail(&self) -> GammaMonomial {
        GammaMonomial(self.0.iter().skip(1).copied().collect())
    }
}

impl fmt::Display for GammaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a(")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for GammaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An F₂-sum of monomials of one fixed rank.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GammaElement {
    rank: usize,
    terms: BTreeSet<GammaMonomial>,
}

impl GammaElement {
    pub fn zero(rank: usize) -> Self {
        GammaElement {
            rank,
            terms: BTreeSet::new(),
        }
    }

    pub fn from_terms(rank: usize, terms: impl IntoIterator<Item = GammaMonomial>) -> Result<Self> {
        let mut e = Self::zero(rank);
        for m in terms {
            if m.rank() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    found: m.rank(),
                });
            }
            e.toggle(m);
        }
        Ok(e)
    }

    pub fn monomial(m: GammaMonomial) -> Self {
        let mut e = Self::zero(m.rank());
        e.toggle(m);
        e
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl ExactSizeIterator<Item = &GammaMonomial> + '_ {
        self.terms.iter()
    }

    pub fn contains(&self, m: &GammaMonomial) -> bool {
        self.terms.contains(m)
    }

    pub fn toggle(&mut self, m: GammaMonomial) {
        assert_eq!(m.rank(), self.rank, "monomial rank differs from element rank");
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    /// Common degree of all terms, `None` for zero.
    pub fn degree(&self) -> Result<Option<u32>> {
        let mut it = self.terms.iter().map(GammaMonomial::degree);
        let Some(first) = it.next() else {
            return Ok(None);
        };
        if it.all(|d| d == first) {
            Ok(Some(first))
        } else {
            Err(Error::NotHomogeneous)
        }
    }
}

impl AddAssign<&GammaElement> for GammaElement {
    fn add_assign(&mut self, rhs: &GammaElement) {
        for m in &rhs.terms {
            self.toggle(m.clone());
        }
    }
}

impl Add<&GammaElement> for &GammaElement {
    type Output = GammaElement;

    fn add(self, rhs: &GammaElement) -> GammaElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl fmt::Display for GammaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, m) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GammaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[rank {}] {}", self.rank, self)
    }
}

/// Adds `(m)Sq^i` into `out`.
pub fn sq_right_monomial_into(m: &GammaMonomial, i: u32, out: &mut GammaElement) {
    fn go(src: &[u32], rem: u32, acc: &mut Exponents, out: &mut GammaElement) {
        let Some((&t, rest)) = src.split_first() else {
            if rem == 0 {
                out.toggle(GammaMonomial(acc.clone()));
            }
            return;
        };
        // Sq^{i_k} on a^{(t)} needs 2 i_k ≤ t
        let cap: u32 = rest.iter().map(|&x| x / 2).sum();
        let lo = rem.saturating_sub(cap);
        for ik in lo..=rem.min(t / 2) {
            if binom_mod2(i64::from(t - ik), i64::from(ik)) {
                acc.push(t - ik);
                go(rest, rem - ik, acc, out);
                acc.pop();
            }
        }
    }
    if 2 * i > m.degree() {
        return;
    }
    go(&m.0, i, &mut Exponents::new(), out);
}

/// `(e)Sq^i` by the Cartan formula. `Sq^0` is the identity.
pub fn sq_right(e: &GammaElement, i: u32) -> GammaElement {
    let mut out = GammaElement::zero(e.rank);
    for m in &e.terms {
        sq_right_monomial_into(m, i, &mut out);
    }
    out
}

/// The algebra generators `Sq^{2^k}` that can act nontrivially in degree `d`,
/// i.e. those with `2·2^k ≤ d`.
pub fn generator_squares(d: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut q = 1u32;
    while 2 * u64::from(q) <= u64::from(d) {
        out.push(q);
        q *= 2;
    }
    out
}

/// Result of applying one square while deciding primitivity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareCheck {
    pub square: u32,
    pub image: GammaElement,
    /// False for the first square past the instability cutoff, which is
    /// evaluated as a consistency check and must vanish.
    pub below_cutoff: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitivityEvidence {
    pub degree: Option<u32>,
    pub checks: Vec<SquareCheck>,
}

impl PrimitivityEvidence {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.image.is_zero())
    }

    /// The first square with a nonzero image.
    pub fn first_failure(&self) -> Option<u32> {
        self.checks.iter().find(|c| !c.image.is_zero()).map(|c| c.square)
    }
}

/// Decides `A⁺`-annihilation by applying the generators `Sq^{2^k}` with
/// `2^{k+1} ≤ d`, plus the next square above that bound.
pub fn is_primitive(e: &GammaElement) -> Result<PrimitivityEvidence> {
    let degree = e.degree()?;
    let d = degree.unwrap_or(0);
    let mut squares = generator_squares(d);
    let beyond = squares.last().map_or(1, |q| 2 * q);
    let mut checks: Vec<SquareCheck> = squares
        .drain(..)
        .map(|q| SquareCheck {
            square: q,
            image: sq_right(e, q),
            below_cutoff: true,
        })
        .collect();
    if d > 0 {
        checks.push(SquareCheck {
            square: beyond,
            image: sq_right(e, beyond),
            below_cutoff: false,
        });
    }
    Ok(PrimitivityEvidence { degree, checks })
}

/// Number of monomials of rank `s` and degree `d`, `C(d+s-1, s-1)`.
pub fn gamma_basis_len(s: usize, d: u32) -> usize {
    if s == 0 {
        return usize::from(d == 0);
    }
    let (n, k) = (u128::from(d) + s as u128 - 1, s as u128 - 1);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    usize::try_from(acc).unwrap_or(usize::MAX)
}

/// All exponent vectors of length `s` summing to `d`, lexicographically.
pub fn gamma_basis(s: usize, d: u32) -> Vec<GammaMonomial> {
    fn go(left: usize, rem: u32, acc: &mut Exponents, out: &mut Vec<GammaMonomial>) {
        if left == 1 {
            acc.push(rem);
            out.push(GammaMonomial(acc.clone()));
            acc.pop();
            return;
        }
        for t in 0..=rem {
            acc.push(t);
            go(left - 1, rem - t, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::with_capacity(gamma_basis_len(s, d));
    if s == 0 {
        if d == 0 {
            out.push(GammaMonomial::default());
        }
        return out;
    }
    go(s, d, &mut Exponents::new(), &mut out);
    out
}

/// The matrix of `x ↦ ⊕_q (x)Sq^q` over the generator squares of degree `d`,
/// columns indexed by [`gamma_basis`]`(s, d)`.
pub fn steenrod_generator_matrix(s: usize, d: u32) -> BitMatrix {
    let source = gamma_basis(s, d);
    let mut offsets = Vec::new();
    let mut blocks = Vec::new();
    let mut total = 0usize;
    for q in generator_squares(d) {
        let target = gamma_basis(s, d - q);
        offsets.push(total);
        total += target.len();
        blocks.push((q, target));
    }
    let mut columns = Vec::with_capacity(source.len());
    for m in &source {
        let mut col = BitVector::zeros(total);
        for ((q, target), &off) in blocks.iter().zip(&offsets) {
            let mut img = GammaElement::zero(s);
            sq_right_monomial_into(m, *q, &mut img);
            for t in img.terms() {
                let at = target.binary_search(t).expect("image lies in the target basis");
                col.flip(off + at);
            }
        }
        columns.push(col);
    }
    BitMatrix::from_columns(total, &columns).expect("columns have the stacked length")
}

/// A basis of the primitives of rank `s` and degree `d`, refusing bases
/// larger than `limit` monomials.
pub fn primitive_basis_limited(s: usize, d: u32, limit: usize) -> Result<Vec<GammaElement>> {
    let needed = gamma_basis_len(s, d);
    if needed > limit {
        return Err(Error::ResourceLimit { needed, limit });
    }
    let source = gamma_basis(s, d);
    let m = steenrod_generator_matrix(s, d);
    let kernel = if m.nrows() == 0 {
        (0..source.len())
            .map(|i| BitVector::from_indices(source.len(), [i]))
            .collect()
    } else {
        m.kernel_basis()
    };
    Ok(kernel
        .into_iter()
        .map(|v| {
            GammaElement::from_terms(s, v.ones().map(|i| source[i].clone()))
                .expect("basis monomials have rank s")
        })
        .collect())
}

/// A basis of the primitives of rank `s` and degree `d`.
pub fn primitive_basis(s: usize, d: u32) -> Vec<GammaElement> {
    primitive_basis_limited(s, d, usize::MAX).expect("no limit")
}

/// Divided power product `a^{(i)} a^{(j)} = C(i+j, i) a^{(i+j)}` on one
/// generator; `None` when the coefficient vanishes.
#[cfg(test)]
pub(crate) fn divided_product(i: u32, j: u32) -> Option<u32> {
    binom_mod2(i64::from(i + j), i64::from(i)).then_some(i + j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeMap;
    use alloc::vec;

    fn g(rank: usize, ms: &[&[u32]]) -> GammaElement {
        GammaElement::from_terms(rank, ms.iter().map(|m| GammaMonomial::new(m.iter().copied())))
            .unwrap()
    }

    #[test]
    fn single_generator_examples() {
        assert_eq!(sq_right(&g(1, &[&[2]]), 1), g(1, &[&[1]]));
        assert_eq!(sq_right(&g(1, &[&[3]]), 1), GammaElement::zero(1));
        let x = g(3, &[&[4, 1, 7], &[0, 6, 6]]);
        assert_eq!(sq_right(&x, 0), x);
    }

    #[test]
    fn u24_is_primitive() {
        let u24 = g(5, &[&[1, 15, 3, 3, 2], &[1, 15, 3, 4, 1], &[1, 15, 5, 2, 1], &[1, 15, 6, 1, 1]]);
        let ev = is_primitive(&u24).unwrap();
        assert!(ev.holds());
        let squares: Vec<_> = ev.checks.iter().map(|c| c.square).collect();
        assert_eq!(squares, vec![1, 2, 4, 8, 16]);
    }

    #[test]
    fn small_primitivity_examples() {
        assert!(is_primitive(&g(1, &[&[1]])).unwrap().holds());
        assert!(!is_primitive(&g(1, &[&[2]])).unwrap().holds());
        assert_eq!(is_primitive(&g(1, &[&[2]])).unwrap().first_failure(), Some(1));
        assert!(is_primitive(&g(1, &[&[3]])).unwrap().holds());
        assert_eq!(is_primitive(&GammaElement::zero(2)).unwrap().degree, None);
        assert!(is_primitive(&GammaElement::zero(2)).unwrap().holds());
        assert_eq!(is_primitive(&g(2, &[&[1, 1], &[3, 0]])), Err(Error::NotHomogeneous));
    }

    #[test]
    fn basis_counts() {
        assert_eq!(gamma_basis(1, 7), vec![GammaMonomial::new([7])]);
        assert_eq!(
            gamma_basis(2, 2),
            vec![GammaMonomial::new([0, 2]), GammaMonomial::new([1, 1]), GammaMonomial::new([2, 0])]
        );
        assert_eq!(gamma_basis(5, 14).len(), 3060);
        assert_eq!(gamma_basis_len(5, 14), 3060);
        for s in 1..=5 {
            for d in 0..=12 {
                assert_eq!(gamma_basis(s, d).len(), gamma_basis_len(s, d));
            }
        }
    }

    #[test]
    fn primitive_basis_examples() {
        assert_eq!(primitive_basis(1, 3), vec![g(1, &[&[3]])]);
        assert_eq!(primitive_basis(3, 0), vec![g(3, &[&[0, 0, 0]])]);
        for b in primitive_basis(3, 9) {
            assert!(is_primitive(&b).unwrap().holds());
        }
        assert!(matches!(
            primitive_basis_limited(5, 14, 1000),
            Err(Error::ResourceLimit { needed: 3060, limit: 1000 })
        ));
    }

    /// Total square on the polynomial algebra: `Sq(x^n) = x^n (1+x)^n`, so
    /// `Sq^i x^n = C(n, i) x^{n+i}`, extended by the Cartan formula.
    fn poly_sq(m: &[u32], i: u32) -> BTreeSet<Vec<u32>> {
        let mut out = BTreeSet::new();
        fn go(m: &[u32], rem: u32, acc: &mut Vec<u32>, out: &mut BTreeSet<Vec<u32>>) {
            let Some((&n, rest)) = m.split_first() else {
                if rem == 0 && !out.remove(acc) {
                    out.insert(acc.clone());
                }
                return;
            };
            for ik in 0..=rem.min(n) {
                if binom_mod2(i64::from(n), i64::from(ik)) {
                    acc.push(n + ik);
                    go(rest, rem - ik, acc, out);
                    acc.pop();
                }
            }
        }
        go(m, i, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn right_action_is_dual_to_polynomial_squares() {
        // <θ·Sq^i, x^M> = <θ, Sq^i x^M> for all monomials θ of rank 3.
        for d in 0..=12u32 {
            for i in 0..=d {
                let mut dual: BTreeMap<Vec<u32>, BTreeSet<Vec<u32>>> = BTreeMap::new();
                for target in gamma_basis(3, d - i) {
                    for hit in poly_sq(target.exponents(), i) {
                        dual.entry(hit).or_default().insert(target.exponents().to_vec());
                    }
                }
                for theta in gamma_basis(3, d) {
                    let img = sq_right(&GammaElement::monomial(theta.clone()), i);
                    let got: BTreeSet<Vec<u32>> =
                        img.terms().map(|m| m.exponents().to_vec()).collect();
                    let expected = dual.get(theta.exponents()).cloned().unwrap_or_default();
                    assert_eq!(got, expected, "{theta} Sq^{i}");
                }
            }
        }
    }

    #[test]
    fn cartan_formula_on_divided_products() {
        // In one variable (a^{(i)} a^{(j)}) Sq^k = Σ (a^{(i)} Sq^p)(a^{(j)} Sq^{k-p}).
        let act = |t: u32, p: u32| -> Option<u32> {
            (2 * p <= t && binom_mod2(i64::from(t - p), i64::from(p))).then(|| t - p)
        };
        for i in 0..20 {
            for j in 0..20 {
                for k in 0..=(i + j) {
                    let lhs = divided_product(i, j)
                        .and_then(|t| act(t, k))
                        .is_some();
                    let mut rhs = false;
                    for p in 0..=k {
                        if let (Some(x), Some(y)) = (act(i, p), act(j, k - p)) {
                            rhs ^= divided_product(x, y).is_some();
                        }
                    }
                    assert_eq!(lhs, rhs, "i={i} j={j} k={k}");
                }
            }
        }
    }
}
