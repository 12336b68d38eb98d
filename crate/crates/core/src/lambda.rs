//! The mod-2 Lambda algebra: words in the generators `λ_t`, rewriting to the
//! admissible basis, products, the differential and the `Sq⁰` endomorphism.
//!
//! A word `λ_{t_1}···λ_{t_s}` has bidegree `(s, d)` with `d = Σ t_k`; its
//! class lives in `Ext^{s, s+d}`. A word is admissible when
//! `t_k ≤ 2 t_{k+1}` for every adjacent pair. An inadmissible pair
//! `λ_{2k+1+n} λ_k` is rewritten by
//!
//! ```text
//! λ_{2k+1+n} λ_k = Σ_{j≥0} C(n-j-1, j) λ_{2k+1+j} λ_{k+n-j}
//! ```
//!
//! and the differential on generators is
//!
//! ```text
//! ∂λ_n = Σ_{j≥1} C(n-j, j) λ_{j-1} λ_{n-j},
//! ```
//!
//! extended to words by the Leibniz rule.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::f2::binom_mod2;

pub type Indices = SmallVec<[u32; 6]>;

/// Homological length `s` and internal degree `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bidegree {
    pub s: u32,
    pub d: u32,
}

impl Bidegree {
    pub const fn new(s: u32, d: u32) -> Self {
        Bidegree { s, d }
    }

    /// `s + d`, the second index of `Ext^{s, s+d}`.
    pub fn topological(self) -> u32 {
        self.s + self.d
    }

    /// Where the differential lands.
    pub fn next(self) -> Option<Bidegree> {
        (self.d > 0).then(|| Bidegree::new(self.s + 1, self.d - 1))
    }

    /// Where boundaries into this bidegree come from.
    pub fn prev(self) -> Option<Bidegree> {
        (self.s > 0).then(|| Bidegree::new(self.s - 1, self.d + 1))
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.s, self.d)
    }
}

/// A word `λ_{t_1}···λ_{t_s}`; the empty word is the unit.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LambdaMonomial(Indices);

impl LambdaMonomial {
    pub fn new(indices: impl IntoIterator<Item = u32>) -> Self {
        LambdaMonomial(indices.into_iter().collect())
    }

    pub fn unit() -> Self {
        LambdaMonomial(Indices::new())
    }

    pub fn generator(t: u32) -> Self {
        LambdaMonomial::new([t])
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn bidegree(&self) -> Bidegree {
        Bidegree::new(self.0.len() as u32, self.degree())
    }

    pub fn is_admissible(&self) -> bool {
        self.0.windows(2).all(|w| pair_admissible(w[0], w[1]))
    }

    /// Concatenation `self · other` as a word, without rewriting.
    pub fn concat(&self, other: &LambdaMonomial) -> LambdaMonomial {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        LambdaMonomial(v)
    }

    fn inadmissible_position(&self, strategy: Strategy) -> Option<usize> {
        let bad = |i: &usize| !pair_admissible(self.0[*i], self.0[*i + 1]);
        let n = self.0.len().saturating_sub(1);
        match strategy {
            Strategy::Leftmost => (0..n).find(bad),
            Strategy::Rightmost => (0..n).rev().find(bad),
        }
    }

    fn splice(&self, at: usize, pair: (u32, u32)) -> LambdaMonomial {
        let mut v = self.0.clone();
        v[at] = pair.0;
        v[at + 1] = pair.1;
        LambdaMonomial(v)
    }
}

impl fmt::Display for LambdaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("L[")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for LambdaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[inline]
fn pair_admissible(first: u32, second: u32) -> bool {
    u64::from(first) <= 2 * u64::from(second)
}

/// An F₂-linear combination of words; a word is present iff its coefficient is 1.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LambdaElement {
    terms: BTreeSet<LambdaMonomial>,
}

impl LambdaElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit() -> Self {
        LambdaMonomial::unit().into()
    }

    pub fn generator(t: u32) -> Self {
        LambdaMonomial::generator(t).into()
    }

    /// Sum of the given words; repeated words cancel in pairs.
    pub fn from_terms(terms: impl IntoIterator<Item = LambdaMonomial>) -> Self {
        let mut e = Self::zero();
        for m in terms {
            e.toggle(m);
        }
        e
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

    /// Terms in lexicographic order of their index sequences.
    pub fn terms(&self) -> impl ExactSizeIterator<Item = &LambdaMonomial> + '_ {
        self.terms.iter()
    }

    pub fn contains(&self, m: &LambdaMonomial) -> bool {
        self.terms.contains(m)
    }

    pub fn toggle(&mut self, m: LambdaMonomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    /// The common bidegree of all terms, `None` for zero.
    pub fn bidegree(&self) -> Result<Option<Bidegree>> {
        let mut it = self.terms.iter().map(LambdaMonomial::bidegree);
        let Some(first) = it.next() else {
            return Ok(None);
        };
        if it.all(|b| b == first) {
            Ok(Some(first))
        } else {
            Err(Error::NotHomogeneous)
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.bidegree().is_ok()
    }

    pub fn is_normalized(&self) -> bool {
        self.terms.iter().all(LambdaMonomial::is_admissible)
    }

    pub fn normalized(&self) -> LambdaElement {
        normalize(self)
    }
}

impl From<LambdaMonomial> for LambdaElement {
    fn from(m: LambdaMonomial) -> Self {
        let mut terms = BTreeSet::new();
        terms.insert(m);
        LambdaElement { terms }
    }
}

impl FromIterator<LambdaMonomial> for LambdaElement {
    fn from_iter<I: IntoIterator<Item = LambdaMonomial>>(iter: I) -> Self {
        Self::from_terms(iter)
    }
}

impl AddAssign<&LambdaElement> for LambdaElement {
    fn add_assign(&mut self, rhs: &LambdaElement) {
        for m in &rhs.terms {
            self.toggle(m.clone());
        }
    }
}

impl Add<&LambdaElement> for &LambdaElement {
    type Output = LambdaElement;

    fn add(self, rhs: &LambdaElement) -> LambdaElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl fmt::Display for LambdaElement {
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

impl fmt::Debug for LambdaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// True iff every adjacent pair satisfies `t_k ≤ 2 t_{k+1}`.
pub fn is_admissible(m: &LambdaMonomial) -> bool {
    m.is_admissible()
}

fn adem_pairs(first: u32, second: u32) -> SmallVec<[(u32, u32); 4]> {
    debug_assert!(!pair_admissible(first, second));
    let k = i64::from(second);
    let n = i64::from(first) - 2 * k - 1;
    let mut out = SmallVec::new();
    let mut j = 0i64;
    while 2 * j < n {
        if binom_mod2(n - j - 1, j) {
            out.push(((2 * k + 1 + j) as u32, (k + n - j) as u32));
        }
        j += 1;
    }
    out
}

/// Rewrites the inadmissible pair `λ_first λ_second` (`first ≥ 2·second + 1`).
///
/// Every pair `(a, b)` in the result is admissible and has `b > second`.
pub fn adem_expand_pair(first: u32, second: u32) -> Result<LambdaElement> {
    if pair_admissible(first, second) {
        return Err(Error::AdmissiblePair { first, second });
    }
    Ok(adem_pairs(first, second)
        .into_iter()
        .map(|(a, b)| LambdaMonomial::new([a, b]))
        .collect())
}

/// `∂λ_n` as a list of two-letter words.
fn differential_pairs(n: u32) -> SmallVec<[(u32, u32); 4]> {
    let n = i64::from(n);
    (1..=n / 2)
        .filter(|&j| binom_mod2(n - j, j))
        .map(|j| ((j - 1) as u32, (n - j) as u32))
        .collect()
}

/// Which inadmissible pair a rewriting step expands first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Leftmost,
    Rightmost,
}

/// Rewrites elements to admissible form, memoizing two-letter expansions.
#[derive(Clone, Debug, Default)]
pub struct Normalizer {
    strategy: Strategy,
    pairs: BTreeMap<(u32, u32), SmallVec<[(u32, u32); 4]>>,
}

impl Normalizer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_strategy(strategy: Strategy) -> Self {
        Normalizer {
            strategy,
            pairs: BTreeMap::new(),
        }
    }

    fn expansion(&mut self, first: u32, second: u32) -> &SmallVec<[(u32, u32); 4]> {
        self.pairs
            .entry((first, second))
            .or_insert_with(|| adem_pairs(first, second))
    }

    pub fn normalize(&mut self, e: &LambdaElement) -> LambdaElement {
        self.normalize_terms(e.terms.iter().cloned())
    }

    /// Normal form of a formal sum of (possibly inadmissible) words.
    pub fn normalize_terms(
        &mut self,
        words: impl IntoIterator<Item = LambdaMonomial>,
    ) -> LambdaElement {
        let mut pending = LambdaElement::from_terms(words);
        let mut done = LambdaElement::zero();
        while let Some(w) = pending.terms.pop_first() {
            match w.inadmissible_position(self.strategy) {
                None => done.toggle(w),
                Some(at) => {
                    let (a, b) = (w.0[at], w.0[at + 1]);
                    for &pair in self.expansion(a, b).iter() {
                        pending.toggle(w.splice(at, pair));
                    }
                }
            }
        }
        done
    }

    pub fn product(&mut self, x: &LambdaElement, y: &LambdaElement) -> LambdaElement {
        let words: Vec<_> = x
            .terms
            .iter()
            .flat_map(|a| y.terms.iter().map(move |b| a.concat(b)))
            .collect();
        self.normalize_terms(words)
    }

    pub fn differential(&mut self, e: &LambdaElement) -> LambdaElement {
        let mut words = LambdaElement::zero();
        for w in &e.terms {
            for (i, &t) in w.0.iter().enumerate() {
                for (a, b) in differential_pairs(t) {
                    let mut v: Indices = Indices::with_capacity(w.len() + 1);
                    v.extend_from_slice(&w.0[..i]);
                    v.push(a);
                    v.push(b);
                    v.extend_from_slice(&w.0[i + 1..]);
                    words.toggle(LambdaMonomial(v));
                }
            }
        }
        self.normalize_terms(words.terms)
    }

    pub fn sq0(&mut self, e: &LambdaElement) -> LambdaElement {
        self.normalize_terms(
            e.terms
                .iter()
                .map(|w| LambdaMonomial(w.0.iter().map(|&t| 2 * t + 1).collect())),
        )
    }
}

/// Admissible normal form, expanding the leftmost inadmissible pair first.
pub fn normalize(e: &LambdaElement) -> LambdaElement {
    Normalizer::new().normalize(e)
}

/// Concatenation product followed by normalization.
pub fn product(x: &LambdaElement, y: &LambdaElement) -> LambdaElement {
    Normalizer::new().product(x, y)
}

/// The differential, returned in normal form. Maps `(s, d)` to `(s+1, d-1)`.
pub fn differential(e: &LambdaElement) -> LambdaElement {
    Normalizer::new().differential(e)
}

/// `Sq⁰`: every index `t` becomes `2t + 1`. Maps `(s, d)` to `(s, 2d + s)`.
pub fn sq0(e: &LambdaElement) -> LambdaElement {
    Normalizer::new().sq0(e)
}

/// The admissible words of length `s` and degree `d`, in lexicographic order.
pub fn admissible_basis(s: u32, d: u32) -> Vec<LambdaMonomial> {
    fn go(prefix: &mut Indices, left: u32, rem: u32, out: &mut Vec<LambdaMonomial>) {
        if left == 0 {
            if rem == 0 {
                out.push(LambdaMonomial(prefix.clone()));
            }
            return;
        }
        // admissibility: the next index is at least half the previous one
        let lo = prefix.last().map_or(0, |&p| p.div_ceil(2));
        if left == 1 {
            if rem >= lo {
                prefix.push(rem);
                out.push(LambdaMonomial(prefix.clone()));
                prefix.pop();
            }
            return;
        }
        for t in lo..=rem {
            // the remaining letters are each at least ⌈t/2⌉ > 0 when t > 0
            if t > 0 && rem - t < t.div_ceil(2) {
                break;
            }
            prefix.push(t);
            go(prefix, left - 1, rem - t, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Indices::new(), s, d, &mut out);
    out
}

/// `admissible_basis(s, d).len()` without enumerating, saturating at `usize::MAX`.
pub fn admissible_basis_len(s: u32, d: u32) -> usize {
    fn count(left: u32, rem: u32, lo: u32, memo: &mut BTreeMap<(u32, u32, u32), u128>) -> u128 {
        if left == 0 {
            return u128::from(rem == 0);
        }
        if left == 1 {
            return u128::from(rem >= lo);
        }
        if let Some(&c) = memo.get(&(left, rem, lo)) {
            return c;
        }
        let mut total = 0u128;
        for t in lo..=rem {
            total = total.saturating_add(count(left - 1, rem - t, t.div_ceil(2), memo));
        }
        memo.insert((left, rem, lo), total);
        total
    }
    usize::try_from(count(s, d, 0, &mut BTreeMap::new())).unwrap_or(usize::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn w(ix: &[u32]) -> LambdaMonomial {
        LambdaMonomial::new(ix.iter().copied())
    }

    fn el(words: &[&[u32]]) -> LambdaElement {
        words.iter().map(|ix| w(ix)).collect()
    }

    #[test]
    fn admissibility_examples() {
        assert!(w(&[3, 5]).is_admissible());
        assert!(w(&[5, 3]).is_admissible());
        assert!(!w(&[2, 0]).is_admissible());
        assert!(w(&[0, 2]).is_admissible());
        assert!(w(&[7]).is_admissible());
        assert!(LambdaMonomial::unit().is_admissible());
    }

    #[test]
    fn adem_pair_examples() {
        assert_eq!(adem_expand_pair(1, 0).unwrap(), LambdaElement::zero());
        assert_eq!(adem_expand_pair(6, 2).unwrap(), el(&[&[5, 3]]));
        assert_eq!(adem_expand_pair(2, 0).unwrap(), el(&[&[1, 1]]));
        assert_eq!(
            adem_expand_pair(5, 3),
            Err(Error::AdmissiblePair { first: 5, second: 3 })
        );
    }

    #[test]
    fn adem_pairs_are_admissible_and_move_right_index_up() {
        for second in 0..40 {
            for first in (2 * second + 1)..(2 * second + 60) {
                for (a, b) in adem_pairs(first, second) {
                    assert!(pair_admissible(a, b), "({a},{b}) from ({first},{second})");
                    assert!(b > second);
                    assert_eq!(a + b, first + second);
                }
            }
        }
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize(&el(&[&[3, 5]])), el(&[&[3, 5]]));
        assert_eq!(normalize(&el(&[&[2, 0]])), el(&[&[1, 1]]));
        assert_eq!(normalize(&el(&[&[6, 2], &[5, 3]])), LambdaElement::zero());
    }

    #[test]
    fn differential_examples() {
        assert!(differential(&LambdaElement::generator(1)).is_zero());
        assert_eq!(differential(&LambdaElement::generator(2)), el(&[&[0, 1]]));
        let d0 = el(&[&[3, 3, 2, 6], &[3, 3, 4, 4], &[3, 5, 4, 2], &[7, 1, 5, 1]]);
        assert!(differential(&d0).is_zero());
        assert!(differential(&el(&[&[3, 3, 2]])).is_zero());
    }

    #[test]
    fn differential_of_generators_by_hand() {
        // ∂λ_9: C(8,1)=0, C(7,2)=1, C(6,3)=0, C(5,4)=1
        assert_eq!(differential_pairs(9).to_vec(), vec![(1, 7), (3, 5)]);
        assert!(differential_pairs(0).is_empty());
        assert!(differential_pairs(3).is_empty());
    }

    #[test]
    fn sq0_examples() {
        assert_eq!(sq0(&LambdaElement::generator(0)), LambdaElement::generator(1));
        assert_eq!(sq0(&LambdaElement::unit()), LambdaElement::unit());
        assert_eq!(sq0(&el(&[&[3, 3, 2]])), el(&[&[7, 7, 5]]));
    }

    #[test]
    fn unit_is_identity_for_product() {
        let x = el(&[&[6, 2], &[1, 4, 2]]);
        assert_eq!(product(&LambdaElement::unit(), &x), normalize(&x));
        assert_eq!(product(&x, &LambdaElement::unit()), normalize(&x));
    }

    #[test]
    fn basis_examples() {
        assert_eq!(admissible_basis(1, 9), vec![w(&[9])]);
        assert_eq!(admissible_basis(2, 2), vec![w(&[0, 2]), w(&[1, 1])]);
        assert_eq!(admissible_basis(0, 0), vec![LambdaMonomial::unit()]);
        assert!(admissible_basis(0, 4).is_empty());
    }

    #[test]
    fn basis_matches_brute_force() {
        fn compositions(s: u32, d: u32) -> Vec<Vec<u32>> {
            if s == 0 {
                return if d == 0 { vec![vec![]] } else { vec![] };
            }
            let mut out = Vec::new();
            for t in 0..=d {
                for mut rest in compositions(s - 1, d - t) {
                    rest.insert(0, t);
                    out.push(rest);
                }
            }
            out
        }
        for s in 0..=5 {
            for d in 0..=14 {
                let mut brute: Vec<_> = compositions(s, d)
                    .into_iter()
                    .map(LambdaMonomial::new)
                    .filter(LambdaMonomial::is_admissible)
                    .collect();
                brute.sort();
                assert_eq!(admissible_basis_len(s, d), brute.len());
                assert_eq!(admissible_basis(s, d), brute, "({s},{d})");
            }
        }
    }

    #[test]
    fn homogeneity() {
        assert_eq!(LambdaElement::zero().bidegree(), Ok(None));
        assert_eq!(
            el(&[&[1, 2], &[3, 0]]).bidegree(),
            Ok(Some(Bidegree::new(2, 3)))
        );
        assert_eq!(el(&[&[1, 2], &[3]]).bidegree(), Err(Error::NotHomogeneous));
    }

    #[test]
    fn display_is_canonical() {
        let e = el(&[&[3, 5], &[1, 1], &[]]);
        assert_eq!(e.to_string(), "L[] + L[1,1] + L[3,5]");
        assert_eq!(LambdaElement::zero().to_string(), "0");
    }
}
