//! Scalar arithmetic mod 2 and dense bit-packed linear algebra over F₂.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

const WORD: usize = u64::BITS as usize;

/// `C(n, k) mod 2`, zero whenever `k < 0`, `n < 0` or `k > n`.
///
/// For `0 ≤ k ≤ n` this is Lucas' theorem: the coefficient is odd iff every
/// binary digit of `k` is at most the corresponding digit of `n`.
#[inline]
pub fn binom_mod2(n: i64, k: i64) -> bool {
    if n < 0 || k < 0 || k > n {
        return false;
    }
    k & !n == 0
}

/// A vector over F₂ packed 64 coordinates to a word.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    /// Vector with ones exactly at `indices`; repeated indices cancel.
    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "coordinate {i} out of range {}", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "coordinate {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "coordinate {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of the nonzero coordinates in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            core::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD + bit)
            })
        })
    }

    /// `self += other`, coordinatewise XOR.
    pub fn add_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "vector length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "vector length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    #[inline]
    fn xor_from_word(&mut self, other: &BitVector, start: usize) {
        for (a, b) in self.words[start..].iter_mut().zip(&other.words[start..]) {
            *a ^= b;
        }
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        f.write_str("]")
    }
}

/// Dense row-major matrix over F₂.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            cols,
            rows: (0..rows).map(|_| BitVector::zeros(cols)).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from its rows. All rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(BitMatrix { cols, rows })
    }

    /// Builds a `nrows × columns.len()` matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(nrows: usize, columns: &[BitVector]) -> Result<Self> {
        let mut m = Self::zeros(nrows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != nrows {
                return Err(Error::DimensionMismatch {
                    expected: nrows,
                    found: c.len(),
                });
            }
            for i in c.ones() {
                m.rows[i].flip(j);
            }
        }
        Ok(m)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value)
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        self.rows[i].flip(j)
    }

    pub fn column(&self, j: usize) -> BitVector {
        let mut c = BitVector::zeros(self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.get(j) {
                c.flip(i);
            }
        }
        c
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVector::is_zero)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.rows.swap(a, b);
    }

    /// `row[dst] += row[src]`.
    pub fn add_row(&mut self, src: usize, dst: usize) {
        assert_ne!(src, dst);
        let s = self.rows[src].clone();
        self.rows[dst].add_assign(&s);
    }

    /// Matrix-vector product `M·x`.
    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        let mut out = BitVector::zeros(self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(x) {
                out.flip(i);
            }
        }
        Ok(out)
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if other.nrows() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.nrows(),
            });
        }
        let mut out = BitMatrix::zeros(self.nrows(), other.ncols());
        for (i, r) in self.rows.iter().enumerate() {
            for k in r.ones() {
                out.rows[i].add_assign(&other.rows[k]);
            }
        }
        Ok(out)
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if other.nrows() != self.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.nrows(),
                found: other.nrows(),
            });
        }
        let cols = self.cols + other.cols;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut r = BitVector::zeros(cols);
                for j in a.ones() {
                    r.flip(j);
                }
                for j in b.ones() {
                    r.flip(self.cols + j);
                }
                r
            })
            .collect();
        Ok(BitMatrix { cols, rows })
    }

    /// Gaussian elimination in place. Returns the pivot columns; the first
    /// `pivots.len()` rows are the echelon rows. With `reduced` every pivot
    /// column is cleared above its pivot as well.
    fn eliminate(&mut self, reduced: bool) -> Vec<usize> {
        let nrows = self.rows.len();
        let mut pivots = Vec::new();
        for col in 0..self.cols {
            let rank = pivots.len();
            if rank == nrows {
                break;
            }
            let w = col / WORD;
            let mask = 1u64 << (col % WORD);
            let Some(found) = (rank..nrows).find(|&r| self.rows[r].words[w] & mask != 0) else {
                continue;
            };
            self.rows.swap(rank, found);
            let (head, tail) = self.rows.split_at_mut(rank);
            let (pivot, below) = tail.split_first_mut().expect("pivot row exists");
            for r in below.iter_mut() {
                if r.words[w] & mask != 0 {
                    r.xor_from_word(pivot, w);
                }
            }
            if reduced {
                for r in head.iter_mut() {
                    if r.words[w] & mask != 0 {
                        r.xor_from_word(pivot, w);
                    }
                }
            }
            pivots.push(col);
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate(false).len()
    }

    /// The columns that are not in the span of the columns to their left.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.clone().eliminate(false)
    }

    /// A basis of `{x : M·x = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<BitVector> {
        let mut m = self.clone();
        let pivots = m.eliminate(true);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = BitVector::zeros(self.cols);
                x.set(f, true);
                for (i, &p) in pivots.iter().enumerate() {
                    if m.rows[i].get(f) {
                        x.set(p, true);
                    }
                }
                x
            })
            .collect()
    }

    /// Some `x` with `M·x = b`, or `None` when `b` is not in the column space.
    ///
    /// Free variables are set to zero, so the solution is the one selected by
    /// the elimination order.
    pub fn solve(&self, b: &BitVector) -> Result<Option<BitVector>> {
        if b.len() != self.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.nrows(),
                found: b.len(),
            });
        }
        let rhs = BitMatrix::from_columns(self.nrows(), core::slice::from_ref(b))?;
        let mut aug = self.hstack(&rhs)?;
        let pivots = aug.eliminate(true);
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = BitVector::zeros(self.cols);
        for (i, &p) in pivots.iter().enumerate() {
            if aug.rows[i].get(self.cols) {
                x.set(p, true);
            }
        }
        Ok(Some(x))
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.nrows(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "{r:?}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn pascal_mod2(max: usize) -> Vec<Vec<bool>> {
        let mut t = vec![vec![false; max + 1]; max + 1];
        for n in 0..=max {
            t[n][0] = true;
            for k in 1..=n {
                t[n][k] = t[n - 1][k - 1] ^ t[n - 1][k];
            }
        }
        t
    }

    #[test]
    fn binomials_match_pascal() {
        let t = pascal_mod2(256);
        for n in 0..=256 {
            for k in 0..=256 {
                assert_eq!(binom_mod2(n as i64, k as i64), t[n][k], "C({n},{k})");
            }
        }
    }

    #[test]
    fn binomial_examples() {
        assert!(binom_mod2(0, 0));
        assert!(!binom_mod2(-1, 1));
        assert!(!binom_mod2(-1, 0));
        assert!(!binom_mod2(2, 1));
        assert!(binom_mod2(3, 1));
        assert!(!binom_mod2(4, 2));
        assert!(!binom_mod2(3, 5));
    }

    #[test]
    fn identity_solve_and_zero_rank() {
        let id = BitMatrix::identity(3);
        let b = BitVector::from_indices(3, [0, 2]);
        assert_eq!(id.solve(&b).unwrap(), Some(b));
        assert_eq!(BitMatrix::zeros(5, 7).rank(), 0);
        assert_eq!(BitMatrix::zeros(5, 7).kernel_basis().len(), 7);
    }

    #[test]
    fn solve_reports_inconsistent_system() {
        // x0 + x1 = 1 and x0 + x1 = 0
        let mut m = BitMatrix::zeros(2, 2);
        m.set(0, 0, true);
        m.set(0, 1, true);
        m.set(1, 0, true);
        m.set(1, 1, true);
        let b = BitVector::from_indices(2, [0]);
        assert_eq!(m.solve(&b).unwrap(), None);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let m = BitMatrix::zeros(3, 4);
        assert!(m.solve(&BitVector::zeros(4)).is_err());
        assert!(m.mul_vec(&BitVector::zeros(3)).is_err());
        assert!(BitMatrix::from_rows(4, vec![BitVector::zeros(5)]).is_err());
    }

    fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> BitMatrix {
        let mut m = BitMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if rng.gen_bool(0.3) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    #[test]
    fn rank_nullity_on_random_40x60() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let m = random_matrix(&mut rng, 40, 60);
            let ker = m.kernel_basis();
            assert_eq!(m.rank() + ker.len(), 60);
            for v in &ker {
                assert!(m.mul_vec(v).unwrap().is_zero());
            }
            // independence of the kernel basis
            assert_eq!(BitMatrix::from_rows(60, ker.clone()).unwrap().rank(), ker.len());
        }
    }

    #[test]
    fn solve_recovers_a_preimage() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let m = random_matrix(&mut rng, 30, 70);
            let x0 = BitVector::from_indices(70, (0..70).filter(|_| rng.gen_bool(0.5)));
            let b = m.mul_vec(&x0).unwrap();
            let x = m.solve(&b).unwrap().expect("b is in the image");
            assert_eq!(m.mul_vec(&x).unwrap(), b);
        }
    }

    #[test]
    fn rank_invariant_under_row_operations() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..30 {
            let mut m = random_matrix(&mut rng, 25, 40);
            let r = m.rank();
            for _ in 0..50 {
                let a = rng.gen_range(0..25);
                let b = rng.gen_range(0..25);
                if a == b {
                    continue;
                }
                if rng.gen_bool(0.5) {
                    m.swap_rows(a, b);
                } else {
                    m.add_row(a, b);
                }
            }
            assert_eq!(m.rank(), r);
        }
    }

    #[test]
    fn ones_iterates_set_bits() {
        let v = BitVector::from_indices(200, [3, 64, 130, 199]);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![3, 64, 130, 199]);
        assert_eq!(v.count_ones(), 4);
    }

    #[test]
    fn pivot_columns_pick_the_leftmost_independent_set() {
        let cols = [
            BitVector::from_indices(3, [0]),
            BitVector::from_indices(3, [0]),
            BitVector::from_indices(3, [1]),
            BitVector::from_indices(3, [0, 1]),
            BitVector::from_indices(3, [2]),
        ];
        let m = BitMatrix::from_columns(3, &cols).unwrap();
        assert_eq!(m.pivot_columns(), vec![0, 2, 4]);
    }
}
