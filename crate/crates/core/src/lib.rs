//! Exact mod-2 computations in the Lambda algebra and the divided power
//! algebra, and the Lambda-algebra representation of the Singer transfer.
//!
//! Conventions follow the opposite-algebra presentation of Λ: a word
//! `λ_{t_1}···λ_{t_s}` is admissible when `t_k ≤ 2 t_{k+1}`, the relations
//! rewrite `λ_{2k+1+n} λ_k` for `n ≥ 0`, and the differential is
//! `∂λ_n = Σ_{j≥1} C(n-j, j) λ_{j-1} λ_{n-j}`. Under these conventions Lin's
//! cocycle representatives (`c_0 = λ_3²λ_2`, `d_0`, `e_0`, `g_1`) are cycles.
//!
//! The crate is `no_std` and only needs `alloc`.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod f2;
pub mod gamma;
pub mod homology;
pub mod lambda;
pub mod transfer;

pub use error::{Error, Result};
pub use f2::{binom_mod2, BitMatrix, BitVector};
pub use gamma::{GammaElement, GammaMonomial};
pub use homology::Homology;
pub use lambda::{Bidegree, LambdaElement, LambdaMonomial};
