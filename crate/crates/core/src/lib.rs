//! Computations around uncertainty principles for functions with lacunary
//! spectra.
//!
//! The crate is organised by object:
//!
//! * [`sequences`]: lacunary sequences, their Hadamard/Zygmund certificates,
//!   the greedy strong-Zygmund construction and the `4^k + jk` counterexample.
//! * [`sets`]: thick sets as finite unions of intervals, exact thickness and
//!   the good/bad subinterval partition.
//! * [`synthesis`]: sampled functions with prescribed spectra on a periodic
//!   grid, plus the Poisson multiplier, Bernstein ratio and sampling sums.
//! * [`concentration`]: Gram and concentration forms and their smallest
//!   eigenvalues, i.e. best constants in `‖f‖² ≤ C ∫_E |f|²`.
//! * [`uniqueness`]: the separation condition, the weight `ω`, and the
//!   Carleman–Denjoy moment sequence.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod concentration;
pub mod error;
pub mod kernel;
pub mod linalg;
pub mod sequences;
pub mod sets;
pub mod synthesis;
pub mod uniqueness;

pub use error::{Error, Result};
