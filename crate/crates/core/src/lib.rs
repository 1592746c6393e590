//! Multifractal dimensions of random-matrix eigenvectors across the
//! orthogonal-to-unitary (GOE→GUE) symmetry crossover.
//!
//! The crate is organised bottom-up:
//!
//! - [`specfun`]: log-gamma, digamma, Tricomi's confluent hypergeometric `U`,
//!   the complete elliptic integral `K` and adaptive quadrature.
//! - [`crossover`]: closed-form OE/UE eigenvector statistics and the
//!   semi-analytic crossover distribution `P(ε, x)`, its moments and the
//!   resulting ensemble-averaged fractal dimensions `D̃_q` and `S̃_q`.
//! - [`ensembles`]: the Pandey–Mehta GOE→GUE matrix model, Hermitian
//!   eigen-decomposition and the Wigner semicircle.
//! - [`estimators`]: per-state moments `I_q`, `D_q`, `S_q`, ensemble and
//!   spectral averages, component histograms, KS distances and maximum
//!   likelihood fits of `ε`.
//! - [`models`]: the quantum kicked rotor Floquet matrix, a quarter Sinai
//!   tight-binding billiard with Peierls phases, and a spin-1/2 chain with
//!   scalar chirality restricted to a fixed `S^z` block.
//!
//! Matrices are [`faer::Mat`] over [`faer::c64`].

// Validation is written `!(a < b)` so that NaN is rejected; quadrature
// and series coefficients are kept exactly as tabulated.
#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::excessive_precision,
    clippy::needless_range_loop,
    clippy::manual_is_multiple_of
)]

pub mod crossover;
pub mod ensembles;
mod error;
pub mod estimators;
pub mod linalg;
pub mod models;
pub mod rng;
pub mod specfun;

pub use error::{Error, Result};
pub use faer::{c64, Mat};
