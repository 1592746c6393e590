//! Special functions and quadrature used by the analytic formulas.
//!
//! Everything here is a pure function of its arguments.

mod elliptic;
mod gamma;
mod quad;
mod tricomi;

pub use elliptic::{carlson_rf, elliptic_k_modulus};
pub use gamma::{digamma, ln_gamma, EULER_GAMMA};
pub use quad::{
    integrate_adaptive, integrate_adaptive_with, integrate_semi_infinite, integrate_tanh_sinh, QuadOptions,
    QuadratureResult,
};
pub use tricomi::{ln_tricomi_u, ln_tricomi_u_with, tricomi_u};
