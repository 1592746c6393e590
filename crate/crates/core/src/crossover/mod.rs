//! Eigenvector-component statistics for the orthogonal (OE), unitary (UE)
//! and crossover ensembles.
//!
//! Everything is phrased in the scaled intensity `x = N|c|²`, whose mean is 1.
//! The crossover law `P(ε, x)` interpolates between the Porter–Thomas limits
//! `e^{-x/2}/√(2πx)` (ε → 0) and `e^{-x}` (ε → ∞), with `ε = α²N`.

mod closed;
mod law;
mod moments;
mod pdf;

pub use closed::{
    d_q_oe, d_q_ue, pdf_oe_asymptotic, pdf_oe_finite, pdf_ue_asymptotic, pdf_ue_finite, s_q_inf_oe, s_q_inf_ue,
};
pub use law::{ks_critical_value, ComponentLaw, LawTable};
pub use moments::{
    d_q_crossover, moment_crossover, moment_crossover_with, s_q_inf_crossover, xlogx_crossover, xlogx_crossover_with,
};
pub use pdf::{pdf_crossover, pdf_crossover_log, pdf_crossover_with};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rescaled crossover parameter `ε = α²N`; 0 is the OE limit.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct CrossoverParam {
    pub epsilon: f64,
}

impl CrossoverParam {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon >= 0.0) || !epsilon.is_finite() {
            return Err(Error::domain(
                "CrossoverParam",
                format!("epsilon = {epsilon} must be finite and non-negative"),
            ));
        }
        Ok(CrossoverParam { epsilon })
    }

    /// `ε = α²N` for the Pandey–Mehta mixing parameter `α`.
    pub fn from_alpha(alpha: f64, n_dim: usize) -> Result<Self> {
        Self::new(alpha * alpha * n_dim as f64)
    }

    fn positive(self, op: &'static str) -> Result<f64> {
        if self.epsilon > 0.0 && self.epsilon.is_finite() {
            Ok(self.epsilon)
        } else {
            Err(Error::domain(
                op,
                format!("epsilon = {} must be positive", self.epsilon),
            ))
        }
    }
}

/// Ensemble-averaged dimension `D̃_q` at matrix size `n_dim`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractalDimensionPoint {
    pub q: f64,
    pub n_dim: usize,
    pub value: f64,
}

impl FractalDimensionPoint {
    /// The matching shifted-scaled value `S̃_q = ln N (1 − D̃_q)`.
    pub fn shifted_scaled(&self) -> f64 {
        (self.n_dim as f64).ln() * (1.0 - self.value)
    }
}

pub(crate) fn check_q(op: &'static str, q: f64) -> Result<()> {
    if q >= 1.0 && q.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("q = {q} must be finite and >= 1")))
    }
}

// Tolerance below which q is treated as exactly 1 and the entropy branch is taken.
pub(crate) const Q_ONE_TOL: f64 = 1e-12;
