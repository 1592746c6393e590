//! Floquet operator of the quantum kicked rotor on an `N`-site torus.
//!
//! Rows and columns carry signed labels `m, n ∈ {−N′, …, N′}` with
//! `N′ = (N−1)/2`, stored at index `m + N′`:
//!
//! `U_mn = (1/N) exp[−iα cos(2πm/N + θ₀)] Σ_l exp[−i(l²/2 − γl − 2πl(m−n)/N)]`,
//!
//! the sum running over `l ∈ {−N′, …, N′}`. `γ ≠ 0` breaks time reversal.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::unitarity_error;
use crate::rng::{substream, Domain};
use crate::{c64, Mat};

const UNITARITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QkrSpec {
    /// Odd dimension `N`.
    pub n_dim: usize,
    /// Stochasticity parameter `α`.
    pub kick_strength: f64,
    /// Time-reversal-breaking `γ`.
    pub trs_gamma: f64,
    /// Phase `θ₀`; `None` means `π/(2N)`.
    pub theta0: Option<f64>,
    pub n_members: usize,
    /// Members draw `α` uniformly from `kick_strength ± kick_jitter`.
    pub kick_jitter: f64,
    pub seed: u64,
}

impl Default for QkrSpec {
    fn default() -> Self {
        QkrSpec {
            n_dim: 201,
            kick_strength: 20_000.0,
            trs_gamma: 0.0,
            theta0: None,
            n_members: 100,
            kick_jitter: 250.0,
            seed: 0,
        }
    }
}

impl QkrSpec {
    pub fn theta0(&self) -> f64 {
        self.theta0.unwrap_or(PI / (2.0 * self.n_dim as f64))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_dim < 3 || self.n_dim % 2 == 0 {
            return Err(Error::domain(
                "QkrSpec",
                format!("N = {} must be odd and at least 3", self.n_dim),
            ));
        }
        if self.n_members == 0 {
            return Err(Error::domain("QkrSpec", "n_members must be at least 1"));
        }
        if !(self.kick_jitter >= 0.0) || !self.kick_strength.is_finite() || !self.trs_gamma.is_finite() {
            return Err(Error::domain(
                "QkrSpec",
                "parameters must be finite with kick_jitter >= 0",
            ));
        }
        Ok(())
    }

    /// Kick strength used by member `member_index`.
    pub fn member_kick(&self, member_index: usize) -> f64 {
        let mut rng = substream(self.seed, Domain::KickedRotor, member_index as u64);
        let u: f64 = rng.random();
        self.kick_strength + self.kick_jitter * (2.0 * u - 1.0)
    }
}

/// Floquet matrix of member `member_index`, checked for unitarity.
pub fn qkr_floquet(spec: &QkrSpec, member_index: usize) -> Result<Mat<c64>> {
    spec.validate()?;
    if member_index >= spec.n_members {
        return Err(Error::domain(
            "qkr_floquet",
            format!("member {member_index} >= n_members {}", spec.n_members),
        ));
    }
    let u = floquet_matrix(
        spec.n_dim,
        spec.member_kick(member_index),
        spec.trs_gamma,
        spec.theta0(),
    );
    let deviation = unitarity_error(u.as_ref());
    if deviation > UNITARITY_TOL {
        return Err(Error::NonUnitary { deviation });
    }
    Ok(u)
}

pub(crate) fn floquet_matrix(n_dim: usize, kick: f64, gamma: f64, theta0: f64) -> Mat<c64> {
    let n = n_dim as f64;
    let half = (n_dim as i64 - 1) / 2;
    // G(d) for d = m − n ∈ [−(N−1), N−1], stored at d + N − 1
    let offset = n_dim as i64 - 1;
    let free: Vec<c64> = (-offset..=offset)
        .map(|d| {
            (-half..=half)
                .map(|l| {
                    let lf = l as f64;
                    c64::cis(-(0.5 * lf * lf - gamma * lf - 2.0 * PI * lf * d as f64 / n))
                })
                .sum()
        })
        .collect();
    let kicks: Vec<c64> = (-half..=half)
        .map(|m| c64::cis(-kick * (2.0 * PI * m as f64 / n + theta0).cos()) / n)
        .collect();
    Mat::from_fn(n_dim, n_dim, |i, j| {
        kicks[i] * free[(i as i64 - j as i64 + offset) as usize]
    })
}
