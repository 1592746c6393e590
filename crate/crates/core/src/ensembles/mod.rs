//! The Pandey–Mehta GOE → GUE crossover ensemble.
//!
//! `H = √(1−α²) H₁ + α H₂` with `H₁` real symmetric and `H₂` complex
//! Hermitian. Diagonal entries of both have variance `2v²`; off-diagonal
//! entries have variance `v²` (each of the real and imaginary parts for `H₂`).

mod cache;

pub use cache::{read_cache, write_cache, CacheHeader, CacheReader, CacheWriter};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::crossover::CrossoverParam;
use crate::error::{Error, Result};
use crate::linalg::{eigh, EigenSystem};
use crate::rng::{substream, Domain, Gaussian};
use crate::{c64, Mat};

/// Parameters of a Pandey–Mehta ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub n_dim: usize,
    pub alpha: f64,
    /// Element variance; eigenvector statistics do not depend on it.
    pub v2: f64,
    pub n_members: usize,
    pub seed: u64,
}

impl EnsembleSpec {
    /// Spec with the default variance `v² = 1/(4N(1+α²))`, which puts the
    /// spectrum in `[−1, 1]`.
    pub fn new(n_dim: usize, alpha: f64, n_members: usize, seed: u64) -> Result<Self> {
        let spec = EnsembleSpec {
            n_dim,
            alpha,
            v2: Self::default_v2(n_dim, alpha),
            n_members,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn default_v2(n_dim: usize, alpha: f64) -> f64 {
        1.0 / (4.0 * n_dim as f64 * (1.0 + alpha * alpha))
    }

    pub fn with_v2(self, v2: f64) -> Result<Self> {
        let spec = EnsembleSpec { v2, ..self };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_dim < 2 {
            return Err(Error::domain(
                "EnsembleSpec",
                format!("n_dim = {} must be at least 2", self.n_dim),
            ));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::domain(
                "EnsembleSpec",
                format!("alpha = {} outside [0, 1]", self.alpha),
            ));
        }
        if !(self.v2 > 0.0) || !self.v2.is_finite() {
            return Err(Error::domain(
                "EnsembleSpec",
                format!("v2 = {} must be positive", self.v2),
            ));
        }
        if self.n_members == 0 {
            return Err(Error::domain("EnsembleSpec", "n_members must be at least 1"));
        }
        Ok(())
    }

    /// `ε = α²N`.
    pub fn epsilon(&self) -> CrossoverParam {
        CrossoverParam {
            epsilon: self.alpha * self.alpha * self.n_dim as f64,
        }
    }

    /// Semicircle radius `R = √(4Nv²(1+α²))`.
    pub fn radius(&self) -> f64 {
        (4.0 * self.n_dim as f64 * self.v2 * (1.0 + self.alpha * self.alpha)).sqrt()
    }
}

/// Member `member_index` of the ensemble.
///
/// Draw order from the member's substream: all of `H₁` then all of `H₂`,
/// each over the lower triangle column by column (diagonal first). `H₁` is
/// therefore shared by every `α` at the same seed.
pub fn sample_pandey_mehta(spec: &EnsembleSpec, member_index: usize) -> Result<Mat<c64>> {
    spec.validate()?;
    if member_index >= spec.n_members {
        return Err(Error::domain(
            "sample_pandey_mehta",
            format!("member {member_index} >= n_members {}", spec.n_members),
        ));
    }
    let n = spec.n_dim;
    let v = spec.v2.sqrt();
    let diag_sd = v * std::f64::consts::SQRT_2;
    let mut g = Gaussian::new(substream(spec.seed, Domain::PandeyMehta, member_index as u64));
    let c1 = (1.0 - spec.alpha * spec.alpha).sqrt();
    let c2 = spec.alpha;

    let mut h = Mat::<c64>::zeros(n, n);
    for j in 0..n {
        h[(j, j)] = c64::new(c1 * diag_sd * g.sample(), 0.0);
        for i in j + 1..n {
            h[(i, j)] = c64::new(c1 * v * g.sample(), 0.0);
        }
    }
    for j in 0..n {
        h[(j, j)].re += c2 * diag_sd * g.sample();
        for i in j + 1..n {
            let re = v * g.sample();
            let im = v * g.sample();
            h[(i, j)] += c64::new(c2 * re, c2 * im);
        }
    }
    for j in 0..n {
        for i in j + 1..n {
            h[(j, i)] = h[(i, j)].conj();
        }
    }
    Ok(h)
}

/// Wigner semicircle `2/(πR²) √(R²−E²)` for the ensemble's radius.
pub fn semicircle_density(energy: f64, spec: &EnsembleSpec) -> f64 {
    let r = spec.radius();
    if energy.abs() >= r {
        return 0.0;
    }
    2.0 / (PI * r * r) * (r * r - energy * energy).sqrt()
}

/// Sample and diagonalise one member.
pub fn ensemble_member(spec: &EnsembleSpec, member_index: usize) -> Result<EigenSystem> {
    let h = sample_pandey_mehta(spec, member_index)?;
    eigh(h.as_ref()).map_err(|e| e.for_member(member_index))
}

/// Lazily yields the members in order.
pub fn generate_ensemble(spec: EnsembleSpec) -> impl Iterator<Item = Result<EigenSystem>> {
    (0..spec.n_members).map(move |m| ensemble_member(&spec, m))
}

/// Apply `f` to every member index and collect results in index order.
///
/// With the `parallel` feature the calls run on the current rayon pool;
/// since each member has its own random substream the output does not
/// depend on the number of threads. Errors are reported for the lowest failing index.
pub fn map_members<T, F>(n_members: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let results: Vec<Result<T>> = (0..n_members).into_par_iter().map(&f).collect();
        results.into_iter().collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n_members).map(f).collect()
    }
}
