//! Maximum-likelihood estimate of `ε` from scaled intensities.
//!
//! `ln 𝒫(ε, y)` (the density of `y = ln x`) is interpolated linearly on a
//! fixed grid in `y`. Each sample contributes its two interpolation weights
//! to the neighbouring nodes, so the log-likelihood of any `ε` is a weighted
//! sum over the occupied nodes only, independent of the sample count.

use serde::{Deserialize, Serialize};

use super::state::component_weights;
use crate::c64;
use crate::crossover::{pdf_crossover_log, CrossoverParam};
use crate::error::{Error, Result};

pub const DEFAULT_BRACKET: (f64, f64) = (1e-3, 1e5);

const GRID_LO: f64 = -40.0;
const GRID_HI: f64 = 6.0;
const GRID_STEP: f64 = 0.04;
const MIN_SAMPLES: u64 = 1000;
const LN_EPS_TOL: f64 = 1e-3;
const MAX_ITER: usize = 200;

/// Result of [`fit_epsilon`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsilonFit {
    pub eps_hat: f64,
    /// `−Σ ln P(ε̂, x_i)` over the samples, with `ln P` interpolated.
    pub neg_log_likelihood: f64,
    pub n_samples: u64,
    pub converged: bool,
    /// `ε̂` is within 1% of a bracket end, which usually means the data sit
    /// at the OE or UE limit rather than in the crossover.
    pub boundary_hit: bool,
    pub bracket: (f64, f64),
    pub evaluations: usize,
}

/// Interpolation weights of samples on the `y` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FitAccumulator {
    weights: Vec<f64>,
    n_samples: u64,
    sum_y: f64,
    sum_y2: f64,
    /// Samples with `x = 0`, which carry no information about `ε` here.
    pub zeros: u64,
    /// Samples outside the grid, attached to the nearest end node.
    pub clamped: u64,
}

impl Default for FitAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl FitAccumulator {
    pub fn new() -> Self {
        let nodes = ((GRID_HI - GRID_LO) / GRID_STEP).round() as usize + 1;
        FitAccumulator {
            weights: vec![0.0; nodes],
            n_samples: 0,
            sum_y: 0.0,
            sum_y2: 0.0,
            zeros: 0,
            clamped: 0,
        }
    }

    fn node(k: usize) -> f64 {
        GRID_LO + GRID_STEP * k as f64
    }

    pub fn n_samples(&self) -> u64 {
        self.n_samples
    }

    pub fn add_x(&mut self, x: f64) -> Result<()> {
        if !(x >= 0.0) || !x.is_finite() {
            return Err(Error::domain(
                "fit_epsilon",
                format!("sample x = {x} must be finite and >= 0"),
            ));
        }
        if x == 0.0 {
            self.zeros += 1;
            return Ok(());
        }
        let y = x.ln();
        self.n_samples += 1;
        self.sum_y += y;
        self.sum_y2 += y * y;
        let last = self.weights.len() - 1;
        let t = (y - GRID_LO) / GRID_STEP;
        if t <= 0.0 || t >= last as f64 {
            self.clamped += 1;
            let k = if t <= 0.0 { 0 } else { last };
            self.weights[k] += 1.0;
            return Ok(());
        }
        let k = t.floor() as usize;
        let f = t - k as f64;
        self.weights[k] += 1.0 - f;
        self.weights[k + 1] += f;
        Ok(())
    }

    /// Add `x_i = N|c_i|²` for every component of a unit vector.
    pub fn add_vector(&mut self, v: &[c64]) -> Result<()> {
        self.add_weights(&component_weights(v)?)
    }

    /// Add every entry of a weight vector `|c_i|²` (normalisation is the
    /// caller's responsibility).
    pub fn add_weights(&mut self, weights: &[f64]) -> Result<()> {
        let n = weights.len() as f64;
        for &p in weights {
            self.add_x(n * p)?;
        }
        Ok(())
    }

    pub fn merge(&mut self, other: &FitAccumulator) {
        for (a, b) in self.weights.iter_mut().zip(&other.weights) {
            *a += b;
        }
        self.n_samples += other.n_samples;
        self.sum_y += other.sum_y;
        self.sum_y2 += other.sum_y2;
        self.zeros += other.zeros;
        self.clamped += other.clamped;
    }

    /// Negative log-likelihood of the `x` samples at `ε`.
    pub fn neg_log_likelihood(&self, eps: f64) -> Result<f64> {
        let p = CrossoverParam::new(eps)?;
        let mut acc = 0.0;
        for (k, &w) in self.weights.iter().enumerate() {
            if w > 0.0 {
                let d = pdf_crossover_log(p, Self::node(k))?;
                acc -= w * d.max(f64::MIN_POSITIVE).ln();
            }
        }
        // 𝒫(y) = x P(x), so ln P(x) = ln 𝒫(y) − y
        Ok(acc + self.sum_y)
    }

    fn check_informative(&self) -> Result<()> {
        if self.n_samples < MIN_SAMPLES {
            return Err(Error::DegenerateSamples(format!(
                "{} usable samples, need at least {MIN_SAMPLES}",
                self.n_samples
            )));
        }
        let n = self.n_samples as f64;
        let mean = self.sum_y / n;
        let var = self.sum_y2 / n - mean * mean;
        if !(var > 1e-10) {
            return Err(Error::DegenerateSamples(format!(
                "ln x has variance {var:e}; all samples are (nearly) equal"
            )));
        }
        Ok(())
    }
}

/// Minimise `f` on `[a, b]` by Brent's method (golden section with
/// parabolic steps). Returns `(x_min, f(x_min), evaluations, converged)`.
fn brent_minimise<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    a: f64,
    b: f64,
    xtol: f64,
) -> Result<(f64, f64, usize, bool)> {
    const GOLDEN: f64 = 0.381_966_011_250_105_1;
    let (mut a, mut b) = (a, b);
    let mut x = a + GOLDEN * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = f(x)?;
    let (mut fw, mut fv) = (fx, fx);
    let mut evaluations = 1;
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    for _ in 0..MAX_ITER {
        let mid = 0.5 * (a + b);
        let tol1 = 1e-10 * x.abs() + xtol / 3.0;
        let tol2 = 2.0 * tol1;
        if (x - mid).abs() <= tol2 - 0.5 * (b - a) {
            return Ok((x, fx, evaluations, true));
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            if p.abs() < (0.5 * q * e).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if mid >= x { tol1 } else { -tol1 };
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= mid { a - x } else { b - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else if d > 0.0 {
            x + tol1
        } else {
            x - tol1
        };
        let fu = f(u)?;
        evaluations += 1;
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            (v, fv) = (w, fw);
            (w, fw) = (x, fx);
            (x, fx) = (u, fu);
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                (v, fv) = (w, fw);
                (w, fw) = (u, fu);
            } else if fu <= fv || v == x || v == w {
                (v, fv) = (u, fu);
            }
        }
    }
    Ok((x, fx, evaluations, false))
}

/// Fit `ε` to pre-accumulated samples.
pub fn fit_epsilon_accumulated(acc: &FitAccumulator, bracket: (f64, f64)) -> Result<EpsilonFit> {
    let (lo, hi) = bracket;
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(Error::domain(
            "fit_epsilon",
            format!("bracket [{lo}, {hi}] must satisfy 0 < lo < hi"),
        ));
    }
    acc.check_informative()?;
    let (ln_lo, ln_hi) = (lo.ln(), hi.ln());
    let (mut best, mut best_f, mut evaluations, converged) =
        brent_minimise(|t| acc.neg_log_likelihood(t.exp()), ln_lo, ln_hi, LN_EPS_TOL)?;
    if !converged {
        return Err(Error::FitNonConvergence { iterations: MAX_ITER });
    }
    // Brent never evaluates the ends; a monotone likelihood peaks there.
    for end in [ln_lo, ln_hi] {
        let f_end = acc.neg_log_likelihood(end.exp())?;
        evaluations += 1;
        if f_end <= best_f {
            best = end;
            best_f = f_end;
        }
    }
    let eps_hat = best.exp();
    let boundary_hit = eps_hat <= lo * 1.01 || eps_hat >= hi / 1.01;
    Ok(EpsilonFit {
        eps_hat,
        neg_log_likelihood: best_f,
        n_samples: acc.n_samples(),
        converged: best_f.is_finite(),
        boundary_hit,
        bracket,
        evaluations,
    })
}

/// Maximum-likelihood `ε` for samples `x_i = N|c_i|²` of the crossover law.
pub fn fit_epsilon(x_samples: &[f64], bracket: (f64, f64)) -> Result<EpsilonFit> {
    let mut acc = FitAccumulator::new();
    for &x in x_samples {
        acc.add_x(x)?;
    }
    fit_epsilon_accumulated(&acc, bracket)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossover::{ComponentLaw, LawTable};
    use crate::rng::{substream, Domain};
    use rand::Rng;

    fn draw(law: ComponentLaw, n: usize, seed: u64) -> Vec<f64> {
        let table = LawTable::with_defaults(law).unwrap();
        let mut rng = substream(seed, Domain::Synthetic, 7);
        (0..n).map(|_| table.quantile(rng.random::<f64>()).exp()).collect()
    }

    #[test]
    fn brent_finds_parabola_minimum() {
        let (x, fx, _, ok) = brent_minimise(|t| Ok((t - 0.3).powi(2) + 1.0), -2.0, 5.0, 1e-6).unwrap();
        assert!(ok);
        assert!((x - 0.3).abs() < 1e-5);
        assert!((fx - 1.0).abs() < 1e-9);
    }

    #[test]
    fn recovers_epsilon_from_synthetic_samples() {
        let p = CrossoverParam::new(2.0).unwrap();
        let xs = draw(ComponentLaw::Crossover(p), 20_000, 1);
        let fit = fit_epsilon(&xs, DEFAULT_BRACKET).unwrap();
        assert!(fit.converged && !fit.boundary_hit);
        assert!((fit.eps_hat / 2.0 - 1.0).abs() < 0.25, "{fit:?}");
        assert_eq!(fit.n_samples, 20_000);
    }

    #[test]
    fn unitary_samples_hit_upper_boundary() {
        let xs = draw(ComponentLaw::Unitary, 20_000, 2);
        let fit = fit_epsilon(&xs, (1e-3, 1e3)).unwrap();
        assert!(fit.eps_hat > 30.0, "{fit:?}");
    }

    #[test]
    fn degenerate_and_invalid_input() {
        assert!(matches!(
            fit_epsilon(&vec![1.0; 5000], DEFAULT_BRACKET),
            Err(Error::DegenerateSamples(_))
        ));
        assert!(matches!(
            fit_epsilon(&[0.5, 2.0], DEFAULT_BRACKET),
            Err(Error::DegenerateSamples(_))
        ));
        assert!(fit_epsilon(&[-1.0], DEFAULT_BRACKET).is_err());
        assert!(fit_epsilon(&vec![1.0; 5000], (1.0, 0.5)).is_err());
    }

    #[test]
    fn accumulator_merge_matches_single_pass() {
        let xs = draw(ComponentLaw::Orthogonal, 3000, 3);
        let mut whole = FitAccumulator::new();
        let mut a = FitAccumulator::new();
        let mut b = FitAccumulator::new();
        for (i, &x) in xs.iter().enumerate() {
            whole.add_x(x).unwrap();
            if i < 1500 {
                a.add_x(x).unwrap()
            } else {
                b.add_x(x).unwrap()
            }
        }
        a.merge(&b);
        let (fa, fw) = (
            a.neg_log_likelihood(1.0).unwrap(),
            whole.neg_log_likelihood(1.0).unwrap(),
        );
        assert!((fa - fw).abs() < 1e-9 * fw.abs());
    }
}
