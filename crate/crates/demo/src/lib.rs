//! Browser bindings for `www/index.html`.
//!
//! Every export is a thin wrapper over a plain function so the numerics can
//! be tested natively.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use mfcross::crossover::{d_q_crossover, d_q_oe, d_q_ue, ComponentLaw, CrossoverParam};
use mfcross::ensembles::{ensemble_member, EnsembleSpec};
use mfcross::estimators::{fit_epsilon_accumulated, FitAccumulator, HistogramAccumulator, DEFAULT_BRACKET};
use mfcross::{Error, Result};
use wasm_bindgen::prelude::*;

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

fn grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 || !(lo < hi) {
        return Err(Error::Domain {
            op: "grid",
            detail: "need lo < hi and at least 2 points".into(),
        });
    }
    Ok((0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect())
}

/// Densities of `y = ln x` as `[crossover.., OE.., UE..]`, each of length `points`.
pub fn log_pdf_curves(epsilon: f64, y_min: f64, y_max: f64, points: usize) -> Result<Vec<f64>> {
    let ys = grid(y_min, y_max, points)?;
    let laws = [
        ComponentLaw::for_epsilon(epsilon)?,
        ComponentLaw::Orthogonal,
        ComponentLaw::Unitary,
    ];
    let mut out = Vec::with_capacity(3 * points);
    for law in laws {
        for &y in &ys {
            out.push(law.log_density(y)?);
        }
    }
    Ok(out)
}

/// `D̃_q` at size `n_dim` as `[OE.., crossover.., UE..]` on `points` values of `q`.
pub fn dimension_curves(epsilon: f64, n_dim: usize, q_max: f64, points: usize) -> Result<Vec<f64>> {
    let qs = grid(1.0, q_max, points)?;
    let p = CrossoverParam::new(epsilon)?;
    let mut out = Vec::with_capacity(3 * points);
    for &q in &qs {
        out.push(d_q_oe(q, n_dim)?.value);
    }
    for &q in &qs {
        out.push(
            if epsilon == 0.0 {
                d_q_oe(q, n_dim)?
            } else {
                d_q_crossover(p, q, n_dim)?
            }
            .value,
        );
    }
    for &q in &qs {
        out.push(d_q_ue(q, n_dim)?.value);
    }
    Ok(out)
}

/// Pooled component histogram of a small Pandey–Mehta ensemble with the
/// fitted `ε`.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct EnsembleSample {
    centres: Vec<f64>,
    density: Vec<f64>,
    epsilon: f64,
    eps_hat: f64,
}

#[wasm_bindgen]
impl EnsembleSample {
    #[wasm_bindgen(getter)]
    pub fn centres(&self) -> Vec<f64> {
        self.centres.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn density(&self) -> Vec<f64> {
        self.density.clone()
    }

    /// `α²N` of the sampled ensemble.
    #[wasm_bindgen(getter)]
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    #[wasm_bindgen(getter, js_name = epsHat)]
    pub fn eps_hat(&self) -> f64 {
        self.eps_hat
    }
}

pub fn sample_ensemble(n_dim: usize, alpha: f64, members: usize, seed: u64, bins: usize) -> Result<EnsembleSample> {
    let spec = EnsembleSpec::new(n_dim, alpha, members, seed)?;
    let mut hist = HistogramAccumulator::new(bins, (-12.0, 3.0))?;
    let mut fit = FitAccumulator::new();
    for m in 0..members {
        let sys = ensemble_member(&spec, m)?;
        hist.add_system(&sys)?;
        for j in 0..sys.dim() {
            fit.add_vector(sys.eigenvector(j))?;
        }
    }
    let h = hist.finish()?;
    Ok(EnsembleSample {
        centres: h.centres(),
        density: h.density,
        epsilon: spec.epsilon().epsilon,
        eps_hat: fit_epsilon_accumulated(&fit, DEFAULT_BRACKET)?.eps_hat,
    })
}

#[wasm_bindgen(js_name = logPdfCurves)]
pub fn log_pdf_curves_js(
    epsilon: f64,
    y_min: f64,
    y_max: f64,
    points: usize,
) -> std::result::Result<Vec<f64>, JsError> {
    log_pdf_curves(epsilon, y_min, y_max, points).map_err(js)
}

#[wasm_bindgen(js_name = dimensionCurves)]
pub fn dimension_curves_js(
    epsilon: f64,
    n_dim: usize,
    q_max: f64,
    points: usize,
) -> std::result::Result<Vec<f64>, JsError> {
    dimension_curves(epsilon, n_dim, q_max, points).map_err(js)
}

#[wasm_bindgen(js_name = sampleEnsemble)]
pub fn sample_ensemble_js(
    n_dim: usize,
    alpha: f64,
    members: usize,
    seed: u32,
    bins: usize,
) -> std::result::Result<EnsembleSample, JsError> {
    sample_ensemble(n_dim, alpha, members, u64::from(seed), bins).map_err(js)
}
