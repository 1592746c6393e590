//! The crossover density `P(ε, x)` as a single integral over `φ ∈ (0, π)`.
//!
//! With `s = ε + 2x sin²(φ/2)` the integrand is
//! `ε/(2√π) · exp(−ε cot²φ − x / (2cos²(φ/2))) · [2/(sin²φ √s) + s^{-3/2}]`.
//! This is the usual `ε e^ε exp(−s csc²φ)` form with the `e^ε` absorbed into
//! the exponent, so nothing overflows for large `ε` or cancels near the ends.

use std::f64::consts::{FRAC_PI_2, PI};

use super::CrossoverParam;
use crate::error::{Error, Result};
use crate::specfun::{integrate_adaptive_with, QuadOptions};

// exp() underflows to zero below this exponent
pub(crate) const UNDERFLOW: f64 = -745.0;

/// Points where the φ-integrand changes on a short scale.
pub(crate) fn phi_breakpoints(eps: f64, x: f64) -> Vec<f64> {
    let mut pts = vec![0.0, FRAC_PI_2, PI];
    let root = eps.sqrt();
    pts.extend([root, PI - root]);
    for k in [1.0, 3.0, 10.0] {
        pts.extend([FRAC_PI_2 - k / root, FRAC_PI_2 + k / root]);
    }
    if x > 0.0 {
        // near φ = 0 the exponent is ≈ −ε/φ² − xφ²/8, peaking at (8ε/x)^{1/4}
        let peak = (8.0 * eps / x).powf(0.25);
        pts.extend([0.5 * peak, peak, 2.0 * peak]);
        let width = 2.0 / x.sqrt();
        pts.extend([width, 3.0 * width]);
    }
    pts.retain(|p| p.is_finite() && *p >= 0.0 && *p <= PI);
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    pts
}

fn integrand(eps: f64, x: f64, phi: f64) -> f64 {
    if phi <= 0.0 || phi >= PI {
        return 0.0;
    }
    let sin_phi = phi.sin();
    let cot = phi.cos() / sin_phi;
    let half = 0.5 * phi;
    let cos_half = half.cos();
    let sin_half = half.sin();
    let exponent = -eps * cot * cot - x / (2.0 * cos_half * cos_half);
    if exponent < UNDERFLOW {
        return 0.0;
    }
    let s = eps + 2.0 * x * sin_half * sin_half;
    let bracket = 2.0 / (sin_phi * sin_phi * s.sqrt()) + s.powf(-1.5);
    let v = exponent.exp() * bracket;
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

/// `P(ε, x)` with explicit quadrature options.
pub fn pdf_crossover_with(eps: CrossoverParam, x: f64, opts: &QuadOptions) -> Result<f64> {
    let e = eps.positive("pdf_crossover")?;
    if !(x >= 0.0) {
        return Err(Error::domain("pdf_crossover", format!("x = {x} must be non-negative")));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let pts = phi_breakpoints(e, x);
    let r = integrate_adaptive_with(|phi| integrand(e, x, phi), &pts, opts)?;
    Ok(e / (2.0 * PI.sqrt()) * r.value)
}

/// Density of the scaled intensity `x = N|c|²` in the crossover ensemble.
pub fn pdf_crossover(eps: CrossoverParam, x: f64) -> Result<f64> {
    pdf_crossover_with(eps, x, &QuadOptions::default())
}

/// Density of `y = ln x`: `e^y P(ε, e^y)`.
pub fn pdf_crossover_log(eps: CrossoverParam, y: f64) -> Result<f64> {
    if y.is_nan() {
        return Err(Error::domain("pdf_crossover_log", "y is NaN"));
    }
    let x = y.exp();
    if x == 0.0 {
        eps.positive("pdf_crossover_log")?;
        return Ok(0.0);
    }
    Ok(x * pdf_crossover(eps, x)?)
}
