//! Exact finite-N and N → ∞ results for the invariant ensembles.

use std::f64::consts::PI;

use super::{check_q, FractalDimensionPoint, Q_ONE_TOL};
use crate::error::{Error, Result};
use crate::specfun::{digamma, ln_gamma, EULER_GAMMA};

fn check_x(op: &'static str, x: f64, n: f64) -> Result<()> {
    if x >= 0.0 && x <= n {
        Ok(())
    } else {
        Err(Error::domain(op, format!("x = {x} outside [0, {n}]")))
    }
}

fn check_n(op: &'static str, n_dim: usize, min: usize) -> Result<()> {
    if n_dim >= min {
        Ok(())
    } else {
        Err(Error::domain(op, format!("N = {n_dim} must be at least {min}")))
    }
}

/// Density of `x = N|c|²` for one component of an OE eigenvector:
/// `Γ(N/2) / (Γ((N−1)/2) √(πNx)) · (1 − x/N)^{(N−3)/2}`.
///
/// Diverges (returns `+∞`) at `x = 0`.
pub fn pdf_oe_finite(x: f64, n_dim: usize) -> Result<f64> {
    check_n("pdf_oe_finite", n_dim, 3)?;
    let n = n_dim as f64;
    check_x("pdf_oe_finite", x, n)?;
    if x == 0.0 {
        return Ok(f64::INFINITY);
    }
    let exponent = 0.5 * (n - 3.0);
    if x == n {
        return Ok(if exponent == 0.0 {
            (ln_gamma(0.5 * n)? - ln_gamma(0.5 * (n - 1.0))?).exp() / (PI * n * x).sqrt()
        } else {
            0.0
        });
    }
    let ln = ln_gamma(0.5 * n)? - ln_gamma(0.5 * (n - 1.0))? - 0.5 * (PI * n * x).ln() + exponent * (-x / n).ln_1p();
    Ok(ln.exp())
}

/// Density of `x = N|c|²` for one component of a UE eigenvector:
/// `(N−1)/N · (1 − x/N)^{N−2}`.
pub fn pdf_ue_finite(x: f64, n_dim: usize) -> Result<f64> {
    check_n("pdf_ue_finite", n_dim, 2)?;
    let n = n_dim as f64;
    check_x("pdf_ue_finite", x, n)?;
    if n_dim == 2 {
        return Ok(0.5);
    }
    if x == n {
        return Ok(0.0);
    }
    Ok((n - 1.0) / n * ((n - 2.0) * (-x / n).ln_1p()).exp())
}

/// Porter–Thomas density `e^{-x/2}/√(2πx)`.
pub fn pdf_oe_asymptotic(x: f64) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    (-0.5 * x).exp() / (2.0 * PI * x).sqrt()
}

/// Porter–Thomas density `e^{-x}`.
pub fn pdf_ue_asymptotic(x: f64) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    (-x).exp()
}

/// Exact `D̃_q` for the orthogonal ensemble at size `N`.
pub fn d_q_oe(q: f64, n_dim: usize) -> Result<FractalDimensionPoint> {
    check_q("d_q_oe", q)?;
    check_n("d_q_oe", n_dim, 3)?;
    let n = n_dim as f64;
    let ln_n = n.ln();
    let value = if (q - 1.0).abs() < Q_ONE_TOL {
        (digamma(0.5 * (n + 2.0))? - digamma(1.5)?) / ln_n
    } else {
        // ln of N·Ĩ_q·N^{q-1} = N Γ(N/2) Γ(q+½) / (√π Γ(q+N/2))
        let ln_arg = n.ln() + ln_gamma(0.5 * n)? + ln_gamma(q + 0.5)? - 0.5 * PI.ln() - ln_gamma(q + 0.5 * n)?;
        -ln_arg / ((q - 1.0) * ln_n)
    };
    Ok(FractalDimensionPoint { q, n_dim, value })
}

/// Exact `D̃_q` for the unitary ensemble at size `N`.
pub fn d_q_ue(q: f64, n_dim: usize) -> Result<FractalDimensionPoint> {
    check_q("d_q_ue", q)?;
    check_n("d_q_ue", n_dim, 2)?;
    let n = n_dim as f64;
    let ln_n = n.ln();
    let value = if (q - 1.0).abs() < Q_ONE_TOL {
        (-1.0 + EULER_GAMMA + digamma(n + 1.0)?) / ln_n
    } else {
        let ln_arg = ln_gamma(q + 1.0)? + ln_gamma(n + 1.0)? - ln_gamma(n + q)?;
        -ln_arg / ((q - 1.0) * ln_n)
    };
    Ok(FractalDimensionPoint { q, n_dim, value })
}

/// `S̃_q^∞` for the orthogonal ensemble.
pub fn s_q_inf_oe(q: f64) -> Result<f64> {
    check_q("s_q_inf_oe", q)?;
    if (q - 1.0).abs() < Q_ONE_TOL {
        return Ok(std::f64::consts::LN_2 + digamma(1.5)?);
    }
    Ok((ln_gamma(q + 0.5)? + q * std::f64::consts::LN_2 - 0.5 * PI.ln()) / (q - 1.0))
}

/// `S̃_q^∞` for the unitary ensemble.
pub fn s_q_inf_ue(q: f64) -> Result<f64> {
    check_q("s_q_inf_ue", q)?;
    if (q - 1.0).abs() < Q_ONE_TOL {
        return Ok(1.0 - EULER_GAMMA);
    }
    Ok(ln_gamma(q + 1.0)? / (q - 1.0))
}
