//! Moments `⟨x^q⟩`, `⟨x ln x⟩` and the derived dimensions of the crossover law.

use std::f64::consts::PI;

use super::pdf::{pdf_crossover_with, phi_breakpoints};
use super::{check_q, CrossoverParam, FractalDimensionPoint, Q_ONE_TOL};
use crate::error::{Error, Result};
use crate::specfun::{integrate_adaptive_with, integrate_semi_infinite, ln_gamma, ln_tricomi_u, QuadOptions};

fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `⟨x^q⟩` without the `q ≥ 1` guard; the representation holds for `q > −½`.
pub(crate) fn moment_unchecked(eps: f64, q: f64, opts: &QuadOptions) -> Result<f64> {
    let ln_prefactor = ln_gamma(q + 1.0)? + (q + 0.5) * eps.ln() - (q + 2.0) * std::f64::consts::LN_2 - 0.5 * PI.ln();
    let mut failure: Option<Error> = None;
    let integrand = |phi: f64| -> f64 {
        if phi <= 0.0 || phi >= PI || failure.is_some() {
            return 0.0;
        }
        let sin_phi = phi.sin();
        let cot = phi.cos() / sin_phi;
        let z = eps / (sin_phi * sin_phi);
        let gauss = -eps * cot * cot;
        let csc_half = 1.0 / (0.5 * phi).sin();
        let u_lo = ln_tricomi_u(q + 1.0, q + 0.5, z);
        let u_hi = ln_tricomi_u(q + 1.0, q + 1.5, z);
        let (u_lo, u_hi) = match (u_lo, u_hi) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                failure = Some(e);
                return 0.0;
            }
        };
        let exponent = ln_prefactor + gauss + (2.0 * q + 2.0) * csc_half.ln() + log_add(u_lo, (2.0 * z).ln() + u_hi);
        if exponent < super::pdf::UNDERFLOW {
            0.0
        } else {
            exponent.exp()
        }
    };
    let pts = phi_breakpoints(eps, 0.0);
    let r = integrate_adaptive_with(integrand, &pts, opts);
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(r?.value)
}

/// `⟨x^q⟩` of the crossover law with explicit quadrature options.
pub fn moment_crossover_with(eps: CrossoverParam, q: f64, opts: &QuadOptions) -> Result<f64> {
    let e = eps.positive("moment_crossover")?;
    check_q("moment_crossover", q)?;
    moment_unchecked(e, q, opts)
}

/// `⟨x^q⟩` of the crossover law for `q ≥ 1`, through the Tricomi-function
/// representation of the moments (one quadrature over φ).
pub fn moment_crossover(eps: CrossoverParam, q: f64) -> Result<f64> {
    moment_crossover_with(eps, q, &QuadOptions::default())
}

/// `⟨x ln x⟩` with explicit options for the outer integral over `x`; the
/// inner density evaluations use tolerances ten times tighter.
pub fn xlogx_crossover_with(eps: CrossoverParam, opts: &QuadOptions) -> Result<f64> {
    let e = eps.positive("xlogx_crossover")?;
    let inner = opts.scaled(0.1);
    let mut failure: Option<Error> = None;
    let f = |x: f64| -> f64 {
        if x <= 0.0 || failure.is_some() {
            return 0.0;
        }
        match pdf_crossover_with(CrossoverParam { epsilon: e }, x, &inner) {
            Ok(p) => x * x.ln() * p,
            Err(err) => {
                failure = Some(err);
                0.0
            }
        }
    };
    let breaks = [0.1 * e.min(1.0), 0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 40.0];
    let r = integrate_semi_infinite(f, 0.0, &breaks, opts);
    if let Some(err) = failure {
        return Err(err);
    }
    Ok(r?.value)
}

/// `⟨x ln x⟩ = ∫₀^∞ x ln x P(ε, x) dx` by nested quadrature.
pub fn xlogx_crossover(eps: CrossoverParam) -> Result<f64> {
    xlogx_crossover_with(eps, &QuadOptions::default())
}

/// `D̃_q` of the crossover law at size `N`: `1 − ln⟨x^q⟩ / ((q−1) ln N)`,
/// and `1 − ⟨x ln x⟩ / ln N` at `q = 1`.
pub fn d_q_crossover(eps: CrossoverParam, q: f64, n_dim: usize) -> Result<FractalDimensionPoint> {
    check_q("d_q_crossover", q)?;
    if n_dim < 3 {
        return Err(Error::domain(
            "d_q_crossover",
            format!("N = {n_dim} must be at least 3"),
        ));
    }
    let ln_n = (n_dim as f64).ln();
    let value = 1.0 - s_q_inf_crossover(eps, q)? / ln_n;
    Ok(FractalDimensionPoint { q, n_dim, value })
}

/// `S̃_q^∞` of the crossover law: `ln⟨x^q⟩/(q−1)`, and `⟨x ln x⟩` at `q = 1`.
pub fn s_q_inf_crossover(eps: CrossoverParam, q: f64) -> Result<f64> {
    check_q("s_q_inf_crossover", q)?;
    if (q - 1.0).abs() < Q_ONE_TOL {
        xlogx_crossover(eps)
    } else {
        Ok(moment_crossover(eps, q)?.ln() / (q - 1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossover::{d_q_oe, d_q_ue, pdf_crossover, s_q_inf_oe, s_q_inf_ue};
    use crate::specfun::{digamma, EULER_GAMMA};

    fn p(eps: f64) -> CrossoverParam {
        CrossoverParam::new(eps).unwrap()
    }

    #[test]
    fn first_moment_is_one() {
        for eps in [0.1, 0.5, 1.0, 4.0, 10.0, 100.0] {
            let m = moment_crossover(p(eps), 1.0).unwrap();
            assert!((m - 1.0).abs() < 1e-6, "eps={eps}: {m}");
        }
    }

    #[test]
    fn second_moment_limits() {
        assert!((moment_crossover(p(1e-4), 2.0).unwrap() - 3.0).abs() < 0.05);
        assert!((moment_crossover(p(1e4), 2.0).unwrap() - 2.0).abs() < 1e-3);
        // between the limits, decreasing in ε
        let ms: Vec<f64> = [0.5, 1.0, 4.0]
            .iter()
            .map(|&e| moment_crossover(p(e), 2.0).unwrap())
            .collect();
        assert!(ms.windows(2).all(|w| w[0] > w[1]));
        assert!(ms.iter().all(|&m| m > 2.0 && m < 3.0));
    }

    #[test]
    fn moment_agrees_with_direct_integration_of_density() {
        // independent route: ∫ x^q P(ε, x) dx using the φ-representation of P
        for (eps, q) in [(1.0, 2.0), (4.0, 3.0), (0.5, 1.5)] {
            let direct = integrate_semi_infinite(
                |x| x.powf(q) * pdf_crossover(p(eps), x).unwrap(),
                0.0,
                &[0.1, 1.0, 3.0, 10.0, 30.0],
                &QuadOptions::new(1e-10, 1e-9),
            )
            .unwrap()
            .value;
            let tricomi = moment_crossover(p(eps), q).unwrap();
            assert!(
                (direct / tricomi - 1.0).abs() < 1e-6,
                "eps={eps} q={q}: {direct} vs {tricomi}"
            );
        }
    }

    #[test]
    fn xlogx_limits_and_monotonicity() {
        let ue = xlogx_crossover(p(1e4)).unwrap();
        assert!((ue - (1.0 - EULER_GAMMA)).abs() < 1e-3, "{ue}");
        let oe = xlogx_crossover(p(1e-4)).unwrap();
        let oe_limit = std::f64::consts::LN_2 + digamma(1.5).unwrap();
        assert!((oe - oe_limit).abs() < 2e-3, "{oe}");
        let vals: Vec<f64> = [0.1, 1.0, 10.0]
            .iter()
            .map(|&e| xlogx_crossover(p(e)).unwrap())
            .collect();
        assert!(vals[0] > vals[1] && vals[1] > vals[2], "{vals:?}");
    }

    #[test]
    fn xlogx_is_moment_derivative_at_one() {
        let h = 1e-3;
        let opts = QuadOptions::new(1e-12, 1e-11);
        for eps in [0.5, 1.0, 4.0] {
            let up = moment_unchecked(eps, 1.0 + h, &opts).unwrap();
            let down = moment_unchecked(eps, 1.0 - h, &opts).unwrap();
            let fd = (up - down) / (2.0 * h);
            let xlx = xlogx_crossover(p(eps)).unwrap();
            assert!((fd - xlx).abs() < 1e-4, "eps={eps}: {fd} vs {xlx}");
        }
    }

    #[test]
    fn dimension_examples() {
        let ln1000 = 1000f64.ln();
        let ue2 = d_q_crossover(p(1e4), 2.0, 1000).unwrap().value;
        assert!((ue2 - (1.0 - 2f64.ln() / ln1000)).abs() < 1e-3);
        let oe1 = d_q_crossover(p(1e-4), 1.0, 1000).unwrap().value;
        assert!((oe1 - 0.8944).abs() < 1e-3);
        assert!((s_q_inf_crossover(p(1e4), 1.0).unwrap() - 0.42278).abs() < 1e-3);
        assert!((s_q_inf_crossover(p(1e-4), 2.0).unwrap() - 3f64.ln()).abs() < 0.02);
        assert!((s_q_inf_crossover(p(1e4), 2.0).unwrap() - 2f64.ln()).abs() < 1e-3);
    }

    #[test]
    fn increasing_in_epsilon_and_squeezed() {
        let n = 1000;
        for q in [1.0, 2.0, 3.0] {
            let vals: Vec<f64> = [0.1, 1.0, 10.0, 100.0]
                .iter()
                .map(|&e| d_q_crossover(p(e), q, n).unwrap().value)
                .collect();
            assert!(vals.windows(2).all(|w| w[0] < w[1]), "q={q}: {vals:?}");
            let lo = d_q_oe(q, n).unwrap().value;
            let hi = d_q_ue(q, n).unwrap().value;
            assert!(vals.iter().all(|&v| v >= lo && v <= hi), "q={q}: {lo} {vals:?} {hi}");
        }
    }

    #[test]
    fn shifted_scaled_between_limits() {
        for q in [1.0, 2.0, 4.0] {
            let s = s_q_inf_crossover(p(2.0), q).unwrap();
            assert!(s < s_q_inf_oe(q).unwrap() && s > s_q_inf_ue(q).unwrap());
        }
    }

    #[test]
    fn domain_errors() {
        assert!(moment_crossover(p(1.0), 0.5).is_err());
        assert!(moment_crossover(CrossoverParam { epsilon: 0.0 }, 2.0).is_err());
        assert!(d_q_crossover(p(1.0), 2.0, 2).is_err());
    }
}
