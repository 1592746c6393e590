use super::gamma::ln_gamma;
use super::quad::{integrate_semi_infinite, QuadOptions};
use crate::error::{Error, Result};

const TRICOMI_OPTS: QuadOptions = QuadOptions {
    abs_tol: 1e-300,
    rel_tol: 1e-12,
    max_intervals: 2000,
};

/// Tricomi's confluent hypergeometric function `U(a, b, z)` for `a > 0`, `z > 0`.
///
/// Evaluated from `U = Γ(a)⁻¹ ∫₀^∞ e^{-zt} t^{a-1} (1+t)^{b-a-1} dt`. Returns
/// `0.0` when the result underflows; use [`ln_tricomi_u`] in that regime.
pub fn tricomi_u(a: f64, b: f64, z: f64) -> Result<f64> {
    Ok(ln_tricomi_u(a, b, z)?.exp())
}

/// `ln U(a, b, z)` for `a > 0`, `z > 0`, finite for arbitrarily large `z`.
pub fn ln_tricomi_u(a: f64, b: f64, z: f64) -> Result<f64> {
    ln_tricomi_u_with(a, b, z, &TRICOMI_OPTS)
}

/// [`ln_tricomi_u`] with explicit quadrature options.
///
/// With `t = s/z` the integral becomes
/// `U = z^{-a} Γ(a)⁻¹ ∫₀^∞ e^{-s} s^{a-1} (1 + s/z)^{b-a-1} ds`,
/// whose integral is O(1) for large `z`, so the `z^{-a}` factor is kept in log form.
pub fn ln_tricomi_u_with(a: f64, b: f64, z: f64, opts: &QuadOptions) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain("tricomi_u", format!("a = {a} must be positive")));
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain("tricomi_u", format!("z = {z} must be positive")));
    }
    if !b.is_finite() {
        return Err(Error::domain("tricomi_u", "b must be finite"));
    }
    let c = b - a - 1.0;
    let inv_z = 1.0 / z;
    let integral = if a >= 1.0 {
        let mut breaks = vec![z, a - 1.0, (b - 2.0).max(0.0)];
        let width = a.sqrt().max(1.0);
        breaks.extend([a - 1.0 + 3.0 * width, a - 1.0 + 10.0 * width]);
        let am1 = a - 1.0;
        integrate_semi_infinite(
            |s| {
                if s <= 0.0 {
                    return if am1 == 0.0 { 1.0 } else { 0.0 };
                }
                let ln = -s + am1 * s.ln() + c * (s * inv_z).ln_1p();
                ln.exp()
            },
            0.0,
            &breaks,
            opts,
        )?
    } else {
        // s = r^{1/a} removes the s^{a-1} endpoint singularity
        let inv_a = 1.0 / a;
        let breaks = [z.powf(a), 1.0, 10f64.powf(a)];
        let r = integrate_semi_infinite(
            |r| {
                let s = r.powf(inv_a);
                (-s + c * (s * inv_z).ln_1p()).exp()
            },
            0.0,
            &breaks,
            opts,
        )?;
        super::QuadratureResult {
            value: r.value * inv_a,
            ..r
        }
    };
    if !(integral.value > 0.0) {
        return Err(Error::NonConvergence {
            value: integral.value,
            abs_error: integral.abs_error_estimate,
            evaluations: integral.evaluations,
        });
    }
    Ok(-a * z.ln() + integral.value.ln() - ln_gamma(a)?)
}
