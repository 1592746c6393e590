use crate::error::{Error, Result};

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_43;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_780_329_736_405_617_6;

// Below this the argument is shifted up with the recurrence before the
// asymptotic series is used.
const ASYMPTOTIC_FROM: f64 = 10.0;

/// Natural log of the gamma function for `z > 0`.
///
/// Arguments below 10 are shifted with `ln Γ(z) = ln Γ(z+n) - ln(z(z+1)…(z+n-1))`
/// and the Stirling series is summed through the `B_16` term.
pub fn ln_gamma(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain(
            "ln_gamma",
            format!("z = {z} must be positive and finite"),
        ));
    }
    let mut shift = 1.0;
    let mut x = z;
    while x < ASYMPTOTIC_FROM {
        shift *= x;
        x += 1.0;
    }
    Ok(stirling(x) - shift.ln())
}

fn stirling(x: f64) -> f64 {
    // B_2k / (2k (2k-1)), k = 1..8
    const C: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = C.iter().rev().fold(0.0, |acc, &c| acc * inv2 + c) * inv;
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + series
}

/// Digamma function ψ(z) = d/dz ln Γ(z) for `z > 0`.
pub fn digamma(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain("digamma", format!("z = {z} must be positive and finite")));
    }
    let mut acc = 0.0;
    let mut x = z;
    while x < ASYMPTOTIC_FROM {
        acc -= 1.0 / x;
        x += 1.0;
    }
    // B_2k / 2k, k = 1..7
    const C: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32_760.0,
        1.0 / 12.0,
    ];
    let inv2 = 1.0 / (x * x);
    let series = C.iter().rev().fold(0.0, |s, &c| s * inv2 + c) * inv2;
    Ok(acc + x.ln() - 0.5 / x - series)
}
