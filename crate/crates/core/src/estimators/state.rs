use serde::{Deserialize, Serialize};

use crate::c64;
use crate::crossover::Q_ONE_TOL;
use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-10;

/// Moments and dimensions of one eigenvector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateStatistics {
    pub q_grid: Vec<f64>,
    /// `I_q = Σ|c_i|^{2q}`; `I_1 = 1`.
    pub i_q: Vec<f64>,
    pub d_q: Vec<f64>,
    /// `S_q = ln N (1 − D_q)`.
    pub s_q: Vec<f64>,
    pub n_dim: usize,
}

/// `|c_i|²` after checking the vector is normalised.
pub fn component_weights(v: &[c64]) -> Result<Vec<f64>> {
    let p: Vec<f64> = v.iter().map(|z| z.norm_sqr()).collect();
    let norm_sq: f64 = p.iter().sum();
    if !((norm_sq - 1.0).abs() <= NORM_TOL) {
        return Err(Error::NormViolation { norm_sq });
    }
    Ok(p)
}

/// `x_i = N|c_i|²` for a unit vector of length `n_dim`.
pub fn scaled_components(v: &[c64], n_dim: usize) -> Result<Vec<f64>> {
    if v.len() != n_dim {
        return Err(Error::DimensionMismatch {
            expected: n_dim,
            found: v.len(),
        });
    }
    let n = n_dim as f64;
    Ok(component_weights(v)?.into_iter().map(|p| n * p).collect())
}

pub(crate) fn is_q_one(q: f64) -> bool {
    (q - 1.0).abs() < Q_ONE_TOL
}

pub(crate) fn check_grid(q_grid: &[f64]) -> Result<()> {
    if q_grid.is_empty() {
        return Err(Error::domain("q_grid", "empty"));
    }
    if let Some(q) = q_grid.iter().find(|q| !(**q >= 1.0) || !q.is_finite()) {
        return Err(Error::domain("q_grid", format!("q = {q} must be finite and >= 1")));
    }
    Ok(())
}

/// `−Σ p ln p`, skipping zero weights.
pub(crate) fn entropy(p: &[f64]) -> f64 {
    -p.iter().filter(|&&w| w > 0.0).map(|&w| w * w.ln()).sum::<f64>()
}

/// `Σ p^q`; integer `q` uses repeated multiplication.
pub(crate) fn moment(p: &[f64], q: f64) -> f64 {
    if q == q.trunc() && q <= 16.0 {
        let k = q as i32;
        p.iter().map(|&w| w.powi(k)).sum()
    } else {
        p.iter().map(|&w| if w > 0.0 { w.powf(q) } else { 0.0 }).sum()
    }
}

/// `I_q` for a weight vector, with `q = 1` reported as the exact sum.
pub(crate) fn moments_for(p: &[f64], q_grid: &[f64]) -> Vec<f64> {
    q_grid.iter().map(|&q| moment(p, q)).collect()
}

/// `D_q` from `I_q` (q > 1) or from the entropy (q = 1).
pub(crate) fn dimension(q: f64, i_q: f64, entropy: f64, ln_n: f64) -> f64 {
    if is_q_one(q) {
        entropy / ln_n
    } else {
        -i_q.ln() / ((q - 1.0) * ln_n)
    }
}

/// Moments and dimensions of one unit vector.
pub fn state_statistics(v: &[c64], q_grid: &[f64]) -> Result<StateStatistics> {
    check_grid(q_grid)?;
    let n_dim = v.len();
    if n_dim < 2 {
        return Err(Error::domain("state_statistics", "vector length must be at least 2"));
    }
    let p = component_weights(v)?;
    let ln_n = (n_dim as f64).ln();
    let h = entropy(&p);
    let i_q = moments_for(&p, q_grid);
    let d_q: Vec<f64> = q_grid
        .iter()
        .zip(&i_q)
        .map(|(&q, &i)| dimension(q, i, h, ln_n))
        .collect();
    let s_q = d_q.iter().map(|d| ln_n * (1.0 - d)).collect();
    Ok(StateStatistics {
        q_grid: q_grid.to_vec(),
        i_q,
        d_q,
        s_q,
        n_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn uniform(n: usize) -> Vec<c64> {
        vec![c64::new(1.0 / (n as f64).sqrt(), 0.0); n]
    }

    #[test]
    fn scaled_component_examples() {
        let mut e = vec![c64::new(0.0, 0.0); 10];
        e[0] = c64::new(1.0, 0.0);
        let x = scaled_components(&e, 10).unwrap();
        assert_eq!(x[0], 10.0);
        assert!(x[1..].iter().all(|&v| v == 0.0));
        let x = scaled_components(&uniform(7), 7).unwrap();
        assert!(x.iter().all(|&v| (v - 1.0).abs() < 1e-14));
        assert!(matches!(
            scaled_components(&[c64::new(0.5, 0.0); 2], 2),
            Err(Error::NormViolation { .. })
        ));
        assert!(scaled_components(&uniform(7), 8).is_err());
    }

    #[test]
    fn uniform_and_localised_limits() {
        let grid = [1.0, 2.0, 3.5];
        let st = state_statistics(&uniform(64), &grid).unwrap();
        for k in 0..3 {
            assert!((st.d_q[k] - 1.0).abs() < 1e-12);
            assert!(st.s_q[k].abs() < 1e-11);
        }
        let mut e = vec![c64::new(0.0, 0.0); 64];
        e[5] = c64::new(0.0, -1.0);
        let st = state_statistics(&e, &grid).unwrap();
        for k in 0..3 {
            assert!(st.d_q[k].abs() < 1e-15);
            assert!((st.s_q[k] - 64f64.ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn half_uniform_vector() {
        let mut v = vec![c64::new(0.0, 0.0); 16];
        for z in v.iter_mut().take(8) {
            *z = c64::new(8f64.sqrt().recip(), 0.0);
        }
        let st = state_statistics(&v, &[1.0, 2.0]).unwrap();
        assert!((st.d_q[1] - 0.75).abs() < 1e-14);
        assert!((st.d_q[0] - 0.75).abs() < 1e-14);
        assert!((st.i_q[0] - 1.0).abs() < 1e-14);
    }

    // Unnormalised complex vector -> unit vector.
    fn unit(raw: &[(f64, f64)]) -> Option<Vec<c64>> {
        let v: Vec<c64> = raw.iter().map(|&(a, b)| c64::new(a, b)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-3 {
            return None;
        }
        Some(v.into_iter().map(|z| z / norm).collect())
    }

    proptest! {
        #[test]
        fn invariants(raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2..40),
                      phases in prop::collection::vec(0.0f64..6.3, 40),
                      shift in 0usize..40) {
            let Some(v) = unit(&raw) else { return Ok(()) };
            let grid = [1.0, 1.5, 2.0, 3.0, 4.0, 6.0];
            let st = state_statistics(&v, &grid).unwrap();
            let ln_n = (v.len() as f64).ln();
            prop_assert!((st.i_q[0] - 1.0).abs() < 1e-10);
            for k in 0..grid.len() {
                prop_assert_eq!(st.s_q[k], ln_n * (1.0 - st.d_q[k]));
            }
            for w in st.d_q.windows(2) {
                prop_assert!(w[1] <= w[0] + 1e-12);
            }
            // rotate components and multiply by arbitrary phases
            let mut u = v.clone();
            u.rotate_left(shift % v.len());
            for (z, &ph) in u.iter_mut().zip(&phases) {
                *z *= c64::cis(ph);
            }
            let st2 = state_statistics(&u, &grid).unwrap();
            for k in 0..grid.len() {
                prop_assert!((st.d_q[k] - st2.d_q[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn six_component_oracle() {
        // Values computed with 50-digit arithmetic for the fixed vector below.
        let raw = [
            (0.3, -0.1),
            (0.5, 0.2),
            (-0.4, 0.0),
            (0.1, 0.6),
            (0.0, -0.2),
            (0.25, 0.05),
        ];
        let v = unit(&raw).unwrap();
        let st = state_statistics(&v, &[1.0, 2.0, 3.0]).unwrap();
        let want = [ORACLE_D1, ORACLE_D2, ORACLE_D3];
        for k in 0..3 {
            assert!(
                (st.d_q[k] - want[k]).abs() < 1e-12,
                "q index {k}: {} vs {}",
                st.d_q[k],
                want[k]
            );
        }
    }

    const ORACLE_D1: f64 = 0.861_430_046_718_359_07;
    const ORACLE_D2: f64 = 0.774_197_207_306_322_39;
    const ORACLE_D3: f64 = 0.723_832_186_103_463_29;
}
