//! Tabulated distributions of `y = ln x`, for goodness-of-fit tests and
//! inverse-CDF sampling.

use serde::{Deserialize, Serialize};

use super::{pdf_crossover_log, CrossoverParam};
use crate::error::{Error, Result};

/// Which component law a table describes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ComponentLaw {
    /// `e^{-x/2}/√(2πx)`
    Orthogonal,
    /// `e^{-x}`
    Unitary,
    Crossover(CrossoverParam),
}

impl ComponentLaw {
    /// Law for ensemble parameter `ε`: `0` gives the orthogonal limit.
    pub fn for_epsilon(eps: f64) -> Result<Self> {
        let p = CrossoverParam::new(eps)?;
        Ok(if eps == 0.0 {
            ComponentLaw::Orthogonal
        } else {
            ComponentLaw::Crossover(p)
        })
    }

    /// Density of `y = ln x`.
    pub fn log_density(&self, y: f64) -> Result<f64> {
        match self {
            ComponentLaw::Orthogonal => {
                let x = y.exp();
                Ok((0.5 * y - 0.5 * x).exp() / (2.0 * std::f64::consts::PI).sqrt())
            }
            ComponentLaw::Unitary => Ok((y - y.exp()).exp()),
            ComponentLaw::Crossover(p) => pdf_crossover_log(*p, y),
        }
    }
}

/// CDF of `y = ln x` on a uniform grid, integrated by the trapezoid rule
/// and renormalised so the last node is exactly 1.
#[derive(Debug, Clone)]
pub struct LawTable {
    y_min: f64,
    step: f64,
    density: Vec<f64>,
    cdf: Vec<f64>,
    /// Total mass on the grid before renormalisation.
    pub raw_mass: f64,
}

impl LawTable {
    pub const DEFAULT_RANGE: (f64, f64) = (-30.0, 4.5);

    pub fn new(law: ComponentLaw, y_min: f64, y_max: f64, nodes: usize) -> Result<Self> {
        if !(y_min < y_max) || nodes < 3 {
            return Err(Error::domain("LawTable", "need y_min < y_max and at least 3 nodes"));
        }
        let step = (y_max - y_min) / (nodes - 1) as f64;
        let density = (0..nodes)
            .map(|i| law.log_density(y_min + step * i as f64))
            .collect::<Result<Vec<f64>>>()?;
        let mut cdf = Vec::with_capacity(nodes);
        let mut acc = 0.0;
        cdf.push(0.0);
        for w in density.windows(2) {
            acc += 0.5 * step * (w[0] + w[1]);
            cdf.push(acc);
        }
        if !(acc > 0.0) {
            return Err(Error::domain("LawTable", "density has no mass on the grid"));
        }
        for c in &mut cdf {
            *c /= acc;
        }
        Ok(LawTable {
            y_min,
            step,
            density,
            cdf,
            raw_mass: acc,
        })
    }

    /// Default resolution over `[-30, 4.5]`.
    pub fn with_defaults(law: ComponentLaw) -> Result<Self> {
        Self::new(law, Self::DEFAULT_RANGE.0, Self::DEFAULT_RANGE.1, 3001)
    }

    pub fn y_max(&self) -> f64 {
        self.y_min + self.step * (self.cdf.len() - 1) as f64
    }

    /// CDF at `y`, exact for the piecewise-linear density on the grid.
    pub fn cdf(&self, y: f64) -> f64 {
        if y <= self.y_min {
            return 0.0;
        }
        if y >= self.y_max() {
            return 1.0;
        }
        let t = (y - self.y_min) / self.step;
        let i = (t.floor() as usize).min(self.cdf.len() - 2);
        let f = t - i as f64;
        let (d0, d1) = (self.density[i], self.density[i + 1]);
        let partial = self.step * (d0 * f + 0.5 * (d1 - d0) * f * f);
        let mass = self.cdf[self.cdf.len() - 1] * self.raw_mass;
        self.cdf[i] + partial / mass
    }

    /// Inverse CDF by bisection on the table followed by solving the quadratic
    /// inside the cell.
    pub fn quantile(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return self.y_min;
        }
        if u >= 1.0 {
            return self.y_max();
        }
        let i = match self.cdf.binary_search_by(|c| c.total_cmp(&u)) {
            Ok(i) => return self.y_min + self.step * i as f64,
            Err(i) => i - 1,
        };
        let target = (u - self.cdf[i]) * self.raw_mass / self.step;
        let (d0, d1) = (self.density[i], self.density[i + 1]);
        let a = 0.5 * (d1 - d0);
        // solve a f² + d0 f = target for f in [0, 1]
        let f = if a.abs() < 1e-14 * d0.abs().max(1e-300) {
            if d0 > 0.0 {
                target / d0
            } else {
                0.5
            }
        } else {
            let disc = (d0 * d0 + 4.0 * a * target).max(0.0);
            2.0 * target / (d0 + disc.sqrt())
        };
        self.y_min + self.step * (i as f64 + f.clamp(0.0, 1.0))
    }

    /// Kolmogorov–Smirnov distance between sorted samples of `y` and this law.
    pub fn ks_statistic(&self, sorted_y: &[f64]) -> Result<f64> {
        if sorted_y.is_empty() {
            return Err(Error::EmptySelection);
        }
        let n = sorted_y.len() as f64;
        let mut d = 0.0f64;
        for (i, &y) in sorted_y.iter().enumerate() {
            let c = self.cdf(y);
            d = d.max(((i + 1) as f64 / n - c).abs()).max((c - i as f64 / n).abs());
        }
        Ok(d)
    }
}

/// Asymptotic Kolmogorov critical value `c(α)/√n` for significance level `alpha`.
pub fn ks_critical_value(n: usize, alpha: f64) -> f64 {
    (-0.5 * (0.5 * alpha).ln()).sqrt() / (n as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_table_matches_closed_cdf() {
        let t = LawTable::with_defaults(ComponentLaw::Unitary).unwrap();
        assert!((t.raw_mass - 1.0).abs() < 1e-5);
        for y in [-5.0, -1.0, 0.0, 1.0, 2.0] {
            let exact = 1.0 - (-f64::exp(y)).exp();
            assert!((t.cdf(y) - exact).abs() < 1e-4, "y={y}");
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        let t = LawTable::with_defaults(ComponentLaw::Orthogonal).unwrap();
        for u in [1e-6, 0.01, 0.3, 0.5, 0.9, 0.999] {
            let y = t.quantile(u);
            assert!((t.cdf(y) - u).abs() < 1e-10, "u={u}");
        }
    }

    #[test]
    fn ks_of_exact_quantiles_is_small() {
        let t = LawTable::with_defaults(ComponentLaw::Unitary).unwrap();
        let n = 1000;
        let ys: Vec<f64> = (0..n).map(|i| t.quantile((i as f64 + 0.5) / n as f64)).collect();
        let d = t.ks_statistic(&ys).unwrap();
        assert!(d <= 0.5 / n as f64 + 1e-9);
        assert!((ks_critical_value(10_000, 0.01) - 0.016276).abs() < 1e-5);
    }
}
