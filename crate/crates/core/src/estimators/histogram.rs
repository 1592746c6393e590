use serde::{Deserialize, Serialize};

use super::state::component_weights;
use crate::c64;
use crate::error::{Error, Result};
use crate::linalg::EigenSystem;

pub const DEFAULT_BINS: usize = 81;
pub const DEFAULT_Y_RANGE: (f64, f64) = (-12.0, 3.0);

/// Density histogram of `y = ln(N|c|²)` over equal-width bins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentHistogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// Normalised over the in-range samples: `Σ density · width = 1`.
    pub density: Vec<f64>,
    pub total_count: u64,
    /// Samples outside the bin range, including exact zeros.
    pub out_of_range: u64,
}

impl ComponentHistogram {
    pub fn centres(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    pub fn bin_width(&self) -> f64 {
        self.edges[1] - self.edges[0]
    }
}

/// Integer bin counts; merge in member order for reproducible results.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramAccumulator {
    lo: f64,
    hi: f64,
    counts: Vec<u64>,
    out_of_range: u64,
}

impl HistogramAccumulator {
    pub fn new(n_bins: usize, y_range: (f64, f64)) -> Result<Self> {
        if n_bins < 10 {
            return Err(Error::domain(
                "component_histogram",
                format!("n_bins = {n_bins} must be at least 10"),
            ));
        }
        if !(y_range.0 < y_range.1) || !y_range.0.is_finite() || !y_range.1.is_finite() {
            return Err(Error::domain(
                "component_histogram",
                "y range must be finite with lo < hi",
            ));
        }
        Ok(HistogramAccumulator {
            lo: y_range.0,
            hi: y_range.1,
            counts: vec![0; n_bins],
            out_of_range: 0,
        })
    }

    pub fn add_y(&mut self, y: f64) {
        if !(y >= self.lo && y < self.hi) {
            self.out_of_range += 1;
            return;
        }
        let n = self.counts.len();
        let b = (((y - self.lo) / (self.hi - self.lo)) * n as f64) as usize;
        self.counts[b.min(n - 1)] += 1;
    }

    /// Add every component of a unit vector.
    pub fn add_vector(&mut self, v: &[c64]) -> Result<()> {
        self.add_weights(&component_weights(v)?)
    }

    /// Add every entry of a weight vector `|c_i|²` (normalisation is the
    /// caller's responsibility).
    pub fn add_weights(&mut self, weights: &[f64]) -> Result<()> {
        let n = weights.len() as f64;
        for &p in weights {
            self.add_y((n * p).ln());
        }
        Ok(())
    }

    pub fn add_system(&mut self, system: &EigenSystem) -> Result<()> {
        for j in 0..system.dim() {
            self.add_vector(system.eigenvector(j))?;
        }
        Ok(())
    }

    pub fn merge(&mut self, other: &HistogramAccumulator) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.out_of_range += other.out_of_range;
    }

    pub fn finish(&self) -> Result<ComponentHistogram> {
        let in_range: u64 = self.counts.iter().sum();
        if in_range == 0 {
            return Err(Error::EmptySelection);
        }
        let n = self.counts.len();
        let width = (self.hi - self.lo) / n as f64;
        let edges: Vec<f64> = (0..=n).map(|i| self.lo + width * i as f64).collect();
        let density = self
            .counts
            .iter()
            .map(|&c| c as f64 / (in_range as f64 * width))
            .collect();
        Ok(ComponentHistogram {
            edges,
            counts: self.counts.clone(),
            density,
            total_count: in_range + self.out_of_range,
            out_of_range: self.out_of_range,
        })
    }
}

/// Histogram of `ln(N|c|²)` over all components of all eigenvectors.
pub fn component_histogram(systems: &[EigenSystem], n_bins: usize, y_range: (f64, f64)) -> Result<ComponentHistogram> {
    let mut acc = HistogramAccumulator::new(n_bins, y_range)?;
    for s in systems {
        acc.add_system(s)?;
    }
    acc.finish()
}
