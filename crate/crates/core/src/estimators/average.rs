use serde::{Deserialize, Serialize};

use super::state::{check_grid, component_weights, dimension, entropy, is_q_one, moment, moments_for};
use crate::error::{Error, Result};
use crate::linalg::EigenSystem;

/// Which eigenvectors of each member enter an average.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum StateWindow {
    #[default]
    All,
    /// Eigenvalues (or eigen-angles) in `[lo, hi]`.
    Energy { lo: f64, hi: f64 },
    /// Eigenvalues with `min_offset < |E − centre| < max_offset`.
    EnergyShell {
        centre: f64,
        min_offset: f64,
        max_offset: f64,
    },
    /// The middle fraction of states by sorted index, e.g. `0.2` for the
    /// central 20%.
    CentralFraction(f64),
}

impl StateWindow {
    /// Indices of the states kept for a member with these sorted eigenvalues.
    pub fn select(&self, eigenvalues: &[f64]) -> Result<Vec<usize>> {
        if let StateWindow::EnergyShell {
            centre,
            min_offset,
            max_offset,
        } = *self
        {
            return Ok((0..eigenvalues.len())
                .filter(|&j| {
                    let d = (eigenvalues[j] - centre).abs();
                    d > min_offset && d < max_offset
                })
                .collect());
        }
        Ok(self.select_range(eigenvalues)?.collect())
    }

    fn select_range(&self, eigenvalues: &[f64]) -> Result<std::ops::Range<usize>> {
        let n = eigenvalues.len();
        match *self {
            StateWindow::All | StateWindow::EnergyShell { .. } => Ok(0..n),
            StateWindow::Energy { lo, hi } => {
                let start = eigenvalues.partition_point(|&e| e < lo);
                let end = eigenvalues.partition_point(|&e| e <= hi);
                Ok(start..end.max(start))
            }
            StateWindow::CentralFraction(f) => {
                if !(f > 0.0 && f <= 1.0) {
                    return Err(Error::domain("StateWindow", format!("fraction {f} outside (0, 1]")));
                }
                let keep = ((n as f64) * f).round() as usize;
                let start = (n - keep) / 2;
                Ok(start..start + keep)
            }
        }
    }
}

/// Per-state moments of one ensemble member; enough to form any average or
/// profile without the eigenvectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberSummary {
    pub n_dim: usize,
    pub q_grid: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    /// `I_q` for state `j`, grid index `k` at `j * q_grid.len() + k`.
    pub i_q: Vec<f64>,
    /// `−Σ|c|² ln|c|²` per state.
    pub entropy: Vec<f64>,
    /// `I_2` per state, kept separately for profiles.
    pub ipr: Vec<f64>,
}

impl MemberSummary {
    pub fn new(system: &EigenSystem, q_grid: &[f64]) -> Result<Self> {
        Self::from_weights(system.eigenvalues.clone(), system.eigenvectors.nrows(), q_grid, |j| {
            component_weights(system.eigenvector(j))
        })
    }

    /// Build from eigenvalues and a callback returning the weights `|c_i|²`
    /// of eigenvector `j` (already checked for normalisation).
    pub fn from_weights<F>(eigenvalues: Vec<f64>, n_dim: usize, q_grid: &[f64], mut weights: F) -> Result<Self>
    where
        F: FnMut(usize) -> Result<Vec<f64>>,
    {
        check_grid(q_grid)?;
        let n = eigenvalues.len();
        let mut i_q = Vec::with_capacity(n * q_grid.len());
        let mut ent = Vec::with_capacity(n);
        let mut ipr = Vec::with_capacity(n);
        for j in 0..n {
            let p = weights(j)?;
            if p.len() != n_dim {
                return Err(Error::DimensionMismatch {
                    expected: n_dim,
                    found: p.len(),
                });
            }
            i_q.extend(moments_for(&p, q_grid));
            ent.push(entropy(&p));
            ipr.push(moment(&p, 2.0));
        }
        Ok(MemberSummary {
            n_dim,
            q_grid: q_grid.to_vec(),
            eigenvalues,
            i_q,
            entropy: ent,
            ipr,
        })
    }

    pub fn n_states(&self) -> usize {
        self.eigenvalues.len()
    }

    fn window_states(&self, window: StateWindow) -> Result<Vec<usize>> {
        window.select(&self.eigenvalues)
    }

    fn i_q_at(&self, state: usize, k: usize) -> f64 {
        self.i_q[state * self.q_grid.len() + k]
    }
}

/// Ensemble-averaged dimension for one `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AveragedDimension {
    pub q: f64,
    /// `D̃_q = −ln Ĩ_q / ((q−1) ln N)`; at `q = 1` the averaged entropy over `ln N`.
    pub d_q: f64,
    /// `S̃_q = ln N (1 − D̃_q)`.
    pub s_q: f64,
    /// Plain mean of the per-state `D_q`; never below `d_q`.
    pub mean_state_d_q: f64,
    /// Standard error of `d_q` treating the selected states as independent.
    pub std_error: f64,
    pub n_states: usize,
}

/// Average moments over the selected states of every member, then take logs.
pub fn ensemble_avg_from_summaries(summaries: &[MemberSummary], window: StateWindow) -> Result<Vec<AveragedDimension>> {
    let first = summaries.first().ok_or(Error::EmptySelection)?;
    let n_dim = first.n_dim;
    let q_grid = &first.q_grid;
    for s in summaries {
        if s.n_dim != n_dim {
            return Err(Error::DimensionMismatch {
                expected: n_dim,
                found: s.n_dim,
            });
        }
        if &s.q_grid != q_grid {
            return Err(Error::domain("ensemble_avg", "members use different q grids"));
        }
    }
    let ln_n = (n_dim as f64).ln();
    let nq = q_grid.len();
    let mut sum = vec![0.0; nq];
    let mut sum_sq = vec![0.0; nq];
    let mut sum_d = vec![0.0; nq];
    let mut count = 0usize;
    for s in summaries {
        for j in s.window_states(window)? {
            count += 1;
            for (k, &q) in q_grid.iter().enumerate() {
                // the quantity averaged before the logarithm
                let a = if is_q_one(q) { s.entropy[j] } else { s.i_q_at(j, k) };
                sum[k] += a;
                sum_sq[k] += a * a;
                sum_d[k] += dimension(q, s.i_q_at(j, k), s.entropy[j], ln_n);
            }
        }
    }
    if count == 0 {
        return Err(Error::EmptySelection);
    }
    let n = count as f64;
    Ok(q_grid
        .iter()
        .enumerate()
        .map(|(k, &q)| {
            let mean = sum[k] / n;
            let var = if count > 1 {
                ((sum_sq[k] - n * mean * mean) / (n - 1.0)).max(0.0)
            } else {
                0.0
            };
            let se_mean = (var / n).sqrt();
            let (d_q, std_error) = if is_q_one(q) {
                (mean / ln_n, se_mean / ln_n)
            } else {
                (dimension(q, mean, 0.0, ln_n), se_mean / (mean * (q - 1.0) * ln_n))
            };
            AveragedDimension {
                q,
                d_q,
                s_q: ln_n * (1.0 - d_q),
                mean_state_d_q: sum_d[k] / n,
                std_error,
                n_states: count,
            }
        })
        .collect())
}

/// [`ensemble_avg_from_summaries`] directly on eigen-systems.
pub fn ensemble_avg_dq(systems: &[EigenSystem], q_grid: &[f64], window: StateWindow) -> Result<Vec<AveragedDimension>> {
    let summaries = systems
        .iter()
        .map(|s| MemberSummary::new(s, q_grid))
        .collect::<Result<Vec<_>>>()?;
    ensemble_avg_from_summaries(&summaries, window)
}

/// Member-averaged statistics of the state at one sorted position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub index: usize,
    pub eigenvalue: f64,
    pub d1: f64,
    pub d2: f64,
    pub s1: f64,
    pub s2: f64,
}

/// Statistics by sorted eigenvalue position, averaged over members.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralProfile {
    pub n_dim: usize,
    pub n_members: usize,
    pub rows: Vec<ProfileRow>,
}

impl SpectralProfile {
    /// Mean `(D₁, D₂)` over the rows in `range`.
    pub fn mean_over(&self, range: std::ops::Range<usize>) -> (f64, f64) {
        let rows = &self.rows[range];
        let n = rows.len() as f64;
        (
            rows.iter().map(|r| r.d1).sum::<f64>() / n,
            rows.iter().map(|r| r.d2).sum::<f64>() / n,
        )
    }
}

pub fn spectral_profile_from_summaries(summaries: &[MemberSummary]) -> Result<SpectralProfile> {
    let first = summaries.first().ok_or(Error::EmptySelection)?;
    let n_states = first.n_states();
    let n_dim = first.n_dim;
    let ln_n = (n_dim as f64).ln();
    let mut acc = vec![[0.0f64; 3]; n_states];
    for s in summaries {
        if s.n_states() != n_states || s.n_dim != n_dim {
            return Err(Error::DimensionMismatch {
                expected: n_states,
                found: s.n_states(),
            });
        }
        for (j, a) in acc.iter_mut().enumerate() {
            a[0] += s.eigenvalues[j];
            a[1] += s.entropy[j] / ln_n;
            a[2] += -s.ipr[j].ln() / ln_n;
        }
    }
    let m = summaries.len() as f64;
    let rows = acc
        .into_iter()
        .enumerate()
        .map(|(index, a)| {
            let (d1, d2) = (a[1] / m, a[2] / m);
            ProfileRow {
                index,
                eigenvalue: a[0] / m,
                d1,
                d2,
                s1: ln_n * (1.0 - d1),
                s2: ln_n * (1.0 - d2),
            }
        })
        .collect();
    Ok(SpectralProfile {
        n_dim,
        n_members: summaries.len(),
        rows,
    })
}

/// Per-index averages of eigenvalue, `D₁`, `D₂`, `S₁`, `S₂`.
pub fn spectral_profile(systems: &[EigenSystem]) -> Result<SpectralProfile> {
    let summaries = systems
        .iter()
        .map(|s| MemberSummary::new(s, &[2.0]))
        .collect::<Result<Vec<_>>>()?;
    spectral_profile_from_summaries(&summaries)
}
