//! Per-member estimators and their ordered reduction into output tables.

use mfcross::crossover::{d_q_crossover, d_q_oe, d_q_ue, CrossoverParam};
use mfcross::estimators::{
    component_weights, ensemble_avg_from_summaries, fit_epsilon_accumulated, spectral_profile_from_summaries,
    FitAccumulator, HistogramAccumulator, MemberSummary,
};
use mfcross::linalg::EigenSystem;
use mfcross::{Error, Result};
use serde_json::{json, Map, Value};

use crate::config::{Analysis, AnalysisOptions};
use crate::error::CliResult;
use crate::output::{Cell, Sink};

/// Members are processed in blocks of this many, so at most one block of
/// eigen-systems is alive at a time.
pub const BLOCK: usize = 32;

pub struct MemberOut {
    pub summary: MemberSummary,
    pub hist: Option<HistogramAccumulator>,
    pub fit: Option<FitAccumulator>,
}

/// Run every estimator over one member. `weights(j)` returns `|c_i|²` of
/// eigenvector `j`; each vector is visited exactly once.
pub fn analyse_member<F>(
    eigenvalues: Vec<f64>,
    n_dim: usize,
    opts: &AnalysisOptions,
    mut weights: F,
) -> Result<MemberOut>
where
    F: FnMut(usize) -> Result<Vec<f64>>,
{
    let mut in_window = vec![false; eigenvalues.len()];
    for j in opts.window.select(&eigenvalues)? {
        in_window[j] = true;
    }
    let mut hist = if opts.wants(Analysis::Hist) {
        Some(HistogramAccumulator::new(opts.bins, opts.y_range)?)
    } else {
        None
    };
    let mut fit = opts.wants(Analysis::Fit).then(FitAccumulator::new);
    let summary = MemberSummary::from_weights(eigenvalues, n_dim, &opts.q_grid, |j| {
        let p = weights(j)?;
        if in_window[j] {
            if let Some(h) = hist.as_mut() {
                h.add_weights(&p)?;
            }
            if let Some(f) = fit.as_mut() {
                f.add_weights(&p)?;
            }
        }
        Ok(p)
    })?;
    Ok(MemberOut { summary, hist, fit })
}

pub fn analyse_system(sys: &EigenSystem, opts: &AnalysisOptions) -> Result<MemberOut> {
    analyse_member(sys.eigenvalues.clone(), sys.eigenvectors.nrows(), opts, |j| {
        component_weights(sys.eigenvector(j))
    })
}

/// Weights of a real unit column, with the same normalisation check as the
/// complex path.
pub fn real_weights(col: impl Iterator<Item = f64>) -> Result<Vec<f64>> {
    let p: Vec<f64> = col.map(|c| c * c).collect();
    let norm_sq: f64 = p.iter().sum();
    if (norm_sq - 1.0).abs() > 1e-10 {
        return Err(Error::NormViolation { norm_sq });
    }
    Ok(p)
}

/// Ordered reduction of member outputs.
#[derive(Default)]
pub struct Combined {
    pub summaries: Vec<MemberSummary>,
    hist: Option<HistogramAccumulator>,
    fit: Option<FitAccumulator>,
}

impl Combined {
    pub fn push(&mut self, m: MemberOut) {
        self.summaries.push(m.summary);
        if let Some(h) = m.hist {
            match self.hist.as_mut() {
                Some(acc) => acc.merge(&h),
                None => self.hist = Some(h),
            }
        }
        if let Some(f) = m.fit {
            match self.fit.as_mut() {
                Some(acc) => acc.merge(&f),
                None => self.fit = Some(f),
            }
        }
    }
}

/// Extra information for the per-run summary.
pub struct RunInfo<'a> {
    /// File-name suffix for this parameter value.
    pub suffix: &'a str,
    /// Known crossover parameter, if any; `Some(0)` means the OE limit.
    pub eps_true: Option<f64>,
    /// Parameter name and value for swept runs.
    pub parameter: Option<(&'a str, f64)>,
    pub checks: Map<String, Value>,
}

/// Write the selected tables plus `summary<suffix>.json`.
pub fn write_outputs(sink: &Sink, combined: &Combined, opts: &AnalysisOptions, info: RunInfo<'_>) -> CliResult<()> {
    let first = combined.summaries.first().ok_or(Error::EmptySelection)?;
    let n_dim = first.n_dim;
    let sfx = info.suffix;
    let averaged = ensemble_avg_from_summaries(&combined.summaries, opts.window)?;

    if opts.wants(Analysis::Qsweep) {
        let rows: Vec<Vec<Cell>> = averaged
            .iter()
            .map(|a| vec![a.q.into(), a.d_q.into(), a.s_q.into()])
            .collect();
        sink.table(&format!("qsweep{sfx}"), &["q", "Dq", "Sq"], &rows)?;
    }
    if opts.wants(Analysis::Profile) {
        let profile = spectral_profile_from_summaries(&combined.summaries)?;
        let rows: Vec<Vec<Cell>> = profile
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.index.into(),
                    r.eigenvalue.into(),
                    r.d1.into(),
                    r.d2.into(),
                    r.s1.into(),
                    r.s2.into(),
                ]
            })
            .collect();
        sink.table(
            &format!("profile{sfx}"),
            &["index", "eigenvalue", "D1", "D2", "S1", "S2"],
            &rows,
        )?;
    }
    if let Some(h) = &combined.hist {
        let h = h.finish()?;
        let rows: Vec<Vec<Cell>> = h
            .centres()
            .into_iter()
            .zip(&h.density)
            .map(|(y, &d)| vec![y.into(), d.into()])
            .collect();
        sink.table(&format!("hist{sfx}"), &["y", "density"], &rows)?;
    }
    if let Some(acc) = &combined.fit {
        let fit = fit_epsilon_accumulated(acc, opts.fit_bracket)?;
        sink.json(
            &format!("fit{sfx}"),
            json!({
                "eps_hat": fit.eps_hat,
                "nll": fit.neg_log_likelihood,
                "n_samples": fit.n_samples,
                "converged": fit.converged,
                "boundary_hit": fit.boundary_hit,
                "bracket": [fit.bracket.0, fit.bracket.1],
                "evaluations": fit.evaluations,
                "eps_true": info.eps_true,
            }),
        )?;
    }

    let eps = info
        .eps_true
        .filter(|&e| e > 0.0)
        .map(CrossoverParam::new)
        .transpose()?;
    let dims: Vec<Value> = averaged
        .iter()
        .map(|a| {
            let oe = d_q_oe(a.q, n_dim).ok().map(|p| p.value);
            let ue = d_q_ue(a.q, n_dim).ok().map(|p| p.value);
            let cross = eps.and_then(|e| d_q_crossover(e, a.q, n_dim).ok()).map(|p| p.value);
            json!({
                "q": a.q,
                "Dq": a.d_q,
                "Sq": a.s_q,
                "std_error": a.std_error,
                "mean_state_Dq": a.mean_state_d_q,
                "oe": oe,
                "ue": ue,
                "crossover": cross,
            })
        })
        .collect();
    let mut body = Map::new();
    if let Some((name, value)) = info.parameter {
        body.insert("parameter".into(), json!({ "name": name, "value": value }));
    }
    body.insert("n_dim".into(), json!(n_dim));
    body.insert("n_members".into(), json!(combined.summaries.len()));
    body.insert("window".into(), serde_json::to_value(opts.window)?);
    body.insert("n_states".into(), json!(averaged[0].n_states));
    body.insert("eps_true".into(), json!(info.eps_true));
    body.insert("dimensions".into(), Value::Array(dims));
    body.insert("checks".into(), Value::Object(info.checks));
    sink.json(&format!("summary{sfx}"), Value::Object(body))?;
    Ok(())
}
