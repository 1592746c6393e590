//! Run configuration: what gets saved to `run_config.json` and hashed into
//! every output header.

use std::path::PathBuf;

use clap::ValueEnum;
use mfcross::estimators::{StateWindow, DEFAULT_BINS, DEFAULT_BRACKET, DEFAULT_Y_RANGE};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Everything that determines the content of the output files.
///
/// `out` and `threads` may be given in a config file but are never saved or
/// hashed: they change where and how fast, not what.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub format: Format,
    pub command: CommandConfig,
    #[serde(default, skip_serializing)]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing)]
    pub threads: Option<usize>,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

impl RunConfig {
    pub fn new(command: CommandConfig) -> Self {
        RunConfig {
            seed: DEFAULT_SEED,
            format: Format::default(),
            command,
            out: None,
            threads: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("RunConfig serialises")
    }

    /// First 16 hex digits of the SHA-256 of the compact JSON encoding.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("RunConfig serialises");
        let digest = Sha256::digest(&bytes);
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum CommandConfig {
    Analytic(AnalyticParams),
    Rmt(RmtParams),
    Qkr(QkrParams),
    Billiard(BilliardParams),
    Spinchain(SpinChainParams),
    Fit(FitParams),
}

impl CommandConfig {
    pub fn name(&self) -> &'static str {
        match self {
            CommandConfig::Analytic(_) => "analytic",
            CommandConfig::Rmt(_) => "rmt",
            CommandConfig::Qkr(_) => "qkr",
            CommandConfig::Billiard(_) => "billiard",
            CommandConfig::Spinchain(_) => "spinchain",
            CommandConfig::Fit(_) => "fit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Analysis {
    Hist,
    Qsweep,
    Profile,
    Fit,
}

/// Estimator settings shared by every simulation command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisOptions {
    pub analyses: Vec<Analysis>,
    pub q_grid: Vec<f64>,
    /// States entering `qsweep`, `hist` and `fit`; `profile` always covers
    /// the whole spectrum.
    pub window: StateWindow,
    pub bins: usize,
    pub y_range: (f64, f64),
    pub fit_bracket: (f64, f64),
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            analyses: vec![Analysis::Hist, Analysis::Qsweep, Analysis::Profile, Analysis::Fit],
            q_grid: grid(1.0, 6.0, 0.25),
            window: StateWindow::All,
            bins: DEFAULT_BINS,
            y_range: DEFAULT_Y_RANGE,
            fit_bracket: DEFAULT_BRACKET,
        }
    }
}

impl AnalysisOptions {
    pub fn wants(&self, a: Analysis) -> bool {
        self.analyses.contains(&a)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalyticParams {
    pub q_grid: Vec<f64>,
    pub n_grid: Vec<usize>,
    pub eps_list: Vec<f64>,
}

impl Default for AnalyticParams {
    fn default() -> Self {
        AnalyticParams {
            q_grid: grid(1.0, 6.0, 0.5),
            n_grid: vec![10, 30, 100, 300, 1000, 3000, 10_000, 100_000, 1_000_000],
            eps_list: vec![0.1, 1.0, 4.0, 10.0, 100.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RmtParams {
    pub n_dim: usize,
    pub alpha: f64,
    /// Off-diagonal variance; `None` picks `1/(4N(1+α²))`.
    pub v2: Option<f64>,
    pub members: usize,
    /// Optional binary eigen-system cache to write alongside the tables.
    pub cache: Option<PathBuf>,
    pub analysis: AnalysisOptions,
}

impl Default for RmtParams {
    fn default() -> Self {
        RmtParams {
            n_dim: 1000,
            alpha: 0.0,
            v2: None,
            members: 200,
            cache: None,
            analysis: AnalysisOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QkrParams {
    pub n_dim: usize,
    pub kick_strength: f64,
    pub kick_jitter: f64,
    /// One run per value.
    pub gamma: Vec<f64>,
    pub theta0: Option<f64>,
    pub members: usize,
    pub analysis: AnalysisOptions,
}

impl Default for QkrParams {
    fn default() -> Self {
        QkrParams {
            n_dim: 201,
            kick_strength: 20000.0,
            kick_jitter: 250.0,
            gamma: vec![0.0],
            theta0: None,
            members: 500,
            analysis: AnalysisOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BilliardParams {
    pub width: u32,
    pub height: u32,
    pub ellipse_a: f64,
    pub ellipse_b: f64,
    pub onsite: f64,
    pub hopping: f64,
    /// Flux per plaquette; one run per value.
    pub b_field: Vec<f64>,
    pub dos_bin_width: f64,
    pub write_sites: bool,
    /// When false only eigenvalues are computed and only `dos` is written.
    pub eigenvectors: bool,
    pub analysis: AnalysisOptions,
}

impl Default for BilliardParams {
    fn default() -> Self {
        BilliardParams {
            width: 80,
            height: 90,
            ellipse_a: 45.0,
            ellipse_b: 35.0,
            onsite: 4.0,
            hopping: -1.0,
            b_field: vec![0.0],
            dos_bin_width: 0.2,
            write_sites: true,
            eigenvectors: true,
            analysis: AnalysisOptions {
                window: StateWindow::EnergyShell {
                    centre: 4.0,
                    min_offset: 0.5,
                    max_offset: 2.5,
                },
                ..AnalysisOptions::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpinChainParams {
    pub length: usize,
    pub j_coupling: f64,
    pub h_strength: f64,
    /// Chirality strengths; one run per value.
    pub k_list: Vec<f64>,
    pub sz_sector: f64,
    pub realizations: usize,
    pub write_basis: bool,
    pub analysis: AnalysisOptions,
}

impl Default for SpinChainParams {
    fn default() -> Self {
        SpinChainParams {
            length: 13,
            j_coupling: 1.0,
            h_strength: 0.2,
            k_list: vec![0.0, 0.01, 0.6],
            sz_sector: 0.5,
            realizations: 1,
            write_basis: false,
            analysis: AnalysisOptions {
                window: StateWindow::CentralFraction(0.2),
                ..AnalysisOptions::default()
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SampleKind {
    /// Scaled intensities `x = N|c|²`.
    #[default]
    X,
    /// Logarithms `y = ln x`.
    Y,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitParams {
    /// Text file with one sample per line (first column; `#` lines skipped).
    pub input: Option<PathBuf>,
    /// Eigen-system cache written by `rmt --cache`; every component is used.
    pub cache: Option<PathBuf>,
    pub kind: SampleKind,
    pub bracket: (f64, f64),
}

impl Default for FitParams {
    fn default() -> Self {
        FitParams {
            input: None,
            cache: None,
            kind: SampleKind::X,
            bracket: DEFAULT_BRACKET,
        }
    }
}

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|k| lo + k as f64 * step).collect()
}

/// Parse a window from `all`, `central:F`, `energy:LO:HI` or
/// `shell:CENTRE:MIN:MAX`.
pub fn parse_window(s: &str) -> Result<StateWindow, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let nums = |k: usize| -> Result<Vec<f64>, String> {
        if parts.len() != k + 1 {
            return Err(format!("window `{s}` expects {k} numbers"));
        }
        parts[1..]
            .iter()
            .map(|p| p.parse::<f64>().map_err(|e| format!("window `{s}`: {e}")))
            .collect()
    };
    match parts[0] {
        "all" if parts.len() == 1 => Ok(StateWindow::All),
        "central" => Ok(StateWindow::CentralFraction(nums(1)?[0])),
        "energy" => {
            let v = nums(2)?;
            Ok(StateWindow::Energy { lo: v[0], hi: v[1] })
        }
        "shell" => {
            let v = nums(3)?;
            Ok(StateWindow::EnergyShell {
                centre: v[0],
                min_offset: v[1],
                max_offset: v[2],
            })
        }
        _ => Err(format!("unknown window `{s}`")),
    }
}

pub fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("`{s}` is not of the form LO,HI"))?;
    let lo = a.trim().parse::<f64>().map_err(|e| format!("`{a}`: {e}"))?;
    let hi = b.trim().parse::<f64>().map_err(|e| format!("`{b}`: {e}"))?;
    Ok((lo, hi))
}

pub fn load(path: &std::path::Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}
