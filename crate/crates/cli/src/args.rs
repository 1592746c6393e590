//! Command-line flags. Every flag is optional so that it can override a
//! value loaded with `--config`; unset flags keep the file's (or the
//! default) value.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use mfcross::estimators::StateWindow;

use crate::config::{
    self, parse_pair, parse_window, Analysis, AnalysisOptions, AnalyticParams, BilliardParams, CommandConfig,
    FitParams, Format, QkrParams, RmtParams, RunConfig, SampleKind, SpinChainParams,
};
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "mfcross",
    version,
    about = "Multifractal dimensions across the orthogonal-unitary crossover"
)]
pub struct Cli {
    /// Master seed for every random stream.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory [default: out].
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Table format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads [default: available cores].
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// JSON run configuration, e.g. a saved `run_config.json`.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form OE/UE and semi-analytic crossover dimensions.
    Analytic(AnalyticArgs),
    /// Pandey–Mehta ensemble.
    Rmt(RmtArgs),
    /// Quantum kicked rotor.
    Qkr(QkrArgs),
    /// Tight-binding quarter Sinai billiard.
    Billiard(BilliardArgs),
    /// Disordered spin chain with chirality.
    Spinchain(SpinChainArgs),
    /// Maximum-likelihood ε from component samples.
    Fit(FitArgs),
}

#[derive(Debug, Args)]
pub struct AnalyticArgs {
    #[arg(long, value_delimiter = ',')]
    q_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    n_grid: Option<Vec<usize>>,
    #[arg(long = "eps", value_delimiter = ',')]
    eps_list: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct AnalysisArgs {
    /// Analyses to run (hist, qsweep, profile, fit).
    #[arg(long, value_enum, value_delimiter = ',')]
    analyses: Option<Vec<Analysis>>,
    #[arg(long, value_delimiter = ',')]
    q_grid: Option<Vec<f64>>,
    /// all | central:F | energy:LO:HI | shell:CENTRE:MIN:MAX
    #[arg(long, value_parser = parse_window)]
    window: Option<StateWindow>,
    /// Histogram bins.
    #[arg(long)]
    bins: Option<usize>,
    /// Histogram range of y = ln(N|c|²), as LO,HI.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    y_range: Option<(f64, f64)>,
    /// Bracket for the ε fit, as LO,HI.
    #[arg(long, value_parser = parse_pair)]
    fit_bracket: Option<(f64, f64)>,
}

#[derive(Debug, Args)]
pub struct RmtArgs {
    #[arg(long)]
    n_dim: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    v2: Option<f64>,
    #[arg(long)]
    members: Option<usize>,
    /// Also write every eigen-system to this binary cache.
    #[arg(long)]
    cache: Option<PathBuf>,
    #[command(flatten)]
    analysis: AnalysisArgs,
}

#[derive(Debug, Args)]
pub struct QkrArgs {
    #[arg(long)]
    n_dim: Option<usize>,
    #[arg(long)]
    kick: Option<f64>,
    #[arg(long)]
    jitter: Option<f64>,
    /// Time-reversal breaking strengths; one run each.
    #[arg(long, value_delimiter = ',')]
    gamma: Option<Vec<f64>>,
    #[arg(long)]
    theta0: Option<f64>,
    #[arg(long)]
    members: Option<usize>,
    #[command(flatten)]
    analysis: AnalysisArgs,
}

#[derive(Debug, Args)]
pub struct BilliardArgs {
    #[arg(long)]
    width: Option<u32>,
    #[arg(long)]
    height: Option<u32>,
    #[arg(long)]
    ellipse_a: Option<f64>,
    #[arg(long)]
    ellipse_b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    onsite: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    hopping: Option<f64>,
    /// Flux per plaquette; one run each.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    b_field: Option<Vec<f64>>,
    #[arg(long)]
    dos_bin_width: Option<f64>,
    #[arg(long)]
    write_sites: Option<bool>,
    /// Compute eigenvectors; `false` writes only the density of states.
    #[arg(long)]
    eigenvectors: Option<bool>,
    /// The 40×45 geometry with semi-axes 22.5 and 17.5.
    #[arg(long)]
    reduced: bool,
    #[command(flatten)]
    analysis: AnalysisArgs,
}

#[derive(Debug, Args)]
pub struct SpinChainArgs {
    #[arg(long)]
    length: Option<usize>,
    #[arg(long)]
    j_coupling: Option<f64>,
    #[arg(long)]
    h_strength: Option<f64>,
    /// Chirality strengths; one run each.
    #[arg(long = "k", value_delimiter = ',', allow_hyphen_values = true)]
    k_list: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    sz_sector: Option<f64>,
    #[arg(long)]
    realizations: Option<usize>,
    #[arg(long)]
    write_basis: Option<bool>,
    #[command(flatten)]
    analysis: AnalysisArgs,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Text file of samples, one per line.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Eigen-system cache from `rmt --cache`.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Whether the input holds x = N|c|² or y = ln x.
    #[arg(long, value_enum)]
    kind: Option<SampleKind>,
    #[arg(long, value_parser = parse_pair)]
    bracket: Option<(f64, f64)>,
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

impl AnalysisArgs {
    fn apply(self, o: &mut AnalysisOptions) {
        set(&mut o.analyses, self.analyses);
        set(&mut o.q_grid, self.q_grid);
        set(&mut o.window, self.window);
        set(&mut o.bins, self.bins);
        set(&mut o.y_range, self.y_range);
        set(&mut o.fit_bracket, self.fit_bracket);
    }
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Analytic(_) => "analytic",
            Command::Rmt(_) => "rmt",
            Command::Qkr(_) => "qkr",
            Command::Billiard(_) => "billiard",
            Command::Spinchain(_) => "spinchain",
            Command::Fit(_) => "fit",
        }
    }

    fn default_config(&self) -> CommandConfig {
        match self {
            Command::Analytic(_) => CommandConfig::Analytic(AnalyticParams::default()),
            Command::Rmt(_) => CommandConfig::Rmt(RmtParams::default()),
            Command::Qkr(_) => CommandConfig::Qkr(QkrParams::default()),
            Command::Billiard(_) => CommandConfig::Billiard(BilliardParams::default()),
            Command::Spinchain(_) => CommandConfig::Spinchain(SpinChainParams::default()),
            Command::Fit(_) => CommandConfig::Fit(FitParams::default()),
        }
    }

    fn apply(self, cfg: &mut CommandConfig) {
        match (self, cfg) {
            (Command::Analytic(a), CommandConfig::Analytic(p)) => {
                set(&mut p.q_grid, a.q_grid);
                set(&mut p.n_grid, a.n_grid);
                set(&mut p.eps_list, a.eps_list);
            }
            (Command::Rmt(a), CommandConfig::Rmt(p)) => {
                set(&mut p.n_dim, a.n_dim);
                set(&mut p.alpha, a.alpha);
                if a.v2.is_some() {
                    p.v2 = a.v2;
                }
                set(&mut p.members, a.members);
                if a.cache.is_some() {
                    p.cache = a.cache;
                }
                a.analysis.apply(&mut p.analysis);
            }
            (Command::Qkr(a), CommandConfig::Qkr(p)) => {
                set(&mut p.n_dim, a.n_dim);
                set(&mut p.kick_strength, a.kick);
                set(&mut p.kick_jitter, a.jitter);
                set(&mut p.gamma, a.gamma);
                if a.theta0.is_some() {
                    p.theta0 = a.theta0;
                }
                set(&mut p.members, a.members);
                a.analysis.apply(&mut p.analysis);
            }
            (Command::Billiard(a), CommandConfig::Billiard(p)) => {
                if a.reduced {
                    p.width = 40;
                    p.height = 45;
                    p.ellipse_a = 22.5;
                    p.ellipse_b = 17.5;
                }
                set(&mut p.width, a.width);
                set(&mut p.height, a.height);
                set(&mut p.ellipse_a, a.ellipse_a);
                set(&mut p.ellipse_b, a.ellipse_b);
                set(&mut p.onsite, a.onsite);
                set(&mut p.hopping, a.hopping);
                set(&mut p.b_field, a.b_field);
                set(&mut p.dos_bin_width, a.dos_bin_width);
                set(&mut p.write_sites, a.write_sites);
                set(&mut p.eigenvectors, a.eigenvectors);
                a.analysis.apply(&mut p.analysis);
            }
            (Command::Spinchain(a), CommandConfig::Spinchain(p)) => {
                set(&mut p.length, a.length);
                set(&mut p.j_coupling, a.j_coupling);
                set(&mut p.h_strength, a.h_strength);
                set(&mut p.k_list, a.k_list);
                set(&mut p.sz_sector, a.sz_sector);
                set(&mut p.realizations, a.realizations);
                set(&mut p.write_basis, a.write_basis);
                a.analysis.apply(&mut p.analysis);
            }
            (Command::Fit(a), CommandConfig::Fit(p)) => {
                if a.input.is_some() {
                    p.input = a.input;
                }
                if a.cache.is_some() {
                    p.cache = a.cache;
                }
                set(&mut p.kind, a.kind);
                set(&mut p.bracket, a.bracket);
            }
            _ => unreachable!("command kinds are matched before applying"),
        }
    }
}

impl Cli {
    /// Merge defaults, the optional config file and the flags, in that order.
    pub fn resolve(self) -> CliResult<RunConfig> {
        let mut cfg = match (&self.config, &self.command) {
            (Some(path), _) => config::load(path)?,
            (None, Some(cmd)) => RunConfig::new(cmd.default_config()),
            (None, None) => return Err(CliError::Config("give a subcommand or --config <file>".into())),
        };
        if let Some(cmd) = self.command {
            if cmd.name() != cfg.command.name() {
                return Err(CliError::Config(format!(
                    "subcommand `{}` does not match the configuration's `{}`",
                    cmd.name(),
                    cfg.command.name()
                )));
            }
            cmd.apply(&mut cfg.command);
        }
        set(&mut cfg.seed, self.seed);
        set(&mut cfg.format, self.format);
        if self.out.is_some() {
            cfg.out = self.out;
        }
        if self.threads.is_some() {
            cfg.threads = self.threads;
        }
        Ok(cfg)
    }
}
