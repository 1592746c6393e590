//! Command-line front end for `mfcross`: finite-N multifractal dimensions
//! across the orthogonal–unitary crossover, from closed forms, random-matrix
//! ensembles and model systems.
//!
//! The binary is a thin wrapper around [`run`]; the library form lets other
//! crates drive complete runs in-process.

mod analysis;
mod args;
mod commands;
pub mod config;
mod error;
pub mod output;

use std::path::PathBuf;

pub use crate::args::Cli;
pub use crate::error::{CliError, CliResult};

use crate::config::{CommandConfig, RunConfig};
use crate::output::Sink;

/// Resolve the configuration and execute it on a dedicated thread pool.
pub fn run(cli: Cli) -> CliResult<()> {
    let config = cli.resolve()?;
    let threads = config
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if threads == 0 {
        return Err(CliError::Config("--threads must be positive".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    pool.install(|| execute(&config))
}

fn execute(config: &RunConfig) -> CliResult<()> {
    let out = config.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    let sink = Sink::create(&out, config)?;
    let saved = sink.path("run_config.json");
    sink.write_bytes(&saved, format!("{}\n", config.to_json()).as_bytes())?;
    let seed = config.seed;
    match &config.command {
        CommandConfig::Analytic(p) => commands::analytic(p, &sink),
        CommandConfig::Rmt(p) => commands::rmt(p, seed, &sink),
        CommandConfig::Qkr(p) => commands::qkr(p, seed, &sink),
        CommandConfig::Billiard(p) => commands::billiard(p, &sink),
        CommandConfig::Spinchain(p) => commands::spinchain(p, seed, &sink),
        CommandConfig::Fit(p) => commands::fit(p, &sink),
    }
}
