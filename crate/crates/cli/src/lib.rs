//! Batch front-end: parse a JSON run configuration, evaluate spectra, Green
//! tensors, invariant checks or surface poles, and write CSV or JSON tables.

pub mod commands;
pub mod config;
pub mod output;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::{Fault, RunOptions};
pub use config::{parse_config, ConfigError, OutputFormat, RunConfig};
pub use output::{Cell, Table, SCHEMA_VERSION};

#[derive(Debug, Parser)]
#[command(name = "stratqed", version, about = "Input-output relations of absorbing planar multilayers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Overrides the `format` field of the config.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Seed for the randomized check suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, hide = true)]
    pub inject_fault: Option<Fault>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Per-mode r, t, absorption and balance residual on the (omega, lambda) grid.
    Spectrum,
    /// 3x3 Green tensor for the points in the `green` section.
    Green,
    /// Invariant checks; exits non-zero if any fails.
    Check,
    /// Surface-guided-wave poles inside the `poles` window.
    Poles,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Compute(#[from] stratqed::Error),
    #[error("{context}: {source}")]
    Io { context: String, source: std::io::Error },
    #[error("--config is required")]
    MissingConfig,
}

/// Outcome of a successful run: `false` only when `check` found a failure.
pub fn run(cli: &Cli) -> Result<bool, CliError> {
    let path = cli.config.as_ref().ok_or(CliError::MissingConfig)?;
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { context: format!("reading {}", path.display()), source })?;
    let cfg = parse_config(&text)?;
    let opts = RunOptions { jobs: cli.jobs, seed: cli.seed, fault: cli.inject_fault };
    let (table, ok) = execute(cli.command, &cfg, &opts)?;
    let format = cli.format.unwrap_or(cfg.format);
    let io = |context: &str| {
        let context = context.to_string();
        move |source| CliError::Io { context, source }
    };
    match &cli.out {
        Some(p) => {
            let file = std::fs::File::create(p).map_err(io(&format!("creating {}", p.display())))?;
            let mut w = std::io::BufWriter::new(file);
            table.write(format, &mut w).map_err(io("writing output"))?;
            w.flush().map_err(io("writing output"))?;
        }
        None => {
            let stdout = std::io::stdout();
            table.write(format, stdout.lock()).map_err(io("writing output"))?;
        }
    }
    Ok(ok)
}

pub fn execute(command: Command, cfg: &RunConfig, opts: &RunOptions) -> stratqed::Result<(Table, bool)> {
    Ok(match command {
        Command::Spectrum => (commands::spectrum(cfg, opts)?, true),
        Command::Green => (commands::green(cfg, opts)?, true),
        Command::Check => commands::check(cfg, opts)?,
        Command::Poles => (commands::poles(cfg, opts)?, true),
    })
}
