//! Experiment runner for `ncft`.
//!
//! Every experiment is configured by `key = value` pairs (a config file,
//! then `--set` overrides), always needs a `seed`, and writes one
//! long-format table as CSV or JSON with a metadata block that records the
//! full configuration and the library version. The same configuration
//! produces byte-identical output, serial or parallel.
//!
//! Exit codes: 0 success, 1 configuration error, 2 resource guard,
//! 3 failed numerical check.

pub mod config;
pub mod output;
pub mod run;

use std::path::PathBuf;

use clap::Parser;
use ncft::mc::Exec;

pub use config::{parse_config_text, ExperimentConfig, Format, Plan, EXPERIMENTS};
pub use output::{render, Cell, Table};
pub use run::{execute, Outcome};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("resource guard: {0}")]
    Guard(String),
    #[error("numerical check failed: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Guard(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<ncft::Error> for CliError {
    fn from(e: ncft::Error) -> Self {
        use ncft::Error as E;
        match e {
            E::Guard(_) => CliError::Guard(e.to_string()),
            E::Quadrature { .. } | E::NoConvergence(_) | E::BranchAmbiguity { .. } => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Config(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ncft-lab", version, about = "Noncommutative Fourier transform experiments")]
pub struct Args {
    /// One of: sig, bch, basis, shuffle-check, wiener-expsig, heis-heat, folland,
    /// haar-coeff, haar-orth, gue-moments, free-moments, matrix-fourier, al-identity.
    pub experiment: String,
    /// `key = value` config file.
    #[arg(short, long)]
    pub config: Option<PathBuf>,
    /// Parameter override, repeatable; wins over the config file.
    #[arg(short = 's', long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file (default: standard output).
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    #[arg(short, long, value_parser = ["csv", "json"])]
    pub format: Option<String>,
    /// Run Monte Carlo chunks on one thread. Output is identical either way.
    #[arg(long)]
    pub serial: bool,
}

impl Args {
    pub fn config(&self) -> Result<ExperimentConfig, CliError> {
        let file = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
                parse_config_text(&text)?
            }
            None => Default::default(),
        };
        let mut overrides = self
            .overrides
            .iter()
            .map(|s| config::parse_override(s))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(seed) = self.seed {
            overrides.push(("seed".into(), seed.to_string()));
        }
        if let Some(out) = &self.out {
            overrides.push(("out".into(), out.display().to_string()));
        }
        if let Some(f) = &self.format {
            overrides.push(("format".into(), f.clone()));
        }
        ExperimentConfig::build(&self.experiment, file, overrides)
    }

    pub fn exec(&self) -> Exec {
        if self.serial {
            Exec::Serial
        } else {
            Exec::Parallel
        }
    }
}

/// Rendered output of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub text: String,
    /// Set when a deterministic check in the table failed (exit code 3).
    pub failure: Option<String>,
}

/// Runs `cfg` and writes the rendered table to `cfg.output` when set.
pub fn run(cfg: &ExperimentConfig, exec: Exec) -> Result<Report, CliError> {
    let outcome = execute(cfg, exec)?;
    let text = render(cfg, &outcome.table)?;
    if let Some(path) = &cfg.output {
        std::fs::write(path, &text)?;
    }
    Ok(Report {
        text,
        failure: outcome.failure,
    })
}
