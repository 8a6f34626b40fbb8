//! Command-line front end for the quantized STT-MRAM channel: parameter
//! sweeps, threshold designs, derivative curves, Monte Carlo validation and
//! raw sample export.

pub mod commands;
pub mod config;
pub mod error;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

pub use config::{Config, ConfigError};
pub use error::{CliError, EXIT_IO, EXIT_NUMERIC, EXIT_USAGE, EXIT_VALIDATION_FAILED};

#[derive(Debug, Parser)]
#[command(name = "qchan", version, about = "Quantized STT-MRAM channel bounds and quantizer design")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Run configuration (flat `key = value` file).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output file; defaults to the config's `output` key, then stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Monte Carlo seed (overrides `seed`).
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Total Monte Carlo samples, split evenly between the inputs (overrides `samples`).
    #[arg(long, global = true)]
    pub samples: Option<u64>,

    /// Quantizer levels, a power of two (overrides `levels`).
    #[arg(long, global = true)]
    pub levels: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Sweep sigma_ratio_grid and report bounds for each designer.
    Bounds,
    /// Design thresholds for one parameter set.
    Design,
    /// Threshold derivatives of the 1-bit bounds.
    Derivatives,
    /// Compare the analytic transition matrix with Monte Carlo counts.
    Validate,
    /// Write raw Monte Carlo samples as CSV.
    ExportSamples,
}

/// Result of a successful run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Done,
    ValidationFailed,
}

/// Reads `--config` and applies the command-line overrides.
pub fn load_config(cli: &Cli) -> Result<Config, CliError> {
    let path = cli.config.as_ref().ok_or_else(|| CliError::Usage("--config <path> is required".into()))?;
    let text =
        std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let mut cfg = Config::parse(&text)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(samples) = cli.samples {
        if samples == 0 {
            return Err(CliError::Usage("--samples must be at least 1".into()));
        }
        cfg.samples = samples;
    }
    if let Some(levels) = cli.levels {
        config::check_levels(levels).map_err(|e| CliError::Usage(format!("--levels: {e}")))?;
        if let Some(t) = &cfg.thresholds {
            if t.len() + 1 != levels {
                return Err(CliError::Usage(format!(
                    "--levels {levels} conflicts with {} configured thresholds",
                    t.len()
                )));
            }
        }
        cfg.levels = levels;
    }
    if let Some(out) = &cli.out {
        cfg.output = Some(out.clone());
    }
    Ok(cfg)
}

/// Writes `text` to `path` via a temporary sibling and rename, so readers
/// never observe a partial file.
pub fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let io_err = |source: std::io::Error| CliError::Io { path: path.display().to_string(), source };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(text.as_bytes()).map_err(io_err)?;
    tmp.flush().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

fn emit(cfg: &Config, text: &str) -> Result<(), CliError> {
    match &cfg.output {
        Some(path) => write_atomic(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = load_config(cli)?;
    match cli.command {
        Command::Bounds => emit(&cfg, &commands::bounds(&cfg)?)?,
        Command::Design => emit(&cfg, &commands::design_report(&cfg)?)?,
        Command::Derivatives => emit(&cfg, &commands::derivatives(&cfg)?)?,
        Command::Validate => {
            let (text, pass) = commands::validate(&cfg)?;
            emit(&cfg, &text)?;
            if !pass {
                return Ok(Outcome::ValidationFailed);
            }
        }
        Command::ExportSamples => {
            let path = cfg
                .output
                .clone()
                .ok_or_else(|| CliError::Usage("export-samples needs --out <path> or an output key".into()))?;
            commands::export_samples(&cfg, &path)?;
        }
    }
    Ok(Outcome::Done)
}
