//! Command-line front end: validation, decompositions, convergence sweeps,
//! Koopman norms and the seeded verification battery.

pub mod commands;
pub mod config;
pub mod suite;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

pub use config::{ExperimentConfig, LoadedConfig, Mode};
pub use suite::{run_suite, CheckResult, Mutation, RunManifest, Verdict, CHECKS};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_CONFIG: i32 = 64;
pub const EXIT_CAP: i32 = 70;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Library(#[from] synergodic::Error),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use synergodic::Error as E;
        match self {
            CliError::Library(
                E::SupportCapExceeded { .. }
                | E::SizeCapExceeded { .. }
                | E::IterationCapExceeded(_)
                | E::DimensionOverflow { .. },
            ) => EXIT_CAP,
            CliError::Write { .. } => EXIT_CAP,
            _ => EXIT_CONFIG,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "synergodic", version, about = "Experiments with measure-preserving actions of product groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub mode: Option<Mode>,
    #[arg(long, global = true)]
    pub threshold: Option<f64>,
    #[arg(long, global = true)]
    pub nmax: Option<usize>,
    /// Record wallclock times; output is then no longer reproducible.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Check that an action or pair preserves the measure, is a
    /// homomorphism and commutes.
    Validate,
    /// Ergodic and synergodic decomposition report.
    Decompose,
    /// Convergence sweep of (eccentric) ergodic averages as CSV.
    Converge,
    /// Whether the invariant partitions of a pair are independent.
    Independence,
    /// Operator norm of a group-ring element in the Koopman
    /// representation, as JSON.
    KoopmanNorm,
    /// Seeded battery of exact checks; writes a JSON manifest.
    Suite,
}

/// What a command produced and how the process should exit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub code: i32,
    pub output: String,
}

impl Cli {
    fn load(&self) -> Result<LoadedConfig, CliError> {
        let mut loaded = match &self.config {
            Some(path) => LoadedConfig::read(path)?,
            None => LoadedConfig { config: ExperimentConfig::default(), base: PathBuf::new() },
        };
        let c = &mut loaded.config;
        if let Some(seed) = self.seed {
            c.seed = seed;
        }
        if let Some(mode) = self.mode {
            c.mode = mode;
        }
        if let Some(t) = self.threshold {
            c.threshold = t;
        }
        if let Some(n) = self.nmax {
            c.n_max = n;
        }
        if let Some(out) = &self.out {
            c.out = Some(out.display().to_string());
        }
        Ok(loaded)
    }

    /// Runs the command without touching the output path.
    pub fn execute(&self) -> Result<Report, CliError> {
        let loaded = self.load()?;
        match self.command {
            Command::Validate => commands::validate(&loaded),
            Command::Decompose => commands::decompose(&loaded),
            Command::Converge => commands::converge(&loaded, self.timings),
            Command::Independence => commands::independence(&loaded),
            Command::KoopmanNorm => commands::koopman_norm(&loaded),
            Command::Suite => commands::suite(&loaded, self.timings),
        }
    }

    /// Where output goes: `--out`, else the config's `out` resolved against
    /// the config directory, else stdout.
    pub fn output_path(&self) -> Result<Option<PathBuf>, CliError> {
        if let Some(out) = &self.out {
            return Ok(Some(out.clone()));
        }
        let loaded = self.load()?;
        Ok(loaded.config.out.as_ref().map(|p| loaded.base.join(p)))
    }
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomically(path: &Path, contents: &str) -> Result<(), CliError> {
    let err = |source| CliError::Write { path: path.to_path_buf(), source };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(err)?;
    tmp.write_all(contents.as_bytes()).map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}
