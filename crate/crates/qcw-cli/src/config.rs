//! Run configuration shared by every experiment subcommand.

use std::path::PathBuf;

/// How reports are rendered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Table,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "table" => Ok(OutputFormat::Table),
            other => Err(CliError::Config(format!(
                "unknown format {other:?}; expected json, csv, or table"
            ))),
        }
    }
}

/// Errors with their exit codes: configuration problems exit 2, file
/// problems exit 3.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    File(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::File(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::File(m) => m,
        }
    }
}

impl From<qcw::Error> for CliError {
    fn from(e: qcw::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

/// Parsed flags for one experiment run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub experiment: String,
    pub n: Option<usize>,
    pub n1: Option<usize>,
    pub n2: Option<usize>,
    pub eps: f64,
    pub seed: u64,
    pub trials: usize,
    pub marked: Option<String>,
    pub oracle_path: Option<PathBuf>,
    pub circuit_path: Option<PathBuf>,
    pub input: Option<String>,
    pub base: Option<u64>,
    pub modulus: Option<u64>,
    pub format: OutputFormat,
    pub timings: bool,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.eps > 0.0 && self.eps <= 0.5) {
            return Err(CliError::Config(format!(
                "--eps must lie in (0, 0.5], got {}",
                self.eps
            )));
        }
        if self.trials < 1 {
            return Err(CliError::Config("--trials must be at least 1".into()));
        }
        Ok(())
    }

    pub fn require_n(&self) -> Result<usize, CliError> {
        self.n
            .ok_or_else(|| CliError::Config(format!("{} requires --n", self.experiment)))
    }

    pub fn read_file(&self, path: &PathBuf) -> Result<String, CliError> {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::File(format!("{}: {e}", path.display())))
    }
}
