//! Pipeline orchestration over the analysis and regeneration crates.
//!
//! One subcommand per stage: `regenerate` turns a human corpus into a
//! model-regenerated one, `analyze` scores corpora into per-sample files,
//! `compare` summarizes distributions and classifies human/model shifts,
//! and `stats` emits the descriptive corpus statistics on their own. All
//! subcommands share a TOML run configuration; flags win over the file.

pub mod commands;
pub mod config;
pub mod util;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use thiserror::Error;

/// Exit codes: 0 success, 1 usage/config error, 2 data error, 3 endpoint
/// error.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("endpoint error: {0}")]
    Endpoint(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 1,
            CliError::Data(_) => 2,
            CliError::Endpoint(_) => 3,
        }
    }
}

impl From<textdrift_core::corpus::CorpusError> for CliError {
    fn from(e: textdrift_core::corpus::CorpusError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<textdrift_core::cleaning::CleaningError> for CliError {
    fn from(e: textdrift_core::cleaning::CleaningError) -> Self {
        match e {
            textdrift_core::cleaning::CleaningError::InvalidPolicy { .. } => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<textdrift_core::readability::ReadabilityError> for CliError {
    fn from(e: textdrift_core::readability::ReadabilityError) -> Self {
        use textdrift_core::readability::ReadabilityError::*;
        match e {
            EmptyFamiliarList | ListIo { .. } => CliError::Config(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<textdrift_core::syntax::MetricError> for CliError {
    fn from(e: textdrift_core::syntax::MetricError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<textdrift_core::syntax::SampleIoError> for CliError {
    fn from(e: textdrift_core::syntax::SampleIoError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<textdrift_core::distribution::DistributionError> for CliError {
    fn from(e: textdrift_core::distribution::DistributionError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<textdrift_regen::RegenError> for CliError {
    fn from(e: textdrift_regen::RegenError) -> Self {
        match e {
            textdrift_regen::RegenError::Config(msg) => CliError::Config(msg),
            other => CliError::Endpoint(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "textdrift",
    version,
    about = "Measure distribution shifts between human and model-regenerated text"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Regenerate a domain corpus through the configured endpoint
    Regenerate(CommonArgs),
    /// Score corpora: readability plus per-sentence syntactic metrics
    Analyze(CommonArgs),
    /// Summarize metric distributions and classify human/model shifts
    Compare(CommonArgs),
    /// Descriptive statistics over cleaned corpora
    Stats(CommonArgs),
}

#[derive(Debug, Args, Clone)]
pub struct CommonArgs {
    /// Run configuration file (TOML)
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory; overrides out_dir from the config
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Disable the cleaning stage (ablation run)
    #[arg(long)]
    pub no_clean: bool,
    /// Worker threads for per-article stages
    #[arg(long)]
    pub threads: Option<usize>,
    /// Override the minimum sentence length kept by cleaning
    #[arg(long)]
    pub min_words: Option<usize>,
    /// Override the maximum sentence length kept by cleaning
    #[arg(long)]
    pub max_words: Option<usize>,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Regenerate(args) => {
            let cfg = config::load_and_resolve(&args)?;
            commands::regenerate::cmd_regenerate(&cfg)
        }
        Command::Analyze(args) => {
            let cfg = config::load_and_resolve(&args)?;
            commands::analyze::cmd_analyze(&cfg)
        }
        Command::Compare(args) => {
            let cfg = config::load_and_resolve(&args)?;
            commands::compare::cmd_compare(&cfg)
        }
        Command::Stats(args) => {
            let cfg = config::load_and_resolve(&args)?;
            commands::stats::cmd_stats(&cfg)
        }
    }
}
