//! Run configuration: a TOML document plus flag overrides (flags win).

use crate::{CliError, CommonArgs};
use serde::Deserialize;
use std::collections::HashSet;
use std::path::{Path, PathBuf};
use textdrift_core::cleaning::CleaningPolicy;
use textdrift_core::corpus::{Domain, Source};
use textdrift_core::distribution::SignatureThresholds;
use textdrift_regen::WireShape;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FileConfig {
    pub out_dir: Option<PathBuf>,
    pub corpus: Vec<CorpusEntry>,
    pub cleaning: CleaningPolicy,
    pub thresholds: SignatureThresholds,
    pub readability: ReadabilitySection,
    pub regen: Option<RegenSection>,
}

/// One corpus file pair: where the articles live and, when parsed, where
/// the parse sidecar lives.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub domain: Domain,
    pub source: Source,
    pub articles: PathBuf,
    #[serde(default)]
    pub parses: Option<PathBuf>,
}

impl CorpusEntry {
    /// Stable tag used in output file names, e.g. `wikipedia_human`.
    pub fn tag(&self) -> String {
        format!("{}_{}", self.domain, self.source)
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReadabilitySection {
    pub familiar_words: Option<PathBuf>,
}

fn default_temperature() -> f64 {
    1.0
}
fn default_max_output_tokens() -> u32 {
    2048
}
fn default_parallelism() -> usize {
    1
}
fn default_max_attempts() -> u32 {
    5
}
fn default_backoff_ms() -> u64 {
    500
}
fn default_timeout_secs() -> u64 {
    120
}
fn default_auth_token_env() -> String {
    "TEXTDRIFT_API_TOKEN".to_string()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegenSection {
    /// Checked before any I/O: a missing URL is a configuration error.
    pub endpoint_url: Option<String>,
    pub model_name: String,
    pub domain: Domain,
    pub input_articles: PathBuf,
    #[serde(default)]
    pub checkpoint_dir: Option<PathBuf>,
    #[serde(default = "default_temperature")]
    pub temperature: f64,
    #[serde(default = "default_max_output_tokens")]
    pub max_output_tokens: u32,
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
    /// Source words fed into the prompt; defaults to the domain mapping.
    #[serde(default)]
    pub word_budget: Option<usize>,
    #[serde(default)]
    pub wire: WireShape,
    #[serde(default = "default_max_attempts")]
    pub max_attempts: u32,
    #[serde(default = "default_backoff_ms")]
    pub initial_backoff_ms: u64,
    #[serde(default = "default_timeout_secs")]
    pub request_timeout_secs: u64,
    /// Environment variable holding the bearer token, read at run time.
    #[serde(default = "default_auth_token_env")]
    pub auth_token_env: String,
}

/// Configuration after file parsing, flag overrides, and path checks.
#[derive(Debug)]
pub struct ResolvedConfig {
    pub out_dir: PathBuf,
    pub corpora: Vec<CorpusEntry>,
    pub policy: CleaningPolicy,
    pub thresholds: SignatureThresholds,
    pub familiar_words: Option<PathBuf>,
    pub regen: Option<RegenSection>,
    pub threads: Option<usize>,
}

fn require_exists(path: &Path, what: &str) -> Result<(), CliError> {
    if !path.exists() {
        return Err(CliError::Config(format!(
            "{what} does not exist: {}",
            path.display()
        )));
    }
    Ok(())
}

pub fn load_and_resolve(args: &CommonArgs) -> Result<ResolvedConfig, CliError> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| {
        CliError::Config(format!("cannot read config {}: {e}", args.config.display()))
    })?;
    let file: FileConfig = toml::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", args.config.display())))?;

    let out_dir = args
        .out
        .clone()
        .or(file.out_dir)
        .ok_or_else(|| CliError::Config("no output directory: set out_dir or pass --out".into()))?;

    let mut policy = file.cleaning;
    if args.no_clean {
        policy.enabled = false;
    }
    if let Some(min) = args.min_words {
        policy.min_words = min;
    }
    if let Some(max) = args.max_words {
        policy.max_words = max;
    }
    policy.validate()?;

    let mut seen_cells = HashSet::new();
    for entry in &file.corpus {
        if !seen_cells.insert((entry.domain, entry.source)) {
            return Err(CliError::Config(format!(
                "duplicate corpus cell {}/{}",
                entry.domain, entry.source
            )));
        }
        require_exists(&entry.articles, &format!("corpus {} articles file", entry.tag()))?;
        if let Some(parses) = &entry.parses {
            require_exists(parses, &format!("corpus {} parse sidecar", entry.tag()))?;
        }
    }
    if let Some(path) = &file.readability.familiar_words {
        require_exists(path, "familiar word list")?;
    }

    std::fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", out_dir.display())))?;

    Ok(ResolvedConfig {
        out_dir,
        corpora: file.corpus,
        policy,
        thresholds: file.thresholds,
        familiar_words: file.readability.familiar_words,
        regen: file.regen,
        threads: args.threads,
    })
}
