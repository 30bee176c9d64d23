//! The regenerate stage: feed a human corpus through the endpoint and write
//! the model-regenerated corpus plus manifest.

use crate::config::ResolvedConfig;
use crate::util::{created_at, RunLog};
use crate::CliError;
use std::collections::HashMap;
use textdrift_core::corpus::{read_articles, write_articles, Article, CorpusManifest, Source};
use textdrift_regen::{regenerate_corpus, RegenConfig, RegenStatus};

pub fn cmd_regenerate(cfg: &ResolvedConfig) -> Result<(), CliError> {
    let section = cfg
        .regen
        .as_ref()
        .ok_or_else(|| CliError::Config("no [regen] section in the config".into()))?;
    // Before any I/O: a missing endpoint is a configuration error.
    let endpoint_url = section
        .endpoint_url
        .as_deref()
        .filter(|u| !u.trim().is_empty())
        .ok_or_else(|| CliError::Config("regen endpoint_url is not set".into()))?;

    let mut regen_config = RegenConfig::new(endpoint_url, &section.model_name, section.domain);
    regen_config.temperature = section.temperature;
    regen_config.max_output_tokens = section.max_output_tokens;
    regen_config.parallelism = section.parallelism;
    if let Some(budget) = section.word_budget {
        regen_config.word_budget = budget;
    }
    regen_config.wire = section.wire;
    regen_config.max_attempts = section.max_attempts;
    regen_config.initial_backoff_ms = section.initial_backoff_ms;
    regen_config.request_timeout_secs = section.request_timeout_secs;
    regen_config.auth_token = std::env::var(&section.auth_token_env).ok();
    regen_config.validate()?;

    if !section.input_articles.exists() {
        return Err(CliError::Config(format!(
            "regen input_articles does not exist: {}",
            section.input_articles.display()
        )));
    }
    let articles = read_articles(&section.input_articles, section.domain)?;
    let checkpoint_dir = section
        .checkpoint_dir
        .clone()
        .unwrap_or_else(|| cfg.out_dir.join(format!("checkpoint_{}", section.domain)));

    let (records, report) = regenerate_corpus(&articles, &regen_config, &checkpoint_dir)?;

    let titles: HashMap<&str, Option<String>> = articles
        .iter()
        .map(|a| (a.id.as_str(), a.title.clone()))
        .collect();
    let model_articles: Vec<Article> = records
        .iter()
        .filter(|r| r.status == RegenStatus::Ok)
        .map(|r| Article {
            id: r.article_id.clone(),
            domain: section.domain,
            source: Source::Model,
            model_name: Some(section.model_name.clone()),
            title: titles.get(r.article_id.as_str()).cloned().flatten(),
            text: r.completion.clone(),
            sentences: vec![],
        })
        .collect();

    let corpus_path = cfg
        .out_dir
        .join(format!("regenerated_{}.jsonl", section.domain));
    write_articles(&corpus_path, &model_articles)?;
    CorpusManifest {
        corpus_id: format!("{}_{}", section.domain, section.model_name),
        domain: section.domain,
        source: Source::Model,
        article_count: model_articles.len(),
        created_at: created_at(),
        cleaning_applied: false,
    }
    .write(&cfg.out_dir.join(format!("manifest_regenerated_{}.json", section.domain)))?;

    let mut log = RunLog::new();
    log.push(format!(
        "regenerate {}: requested={} resumed={} generated={} skipped={} failed={} corpus_articles={}",
        section.domain,
        report.requested,
        report.resumed,
        report.generated,
        report.skipped,
        report.failed,
        model_articles.len(),
    ));
    for record in &records {
        if record.status != RegenStatus::Ok {
            log.push(format!(
                "regenerate {}: article {}: {:?} ({})",
                section.domain,
                record.article_id,
                record.status,
                record.error.as_deref().unwrap_or(""),
            ));
        }
    }
    log.append_to(&cfg.out_dir.join("run_log.txt"))?;
    println!(
        "regenerated {}: {} articles written ({} skipped, {} failed, {} resumed)",
        section.domain,
        model_articles.len(),
        report.skipped,
        report.failed,
        report.resumed
    );

    // Every attempted request failing is an endpoint problem, not a data one.
    let attempted = report.requested - report.resumed - report.skipped;
    if attempted > 0 && report.failed == attempted {
        return Err(CliError::Endpoint(format!(
            "all {attempted} requests failed; see {}",
            cfg.out_dir.join("run_log.txt").display()
        )));
    }
    Ok(())
}
