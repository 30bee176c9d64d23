//! Standalone descriptive statistics over cleaned corpora.

use crate::config::ResolvedConfig;
use crate::util::RunLog;
use crate::CliError;
use std::fs::File;
use textdrift_core::cleaning::clean_corpus;
use textdrift_core::corpus::load_corpus;
use textdrift_core::distribution::{
    descriptive_stats, round1, write_descriptive_csv, DistributionError,
};

pub fn cmd_stats(cfg: &ResolvedConfig) -> Result<(), CliError> {
    if cfg.corpora.is_empty() {
        return Err(CliError::Config("no [[corpus]] entries configured".into()));
    }
    let mut log = RunLog::new();
    let mut rows = Vec::new();
    for entry in &cfg.corpora {
        let tag = entry.tag();
        let Some(parses) = &entry.parses else {
            return Err(CliError::Data(format!(
                "corpus {tag}: no parse sidecar configured; word counts need one"
            )));
        };
        let articles = load_corpus(&entry.articles, parses, entry.domain)?;
        let (cleaned, report) = clean_corpus(articles, &cfg.policy)?;
        match descriptive_stats(&cleaned) {
            Ok(stats) => {
                log.push(format!(
                    "stats {tag}: articles={} sentences={} words={} removed_length={} removed_pos={}",
                    stats.articles,
                    stats.sentences,
                    stats.words,
                    report.sentences_removed_length,
                    report.sentences_removed_pos,
                ));
                rows.push((tag, stats));
            }
            Err(DistributionError::EmptyCorpus) => {
                log.push(format!("stats {tag}: no eligible sentences; skipped"));
            }
            Err(e) => return Err(e.into()),
        }
    }

    write_descriptive_csv(
        File::create(cfg.out_dir.join("descriptive_stats.csv"))?,
        &rows,
    )?;
    log.append_to(&cfg.out_dir.join("run_log.txt"))?;

    println!(
        "{:<24}{:>10}{:>12}{:>14}{:>8}{:>8}{:>10}",
        "Corpus", "Articles", "Sentences", "Words", "S/A", "W/S", "W/A"
    );
    for (tag, stats) in &rows {
        println!(
            "{:<24}{:>10}{:>12}{:>14}{:>8.1}{:>8.1}{:>10.1}",
            tag,
            stats.articles,
            stats.sentences,
            stats.words,
            round1(stats.sentences_per_article),
            round1(stats.words_per_sentence),
            round1(stats.words_per_article),
        );
    }
    Ok(())
}
