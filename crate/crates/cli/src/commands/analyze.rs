//! The analyze stage: readability over raw text, cleaning, per-sentence
//! syntactic metrics, and article-level aggregation, with all per-corpus
//! outputs written under the output directory.
//!
//! Per corpus tag `<domain>_<source>` the stage writes:
//! `readability_<tag>.csv`, `samples_<tag>.csv`, `samples_<tag>.jsonl`,
//! `cleaned_<tag>.jsonl`, `cleaned_<tag>.parses.jsonl`,
//! `manifest_<tag>.json`, and a shared `run_log.txt` that reconciles every
//! article.

use crate::config::{CorpusEntry, ResolvedConfig};
use crate::util::{created_at, with_pool, RunLog};
use crate::CliError;
use rayon::prelude::*;
use std::fs::File;
use textdrift_core::cleaning::{clean_article, CleaningReport};
use textdrift_core::corpus::{self, Article, CorpusManifest};
use textdrift_core::readability::{
    score_article, FamiliarWordList, ReadabilityRow, ReadabilityScores,
};
use textdrift_core::syntax::{
    article_aggregate, sentence_metric, write_samples_csv, write_samples_jsonl, AggregateOutcome,
    ExclusionReason, MetricError, MetricKind, MetricSample,
};

struct ArticleAnalysis {
    article: Article,
    readability: Option<ReadabilityScores>,
    cleaning: CleaningReport,
    samples: Vec<MetricSample>,
    log_line: String,
}

fn exclusion_label(reason: ExclusionReason) -> &'static str {
    match reason {
        ExclusionReason::SentenceFailure => "sentence_failure",
        ExclusionReason::ZeroScore => "zero_score",
        ExclusionReason::NoSamples => "no_samples",
    }
}

fn analyze_article(
    article: Article,
    entry: &CorpusEntry,
    cfg: &ResolvedConfig,
    familiar: &FamiliarWordList,
) -> Result<ArticleAnalysis, CliError> {
    // Readability runs on the raw text, before cleaning touches anything.
    let readability = score_article(&article, familiar)?;
    let (article, cleaning) = clean_article(article, &cfg.policy)?;

    let mut samples = Vec::new();
    if let Some(scores) = &readability {
        samples.push(MetricSample {
            metric: MetricKind::FkGrade,
            value: scores.fk_grade,
            article_id: article.id.clone(),
            sentence_index: None,
            domain: entry.domain,
            source: entry.source,
        });
    }

    let mut parse_failure = false;
    let mut tree_failure = false;
    let mut sentence_samples = Vec::new();
    for sentence in &article.sentences {
        if sentence.parse_failed {
            parse_failure = true;
            continue;
        }
        for metric in MetricKind::SENTENCE_METRICS {
            match sentence_metric(sentence, metric) {
                Ok(value) => sentence_samples.push(MetricSample {
                    metric,
                    value,
                    article_id: article.id.clone(),
                    sentence_index: Some(sentence.index),
                    domain: entry.domain,
                    source: entry.source,
                }),
                Err(MetricError::MissingTree) | Err(MetricError::TooDeep { .. }) => {
                    tree_failure = true;
                }
                Err(other) => return Err(other.into()),
            }
        }
    }

    let mut aggregate_status = Vec::new();
    let mut aggregates = Vec::new();
    for metric in MetricKind::SENTENCE_METRICS
        .into_iter()
        .filter(|m| m.aggregates_per_article())
    {
        let per_metric: Vec<MetricSample> = sentence_samples
            .iter()
            .filter(|s| s.metric == metric)
            .cloned()
            .collect();
        let failed = parse_failure || tree_failure;
        match article_aggregate(&per_metric, metric, failed, cfg.policy.drop_zero_scores)? {
            AggregateOutcome::Aggregated(sample) => {
                aggregate_status.push(format!("{metric}=aggregated"));
                aggregates.push(sample);
            }
            AggregateOutcome::Excluded(reason) => {
                aggregate_status.push(format!("{metric}=excluded({})", exclusion_label(reason)));
            }
        }
    }
    samples.extend(sentence_samples);
    samples.extend(aggregates);

    let log_line = format!(
        "article {}: readability={} sentences_kept={} {}",
        article.id,
        if readability.is_some() {
            "scored"
        } else {
            "skipped(short_or_empty)"
        },
        article.sentences.len(),
        aggregate_status.join(" "),
    );

    Ok(ArticleAnalysis {
        article,
        readability,
        cleaning,
        samples,
        log_line,
    })
}

fn analyze_corpus(
    entry: &CorpusEntry,
    cfg: &ResolvedConfig,
    familiar: &FamiliarWordList,
    log: &mut RunLog,
) -> Result<(), CliError> {
    let tag = entry.tag();
    let Some(parses) = &entry.parses else {
        return Err(CliError::Data(format!(
            "corpus {tag}: no parse sidecar configured; syntactic metrics need one"
        )));
    };
    let articles = corpus::load_corpus(&entry.articles, parses, entry.domain)?;

    let results: Result<Vec<ArticleAnalysis>, CliError> = with_pool(cfg.threads, || {
        articles
            .into_par_iter()
            .map(|article| analyze_article(article, entry, cfg, familiar))
            .collect()
    });
    let results = results?;

    let mut report = CleaningReport::default();
    let mut readability_rows = Vec::new();
    let mut samples = Vec::new();
    let mut cleaned_articles = Vec::with_capacity(results.len());
    let mut article_lines = Vec::with_capacity(results.len());
    let mut scored = 0usize;
    let mut skipped = 0usize;
    for result in results {
        report.merge(&result.cleaning);
        if let Some(scores) = result.readability {
            scored += 1;
            readability_rows.push(ReadabilityRow {
                article_id: result.article.id.clone(),
                domain: entry.domain,
                source: entry.source,
                fk_grade: scores.fk_grade,
                fk_ease: scores.fk_ease,
                gunning_fog: scores.gunning_fog,
                linsear_write: scores.linsear_write,
                spache: scores.spache,
                words: scores.words,
                sentences: scores.sentences,
                syllables: scores.syllables,
            });
        } else {
            skipped += 1;
        }
        samples.extend(result.samples);
        article_lines.push(result.log_line);
        cleaned_articles.push(result.article);
    }

    let out = &cfg.out_dir;
    textdrift_core::readability::write_scores_csv(
        File::create(out.join(format!("readability_{tag}.csv")))?,
        &readability_rows,
    )?;
    write_samples_csv(File::create(out.join(format!("samples_{tag}.csv")))?, &samples)?;
    write_samples_jsonl(File::create(out.join(format!("samples_{tag}.jsonl")))?, &samples)?;
    corpus::write_articles(&out.join(format!("cleaned_{tag}.jsonl")), &cleaned_articles)?;
    corpus::write_parse_sidecar(
        &out.join(format!("cleaned_{tag}.parses.jsonl")),
        &cleaned_articles,
    )?;
    CorpusManifest {
        corpus_id: tag.clone(),
        domain: entry.domain,
        source: entry.source,
        article_count: cleaned_articles.len(),
        created_at: created_at(),
        cleaning_applied: cfg.policy.enabled,
    }
    .write(&out.join(format!("manifest_{tag}.json")))?;

    log.push(format!(
        "analyze {tag}: articles={} sentences_in={} kept={} removed_length={} removed_pos={} articles_emptied={} readability_scored={scored} readability_skipped={skipped} samples={}",
        cleaned_articles.len(),
        report.sentences_in,
        report.sentences_kept(),
        report.sentences_removed_length,
        report.sentences_removed_pos,
        report.articles_emptied,
        samples.len(),
    ));
    for line in article_lines {
        log.push(format!("analyze {tag}: {line}"));
    }
    Ok(())
}

pub fn cmd_analyze(cfg: &ResolvedConfig) -> Result<(), CliError> {
    if cfg.corpora.is_empty() {
        return Err(CliError::Config("no [[corpus]] entries configured".into()));
    }
    let familiar_path = cfg.familiar_words.as_ref().ok_or_else(|| {
        CliError::Config("analyze needs a familiar word list: set [readability] familiar_words".into())
    })?;
    let familiar = FamiliarWordList::load(familiar_path)?;
    if familiar.is_empty() {
        return Err(CliError::Config(format!(
            "familiar word list {} is empty",
            familiar_path.display()
        )));
    }

    let mut log = RunLog::new();
    for entry in &cfg.corpora {
        analyze_corpus(entry, cfg, &familiar, &mut log)?;
    }
    log.write_to(&cfg.out_dir.join("run_log.txt"))?;
    Ok(())
}
