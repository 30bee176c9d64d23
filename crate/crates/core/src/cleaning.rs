//! Sentence-level corpus cleaning, applied symmetrically to human and
//! regenerated corpora.
//!
//! Two rules run on parsed sentences: a length filter (strictly fewer than
//! `min_words` or strictly more than `max_words` words) and a part-of-speech
//! filter (no VERB or AUX token). A word is a syntactic token from the
//! dependency annotation, punctuation included. The whole stage can be
//! switched off for ablation runs; articles whose sentences are all removed
//! stay in the corpus with zero sentences so that article-scoped metrics can
//! apply their own exclusion rule.

use crate::corpus::{Article, SentenceRecord};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CleaningError {
    #[error("sentence flagged parse_failed has no word count")]
    ParseFailed,
    #[error("sentence has no tokens")]
    EmptySentence,
    #[error("invalid cleaning policy: need 1 <= min_words ({min}) <= max_words ({max})")]
    InvalidPolicy { min: usize, max: usize },
}

/// Filter thresholds and switches for one cleaning run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CleaningPolicy {
    pub min_words: usize,
    pub max_words: usize,
    pub require_verb_or_aux: bool,
    /// Applies downstream: article-level depth/Yngve aggregates of zero are
    /// dropped when set.
    pub drop_zero_scores: bool,
    /// Master switch; false means every sentence is kept (ablation).
    pub enabled: bool,
}

impl Default for CleaningPolicy {
    fn default() -> Self {
        CleaningPolicy {
            min_words: 3,
            max_words: 500,
            require_verb_or_aux: true,
            drop_zero_scores: true,
            enabled: true,
        }
    }
}

impl CleaningPolicy {
    pub fn validate(&self) -> Result<(), CleaningError> {
        if self.min_words < 1 || self.min_words > self.max_words {
            return Err(CleaningError::InvalidPolicy {
                min: self.min_words,
                max: self.max_words,
            });
        }
        Ok(())
    }
}

/// Why a sentence was removed. Each removed sentence gets exactly one reason;
/// the length filter runs first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RemovalReason {
    Length,
    Pos,
}

/// Counts for one cleaning run. Merging reports by field-wise addition is
/// associative and commutative, so per-article reports can be folded in any
/// order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleaningReport {
    pub sentences_in: u64,
    pub sentences_removed_length: u64,
    pub sentences_removed_pos: u64,
    pub articles_emptied: u64,
}

impl CleaningReport {
    pub fn merge(&mut self, other: &CleaningReport) {
        self.sentences_in += other.sentences_in;
        self.sentences_removed_length += other.sentences_removed_length;
        self.sentences_removed_pos += other.sentences_removed_pos;
        self.articles_emptied += other.articles_emptied;
    }

    pub fn sentences_kept(&self) -> u64 {
        self.sentences_in - self.sentences_removed_length - self.sentences_removed_pos
    }
}

/// Number of syntactic words in a sentence.
pub fn sentence_word_count(sentence: &SentenceRecord) -> Result<usize, CleaningError> {
    if sentence.parse_failed {
        return Err(CleaningError::ParseFailed);
    }
    if sentence.tokens.is_empty() {
        return Err(CleaningError::EmptySentence);
    }
    Ok(sentence.tokens.len())
}

/// Decide whether a sentence survives cleaning. `None` means keep.
///
/// Boundary sentences of exactly `min_words` and exactly `max_words` words
/// are kept; the length comparisons are strict.
pub fn keep_sentence(
    sentence: &SentenceRecord,
    policy: &CleaningPolicy,
) -> Result<Option<RemovalReason>, CleaningError> {
    if !policy.enabled {
        return Ok(None);
    }
    let words = sentence_word_count(sentence)?;
    if words < policy.min_words || words > policy.max_words {
        return Ok(Some(RemovalReason::Length));
    }
    if policy.require_verb_or_aux
        && !sentence
            .tokens
            .iter()
            .any(|t| t.upos == "VERB" || t.upos == "AUX")
    {
        return Ok(Some(RemovalReason::Pos));
    }
    Ok(None)
}

/// Clean one article in place. Sentences flagged `parse_failed` pass through
/// untouched; the article-exclusion rule downstream handles them.
pub fn clean_article(
    mut article: Article,
    policy: &CleaningPolicy,
) -> Result<(Article, CleaningReport), CleaningError> {
    let mut report = CleaningReport::default();
    let had_sentences = !article.sentences.is_empty();
    let mut kept = Vec::with_capacity(article.sentences.len());
    for sentence in article.sentences.drain(..) {
        report.sentences_in += 1;
        if sentence.parse_failed {
            kept.push(sentence);
            continue;
        }
        match keep_sentence(&sentence, policy)? {
            None => kept.push(sentence),
            Some(RemovalReason::Length) => report.sentences_removed_length += 1,
            Some(RemovalReason::Pos) => report.sentences_removed_pos += 1,
        }
    }
    if had_sentences && kept.is_empty() {
        report.articles_emptied += 1;
    }
    article.sentences = kept;
    Ok((article, report))
}

/// Clean a corpus, keeping emptied articles (flagged in the report).
pub fn clean_corpus(
    articles: Vec<Article>,
    policy: &CleaningPolicy,
) -> Result<(Vec<Article>, CleaningReport), CleaningError> {
    policy.validate()?;
    let mut report = CleaningReport::default();
    let mut out = Vec::with_capacity(articles.len());
    for article in articles {
        let (article, article_report) = clean_article(article, policy)?;
        report.merge(&article_report);
        out.push(article);
    }
    Ok((out, report))
}
