//! Per-sentence syntactic complexity metrics and article-level aggregation.
//!
//! Five per-sentence measurements: unique dependency relation count,
//! constituency parse depth, Yngve score, unique constituency label count,
//! and sentence length. Tree traversals are iterative with an explicit
//! stack, and trees deeper than [`MAX_TREE_DEPTH`] are rejected with a
//! metric-failure signal that feeds the article-exclusion rule.

use crate::cleaning::{self, CleaningError};
use crate::corpus::{ConstTree, Domain, SentenceRecord, Source};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use thiserror::Error;

/// Traversal guard for pathological parses.
pub const MAX_TREE_DEPTH: usize = 10_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricError {
    #[error("sentence flagged parse_failed")]
    ParseFailed,
    #[error("sentence has no tokens")]
    EmptySentence,
    #[error("sentence has no constituency tree")]
    MissingTree,
    #[error("tree exceeds maximum depth {max}")]
    TooDeep { max: usize },
    #[error("tree has no leaves")]
    NoLeaves,
    #[error("metric is not computed per sentence")]
    NotPerSentence,
    #[error("aggregate samples must share one article and metric")]
    MixedAggregate,
}

impl From<CleaningError> for MetricError {
    fn from(e: CleaningError) -> Self {
        match e {
            CleaningError::ParseFailed => MetricError::ParseFailed,
            _ => MetricError::EmptySentence,
        }
    }
}

/// Identifier for every measured quantity that flows into distributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    FkGrade,
    DepTags,
    Depth,
    Yngve,
    ConstLabels,
    SentLength,
}

impl MetricKind {
    pub const ALL: [MetricKind; 6] = [
        MetricKind::FkGrade,
        MetricKind::DepTags,
        MetricKind::Depth,
        MetricKind::Yngve,
        MetricKind::ConstLabels,
        MetricKind::SentLength,
    ];

    /// The five per-sentence syntactic metrics, in emission order.
    pub const SENTENCE_METRICS: [MetricKind; 5] = [
        MetricKind::DepTags,
        MetricKind::Depth,
        MetricKind::Yngve,
        MetricKind::ConstLabels,
        MetricKind::SentLength,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MetricKind::FkGrade => "fk_grade",
            MetricKind::DepTags => "dep_tags",
            MetricKind::Depth => "depth",
            MetricKind::Yngve => "yngve",
            MetricKind::ConstLabels => "const_labels",
            MetricKind::SentLength => "sent_length",
        }
    }

    /// Human-readable row label for the signature grid.
    pub fn grid_label(self) -> &'static str {
        match self {
            MetricKind::FkGrade => "Flesch-Kincaid",
            MetricKind::DepTags => "Dependency",
            MetricKind::Depth => "Depth",
            MetricKind::Yngve => "Yngve",
            MetricKind::ConstLabels => "Constituency",
            MetricKind::SentLength => "Sentence Length",
        }
    }

    /// The scope at which this metric's distribution is compared.
    ///
    /// Readability is an article-level score, and depth and Yngve
    /// distributions compare per-article means; the remaining metrics
    /// compare per-sentence values.
    pub fn canonical_scope(self) -> Scope {
        match self {
            MetricKind::FkGrade | MetricKind::Depth | MetricKind::Yngve => Scope::Article,
            MetricKind::DepTags | MetricKind::ConstLabels | MetricKind::SentLength => {
                Scope::Sentence
            }
        }
    }

    /// Whether article-level means are emitted for this metric.
    pub fn aggregates_per_article(self) -> bool {
        matches!(self, MetricKind::Depth | MetricKind::Yngve)
    }
}

impl std::fmt::Display for MetricKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MetricKind::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown metric '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    Sentence,
    Article,
}

/// One scalar measurement. `sentence_index` is `None` for article-scope
/// samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSample {
    pub metric: MetricKind,
    pub value: f64,
    pub article_id: String,
    pub sentence_index: Option<usize>,
    pub domain: Domain,
    pub source: Source,
}

impl MetricSample {
    pub fn scope(&self) -> Scope {
        if self.sentence_index.is_some() {
            Scope::Sentence
        } else {
            Scope::Article
        }
    }
}

/// Cardinality of the dependency relation set, root relation included.
pub fn unique_dep_tags(sentence: &SentenceRecord) -> Result<usize, MetricError> {
    if sentence.parse_failed {
        return Err(MetricError::ParseFailed);
    }
    if sentence.tokens.is_empty() {
        return Err(MetricError::EmptySentence);
    }
    let set: HashSet<&str> = sentence.tokens.iter().map(|t| t.deprel.as_str()).collect();
    Ok(set.len())
}

/// Number of edges on the longest root-to-leaf path; leaves count as nodes.
pub fn parse_depth(tree: &ConstTree) -> Result<usize, MetricError> {
    let mut max_depth = 0;
    let mut stack = vec![(tree, 0usize)];
    while let Some((node, depth)) = stack.pop() {
        if depth > MAX_TREE_DEPTH {
            return Err(MetricError::TooDeep {
                max: MAX_TREE_DEPTH,
            });
        }
        match node {
            ConstTree::Leaf { .. } => max_depth = max_depth.max(depth),
            ConstTree::Node { children, .. } => {
                for child in children {
                    stack.push((child, depth + 1));
                }
            }
        }
    }
    Ok(max_depth)
}

/// Which reading of "left branching" the Yngve traversal uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YngveMode {
    /// Classic formulation: each node on the root-to-leaf path contributes
    /// its number of right siblings.
    #[default]
    RightSiblings,
    /// Sensitivity variant: each node contributes 1 when it has any right
    /// sibling, i.e. count left-branch edges. Differs from the classic
    /// formulation on nodes with three or more children.
    LeftBranchEdges,
}

/// Yngve score under the classic right-sibling formulation.
pub fn yngve_score(tree: &ConstTree) -> Result<f64, MetricError> {
    yngve_score_with(tree, YngveMode::RightSiblings)
}

/// Yngve score: per leaf, sum over every node on the root-to-leaf path
/// (root excluded) of that node's contribution; the sentence score is the
/// mean over leaves.
pub fn yngve_score_with(tree: &ConstTree, mode: YngveMode) -> Result<f64, MetricError> {
    let mut total = 0.0;
    let mut leaves = 0u64;
    let mut stack = vec![(tree, 0.0f64, 0usize)];
    while let Some((node, load, depth)) = stack.pop() {
        if depth > MAX_TREE_DEPTH {
            return Err(MetricError::TooDeep {
                max: MAX_TREE_DEPTH,
            });
        }
        match node {
            ConstTree::Leaf { .. } => {
                total += load;
                leaves += 1;
            }
            ConstTree::Node { children, .. } => {
                for (i, child) in children.iter().enumerate() {
                    let right_siblings = children.len() - 1 - i;
                    let contribution = match mode {
                        YngveMode::RightSiblings => right_siblings as f64,
                        YngveMode::LeftBranchEdges => (right_siblings > 0) as u8 as f64,
                    };
                    stack.push((child, load + contribution, depth + 1));
                }
            }
        }
    }
    if leaves == 0 {
        return Err(MetricError::NoLeaves);
    }
    Ok(total / leaves as f64)
}

/// Cardinality of the label set over non-leaf nodes, preterminals included.
pub fn unique_const_labels(tree: &ConstTree) -> Result<usize, MetricError> {
    let mut labels: HashSet<&str> = HashSet::new();
    let mut stack = vec![tree];
    while let Some(node) = stack.pop() {
        if let ConstTree::Node { label, children } = node {
            labels.insert(label.as_str());
            stack.extend(children.iter());
        }
    }
    Ok(labels.len())
}

/// Sentence length in syntactic words; shares the cleaning module's word
/// definition.
pub fn sentence_length(sentence: &SentenceRecord) -> Result<usize, MetricError> {
    Ok(cleaning::sentence_word_count(sentence)?)
}

/// Compute one per-sentence metric value.
pub fn sentence_metric(sentence: &SentenceRecord, metric: MetricKind) -> Result<f64, MetricError> {
    if sentence.parse_failed {
        return Err(MetricError::ParseFailed);
    }
    let tree = || sentence.tree.as_ref().ok_or(MetricError::MissingTree);
    let value = match metric {
        MetricKind::DepTags => unique_dep_tags(sentence)? as f64,
        MetricKind::Depth => parse_depth(tree()?)? as f64,
        MetricKind::Yngve => yngve_score(tree()?)?,
        MetricKind::ConstLabels => unique_const_labels(tree()?)? as f64,
        MetricKind::SentLength => sentence_length(sentence)? as f64,
        MetricKind::FkGrade => return Err(MetricError::NotPerSentence),
    };
    Ok(value)
}

/// Why an article produced no aggregate sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclusionReason {
    /// Some sentence of the article failed parsing or metric computation.
    SentenceFailure,
    /// The aggregate was zero for a metric where zeros are dropped.
    ZeroScore,
    /// No per-sentence samples remained for this article.
    NoSamples,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AggregateOutcome {
    Aggregated(MetricSample),
    Excluded(ExclusionReason),
}

/// Mean the per-sentence samples of one article into an article-scope
/// sample, or exclude the article.
///
/// The caller reports through `any_sentence_failed` whether any sentence of
/// the article failed parsing or metric computation; a single failure
/// excludes the whole article. Zero-valued depth/Yngve aggregates are
/// dropped when `drop_zero_scores` is set.
pub fn article_aggregate(
    samples: &[MetricSample],
    metric: MetricKind,
    any_sentence_failed: bool,
    drop_zero_scores: bool,
) -> Result<AggregateOutcome, MetricError> {
    if samples
        .iter()
        .any(|s| s.metric != metric || s.article_id != samples[0].article_id)
    {
        return Err(MetricError::MixedAggregate);
    }
    if any_sentence_failed {
        return Ok(AggregateOutcome::Excluded(ExclusionReason::SentenceFailure));
    }
    let Some(first) = samples.first() else {
        return Ok(AggregateOutcome::Excluded(ExclusionReason::NoSamples));
    };
    let mean = samples.iter().map(|s| s.value).sum::<f64>() / samples.len() as f64;
    if drop_zero_scores && metric.aggregates_per_article() && mean == 0.0 {
        return Ok(AggregateOutcome::Excluded(ExclusionReason::ZeroScore));
    }
    Ok(AggregateOutcome::Aggregated(MetricSample {
        metric,
        value: mean,
        article_id: first.article_id.clone(),
        sentence_index: None,
        domain: first.domain,
        source: first.source,
    }))
}

#[derive(Debug, Error)]
pub enum SampleIoError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("{path} row {row}: {msg}")]
    Malformed {
        path: String,
        row: usize,
        msg: String,
    },
}

#[derive(Debug, Serialize, Deserialize)]
struct SampleRow {
    metric: MetricKind,
    scope: Scope,
    article_id: String,
    sentence_index: Option<usize>,
    value: f64,
    domain: Domain,
    source: Source,
}

impl From<&MetricSample> for SampleRow {
    fn from(s: &MetricSample) -> Self {
        SampleRow {
            metric: s.metric,
            scope: s.scope(),
            article_id: s.article_id.clone(),
            sentence_index: s.sentence_index,
            value: s.value,
            domain: s.domain,
            source: s.source,
        }
    }
}

/// Write samples as CSV with columns metric, scope, article_id,
/// sentence_index, value, domain, source.
pub fn write_samples_csv<W: Write>(writer: W, samples: &[MetricSample]) -> Result<(), SampleIoError> {
    let mut w = csv::Writer::from_writer(writer);
    for sample in samples {
        w.serialize(SampleRow::from(sample))?;
    }
    w.flush()?;
    Ok(())
}

/// Write samples as JSON-Lines, one object per sample.
pub fn write_samples_jsonl<W: Write>(
    mut writer: W,
    samples: &[MetricSample],
) -> Result<(), SampleIoError> {
    for sample in samples {
        let row = SampleRow::from(sample);
        let line = serde_json::to_string(&row)
            .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?;
        writer.write_all(line.as_bytes())?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

fn sample_from_row(row: SampleRow, path: &Path, line: usize) -> Result<MetricSample, SampleIoError> {
    let expected = if row.sentence_index.is_some() {
        Scope::Sentence
    } else {
        Scope::Article
    };
    if row.scope != expected {
        return Err(SampleIoError::Malformed {
            path: path.display().to_string(),
            row: line,
            msg: "scope column disagrees with sentence_index".to_string(),
        });
    }
    Ok(MetricSample {
        metric: row.metric,
        value: row.value,
        article_id: row.article_id,
        sentence_index: row.sentence_index,
        domain: row.domain,
        source: row.source,
    })
}

/// Read a sample CSV back, checking scope consistency per row.
pub fn read_samples_csv(path: &Path) -> Result<Vec<MetricSample>, SampleIoError> {
    let mut reader = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for (i, row) in reader.deserialize::<SampleRow>().enumerate() {
        out.push(sample_from_row(row?, path, i + 2)?);
    }
    Ok(out)
}

/// Read the JSON-Lines equivalent of the sample file.
pub fn read_samples_jsonl(path: &Path) -> Result<Vec<MetricSample>, SampleIoError> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: SampleRow =
            serde_json::from_str(line).map_err(|e| SampleIoError::Malformed {
                path: path.display().to_string(),
                row: i + 1,
                msg: e.to_string(),
            })?;
        out.push(sample_from_row(row, path, i + 1)?);
    }
    Ok(out)
}
