//! Corpus data model and the three interchange formats.
//!
//! Data enters the pipeline through three kinds of files:
//!
//! * an **article store**: JSON-Lines, one object per article with fields
//!   `id`, `domain`, `source`, `model_name?`, `title?`, `text`;
//! * a **parse sidecar**: JSON-Lines, one object per sentence with fields
//!   `article_id`, `sentence_index`, `conllu`, `tree`, `parse_failed`, where
//!   `conllu` is a 10-column dependency block and `tree` a bracketed
//!   constituency tree;
//! * a **manifest**: a single JSON document describing one corpus file.
//!
//! All readers are pure per record and report the offending line on failure.

mod conllu;
mod tree;

pub use conllu::read_dependency_block;
pub use tree::{read_bracketed_tree, ConstTree};

use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: malformed article record: {source}")]
    MalformedArticle {
        line: usize,
        source: serde_json::Error,
    },
    #[error("line {line}: article '{id}': {msg}")]
    InvalidArticle { line: usize, id: String, msg: String },
    #[error("line {line}: domain mismatch: expected {expected}, found {found}")]
    DomainMismatch {
        line: usize,
        expected: Domain,
        found: Domain,
    },
    #[error("line {line}: duplicate article id '{id}'")]
    DuplicateArticleId { line: usize, id: String },
    #[error("dependency block line {line}: {msg}")]
    Dep { line: usize, msg: String },
    #[error("bracketed tree offset {offset}: {msg}")]
    Tree { offset: usize, msg: String },
    #[error("article '{article_id}' sentence {sentence_index}: tree has {leaves} leaves but the dependency block has {tokens} tokens")]
    TokenTreeMismatch {
        article_id: String,
        sentence_index: usize,
        leaves: usize,
        tokens: usize,
    },
    #[error("article '{article_id}' sentence {sentence_index}: {source}")]
    SentenceParse {
        article_id: String,
        sentence_index: usize,
        #[source]
        source: Box<CorpusError>,
    },
    #[error("line {line}: malformed parse record: {source}")]
    MalformedParse {
        line: usize,
        source: serde_json::Error,
    },
    #[error("line {line}: parse record for unknown article '{article_id}'")]
    UnknownArticle { line: usize, article_id: String },
    #[error("article '{article_id}': duplicate sentence index {sentence_index}")]
    DuplicateSentence {
        article_id: String,
        sentence_index: usize,
    },
    #[error("manifest: {0}")]
    Manifest(String),
    #[error("unknown value '{0}'")]
    UnknownValue(String),
}

/// One of the text domains a corpus can belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Wikipedia,
    Ccnews,
    Eli5,
}

impl Domain {
    pub const ALL: [Domain; 3] = [Domain::Wikipedia, Domain::Ccnews, Domain::Eli5];

    pub fn as_str(self) -> &'static str {
        match self {
            Domain::Wikipedia => "wikipedia",
            Domain::Ccnews => "ccnews",
            Domain::Eli5 => "eli5",
        }
    }

    /// Short label used in the rendered signature grid.
    pub fn grid_label(self) -> &'static str {
        match self {
            Domain::Wikipedia => "wiki",
            Domain::Ccnews => "news",
            Domain::Eli5 => "ELI5",
        }
    }

    /// Row order of the rendered grid: news, wiki, ELI5.
    pub fn grid_rank(self) -> usize {
        match self {
            Domain::Ccnews => 0,
            Domain::Wikipedia => 1,
            Domain::Eli5 => 2,
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Domain {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "wikipedia" => Ok(Domain::Wikipedia),
            "ccnews" => Ok(Domain::Ccnews),
            "eli5" => Ok(Domain::Eli5),
            other => Err(CorpusError::UnknownValue(other.to_string())),
        }
    }
}

/// Whether a corpus was written by people or regenerated by a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Human,
    Model,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Human => "human",
            Source::Model => "model",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Source {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "human" => Ok(Source::Human),
            "model" => Ok(Source::Model),
            other => Err(CorpusError::UnknownValue(other.to_string())),
        }
    }
}

/// Where a dependency token attaches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Head {
    /// The artificial root; exactly one token per sentence carries it.
    Root,
    /// 0-based index of the governing token within the same sentence.
    Index(usize),
}

/// One token of a dependency parse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepToken {
    pub form: String,
    pub upos: String,
    pub deprel: String,
    pub head: Head,
}

/// One parsed sentence: dependency tokens plus an optional constituency tree.
///
/// `tree` is absent when constituency parsing failed while the dependency
/// parse succeeded; `parse_failed` marks sentences the parser could not
/// process at all.
#[derive(Debug, Clone, PartialEq)]
pub struct SentenceRecord {
    pub index: usize,
    pub tokens: Vec<DepToken>,
    pub tree: Option<ConstTree>,
    pub parse_failed: bool,
}

/// A unit of domain text with provenance and per-sentence parses.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Article {
    pub id: String,
    pub domain: Domain,
    pub source: Source,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    pub text: String,
    /// Populated from the parse sidecar; empty before parsing.
    #[serde(skip)]
    pub sentences: Vec<SentenceRecord>,
}

impl Article {
    fn validate(&self, line: usize) -> Result<(), CorpusError> {
        if self.id.is_empty() {
            return Err(CorpusError::InvalidArticle {
                line,
                id: String::new(),
                msg: "empty id".to_string(),
            });
        }
        if self.source == Source::Model && self.model_name.as_deref().unwrap_or("").is_empty() {
            return Err(CorpusError::InvalidArticle {
                line,
                id: self.id.clone(),
                msg: "source is 'model' but model_name is missing or empty".to_string(),
            });
        }
        Ok(())
    }
}

/// Streaming reader over a JSON-Lines article store.
///
/// Yields articles in file order and validates each record: the domain must
/// match `expected_domain`, ids must be non-empty and unique within the file,
/// and model articles must carry a model name.
pub struct ArticleReader<R: Read> {
    lines: std::io::Lines<BufReader<R>>,
    expected_domain: Domain,
    line: usize,
    seen_ids: HashSet<String>,
}

impl ArticleReader<File> {
    pub fn open(path: &Path, expected_domain: Domain) -> Result<Self, CorpusError> {
        Ok(Self::new(File::open(path)?, expected_domain))
    }
}

impl<R: Read> ArticleReader<R> {
    pub fn new(reader: R, expected_domain: Domain) -> Self {
        ArticleReader {
            lines: BufReader::new(reader).lines(),
            expected_domain,
            line: 0,
            seen_ids: HashSet::new(),
        }
    }
}

impl<R: Read> Iterator for ArticleReader<R> {
    type Item = Result<Article, CorpusError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let raw = match self.lines.next()? {
                Ok(raw) => raw,
                Err(e) => return Some(Err(e.into())),
            };
            self.line += 1;
            if raw.trim().is_empty() {
                continue;
            }
            let line = self.line;
            let article: Article = match serde_json::from_str(&raw) {
                Ok(a) => a,
                Err(source) => return Some(Err(CorpusError::MalformedArticle { line, source })),
            };
            if let Err(e) = article.validate(line) {
                return Some(Err(e));
            }
            if article.domain != self.expected_domain {
                return Some(Err(CorpusError::DomainMismatch {
                    line,
                    expected: self.expected_domain,
                    found: article.domain,
                }));
            }
            if !self.seen_ids.insert(article.id.clone()) {
                return Some(Err(CorpusError::DuplicateArticleId {
                    line,
                    id: article.id,
                }));
            }
            return Some(Ok(article));
        }
    }
}

/// Read a whole article store into memory, in file order.
pub fn read_articles(path: &Path, expected_domain: Domain) -> Result<Vec<Article>, CorpusError> {
    ArticleReader::open(path, expected_domain)?.collect()
}

/// Write articles as JSON-Lines in the article-store format.
pub fn write_articles(path: &Path, articles: &[Article]) -> Result<(), CorpusError> {
    let mut w = BufWriter::new(File::create(path)?);
    for article in articles {
        serde_json::to_writer(&mut w, article).map_err(|e| CorpusError::Manifest(e.to_string()))?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// One line of a parse sidecar file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParseRecord {
    pub article_id: String,
    pub sentence_index: usize,
    pub conllu: String,
    pub tree: String,
    pub parse_failed: bool,
}

/// Attach sidecar parses to already-loaded articles.
///
/// An empty `tree` string means the sentence has no constituency parse. The
/// leaf count of a present tree must equal the dependency token count; a
/// mismatch is a load error, not a silently accepted record.
pub fn attach_parses(articles: &mut [Article], path: &Path) -> Result<(), CorpusError> {
    let index: HashMap<String, usize> = articles
        .iter()
        .enumerate()
        .map(|(i, a)| (a.id.clone(), i))
        .collect();
    let reader = BufReader::new(File::open(path)?);
    for (line0, raw) in reader.lines().enumerate() {
        let raw = raw?;
        let line = line0 + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let record: ParseRecord = serde_json::from_str(&raw)
            .map_err(|source| CorpusError::MalformedParse { line, source })?;
        let Some(&slot) = index.get(record.article_id.as_str()) else {
            return Err(CorpusError::UnknownArticle {
                line,
                article_id: record.article_id,
            });
        };
        let sentence = build_sentence(&record)?;
        articles[slot].sentences.push(sentence);
    }
    for article in articles.iter_mut() {
        article.sentences.sort_by_key(|s| s.index);
        for pair in article.sentences.windows(2) {
            if pair[0].index == pair[1].index {
                return Err(CorpusError::DuplicateSentence {
                    article_id: article.id.clone(),
                    sentence_index: pair[0].index,
                });
            }
        }
    }
    Ok(())
}

fn build_sentence(record: &ParseRecord) -> Result<SentenceRecord, CorpusError> {
    if record.parse_failed {
        return Ok(SentenceRecord {
            index: record.sentence_index,
            tokens: Vec::new(),
            tree: None,
            parse_failed: true,
        });
    }
    let wrap = |source: CorpusError| CorpusError::SentenceParse {
        article_id: record.article_id.clone(),
        sentence_index: record.sentence_index,
        source: Box::new(source),
    };
    let tokens = read_dependency_block(&record.conllu).map_err(wrap)?;
    let tree = if record.tree.trim().is_empty() {
        None
    } else {
        let tree = read_bracketed_tree(&record.tree).map_err(wrap)?;
        if tree.leaf_count() != tokens.len() {
            return Err(CorpusError::TokenTreeMismatch {
                article_id: record.article_id.clone(),
                sentence_index: record.sentence_index,
                leaves: tree.leaf_count(),
                tokens: tokens.len(),
            });
        }
        Some(tree)
    };
    Ok(SentenceRecord {
        index: record.sentence_index,
        tokens,
        tree,
        parse_failed: false,
    })
}

/// Load an article store together with its parse sidecar.
pub fn load_corpus(
    articles_path: &Path,
    parses_path: &Path,
    expected_domain: Domain,
) -> Result<Vec<Article>, CorpusError> {
    let mut articles = read_articles(articles_path, expected_domain)?;
    attach_parses(&mut articles, parses_path)?;
    Ok(articles)
}

/// Serialize a sentence back into a sidecar record.
///
/// The dependency block is re-emitted from the in-memory tokens; columns this
/// model does not keep (lemma, xpos, feats, deps, misc) become `_`.
pub fn sentence_to_parse_record(article_id: &str, sentence: &SentenceRecord) -> ParseRecord {
    let conllu = if sentence.parse_failed {
        String::new()
    } else {
        sentence
            .tokens
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let head = match t.head {
                    Head::Root => 0,
                    Head::Index(h) => h + 1,
                };
                format!(
                    "{}\t{}\t_\t{}\t_\t_\t{}\t{}\t_\t_",
                    i + 1,
                    t.form,
                    t.upos,
                    head,
                    t.deprel
                )
            })
            .collect::<Vec<_>>()
            .join("\n")
    };
    ParseRecord {
        article_id: article_id.to_string(),
        sentence_index: sentence.index,
        conllu,
        tree: sentence
            .tree
            .as_ref()
            .map(ConstTree::to_bracketed)
            .unwrap_or_default(),
        parse_failed: sentence.parse_failed,
    }
}

/// Write a parse sidecar for the given articles.
pub fn write_parse_sidecar(path: &Path, articles: &[Article]) -> Result<(), CorpusError> {
    let mut w = BufWriter::new(File::create(path)?);
    for article in articles {
        for sentence in &article.sentences {
            let record = sentence_to_parse_record(&article.id, sentence);
            serde_json::to_writer(&mut w, &record)
                .map_err(|e| CorpusError::Manifest(e.to_string()))?;
            w.write_all(b"\n")?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Per-corpus manifest, one JSON document per corpus file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub corpus_id: String,
    pub domain: Domain,
    pub source: Source,
    pub article_count: usize,
    pub created_at: String,
    pub cleaning_applied: bool,
}

impl CorpusManifest {
    pub fn read(path: &Path) -> Result<Self, CorpusError> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| CorpusError::Manifest(e.to_string()))
    }

    pub fn write(&self, path: &Path) -> Result<(), CorpusError> {
        let text = serde_json::to_string_pretty(self).map_err(|e| CorpusError::Manifest(e.to_string()))?;
        std::fs::write(path, text + "\n")?;
        Ok(())
    }

    /// Check that `article_count` matches the referenced corpus file.
    pub fn validate_against(&self, articles_path: &Path) -> Result<(), CorpusError> {
        let found = read_articles(articles_path, self.domain)?.len();
        if found != self.article_count {
            return Err(CorpusError::Manifest(format!(
                "manifest claims {} articles but {} contains {}",
                self.article_count,
                articles_path.display(),
                found
            )));
        }
        Ok(())
    }
}
