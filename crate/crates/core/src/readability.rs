//! Article-level readability scores.
//!
//! Five formulas over the same word/sentence/syllable counts: Flesch-Kincaid
//! grade level, Flesch Reading Ease, Gunning-Fog, Linsear Write, and Spache.
//! Scores are computed on raw article text (no cleaning) and only for
//! articles strictly longer than 100 words.
//!
//! Tokenization is deliberately simple and dictionary-free so that identical
//! text yields bit-identical scores on every run: words are maximal runs of
//! alphanumeric characters and apostrophes, sentences end at `.`, `!`, or `?`
//! (consecutive terminators collapse, trailing text counts as one sentence),
//! and syllables come from a fixed vowel-group rule. The rule has a
//! consistent per-word bias; distribution-level comparisons tolerate that.

use crate::corpus::Article;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::io::Write;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReadabilityError {
    #[error("text contains no words")]
    NoWords,
    #[error("word and sentence counts must be at least 1")]
    ZeroCounts,
    #[error("complex word count {complex} exceeds word count {words}")]
    ComplexExceedsWords { complex: usize, words: usize },
    #[error("familiar word list is empty")]
    EmptyFamiliarList,
    #[error("familiar word list {path}: {source}")]
    ListIo {
        path: String,
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Word, sentence, and syllable totals for one text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TextCounts {
    pub words: usize,
    pub sentences: usize,
    pub syllables: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '\'' || c == '\u{2019}'
}

/// Words as maximal alphanumeric+apostrophe runs. A run must contain at
/// least one alphanumeric character; bare apostrophes are not words.
pub fn split_words(text: &str) -> impl Iterator<Item = &str> {
    text.split(|c: char| !is_word_char(c))
        .filter(|w| w.chars().any(char::is_alphanumeric))
}

/// Count syllables with the vowel-group rule.
///
/// Non-letters are stripped first; `None` signals a word with no letters,
/// which is skipped for syllable purposes. Vowels are a, e, i, o, u, plus y
/// when not word-initial. A final silent "e" drops one group unless the word
/// ends in consonant+"le". The result is floored at 1.
pub fn count_syllables(word: &str) -> Option<usize> {
    let letters: Vec<char> = word
        .chars()
        .filter(|c| c.is_alphabetic())
        .flat_map(char::to_lowercase)
        .collect();
    if letters.is_empty() {
        return None;
    }
    let is_vowel =
        |i: usize| matches!(letters[i], 'a' | 'e' | 'i' | 'o' | 'u') || (letters[i] == 'y' && i > 0);

    let mut groups = 0usize;
    let mut prev_vowel = false;
    for i in 0..letters.len() {
        let vowel = is_vowel(i);
        if vowel && !prev_vowel {
            groups += 1;
        }
        prev_vowel = vowel;
    }

    let n = letters.len();
    let ends_consonant_le = n >= 3 && letters[n - 1] == 'e' && letters[n - 2] == 'l' && !is_vowel(n - 3);
    let silent_e = letters[n - 1] == 'e' && !ends_consonant_le;
    Some(groups.saturating_sub(silent_e as usize).max(1))
}

fn count_sentences(text: &str) -> usize {
    let mut sentences = 0;
    let mut has_content = false;
    for c in text.chars() {
        match c {
            '.' | '!' | '?' => {
                if has_content {
                    sentences += 1;
                    has_content = false;
                }
            }
            c if c.is_alphanumeric() => has_content = true,
            _ => {}
        }
    }
    if has_content {
        sentences += 1;
    }
    sentences
}

/// Word, sentence, and syllable counts for a text.
pub fn text_counts(text: &str) -> Result<TextCounts, ReadabilityError> {
    let mut words = 0;
    let mut syllables = 0;
    for word in split_words(text) {
        words += 1;
        syllables += count_syllables(word).unwrap_or(0);
    }
    if words == 0 {
        return Err(ReadabilityError::NoWords);
    }
    Ok(TextCounts {
        words,
        sentences: count_sentences(text),
        syllables,
    })
}

fn check_counts(counts: &TextCounts) -> Result<(), ReadabilityError> {
    if counts.words == 0 || counts.sentences == 0 {
        return Err(ReadabilityError::ZeroCounts);
    }
    Ok(())
}

/// Flesch-Kincaid grade level: 0.39·ASL + 11.8·ASW − 15.59.
pub fn fk_grade(counts: &TextCounts) -> Result<f64, ReadabilityError> {
    check_counts(counts)?;
    let asl = counts.words as f64 / counts.sentences as f64;
    let asw = counts.syllables as f64 / counts.words as f64;
    Ok(0.39 * asl + 11.8 * asw - 15.59)
}

/// Flesch Reading Ease: 206.835 − 1.015·ASL − 84.6·ASW.
pub fn fk_ease(counts: &TextCounts) -> Result<f64, ReadabilityError> {
    check_counts(counts)?;
    let asl = counts.words as f64 / counts.sentences as f64;
    let asw = counts.syllables as f64 / counts.words as f64;
    Ok(206.835 - 1.015 * asl - 84.6 * asw)
}

/// Gunning-Fog index: 0.4·(ASL + 100·complex/words), where complex words
/// have three or more syllables.
pub fn gunning_fog(counts: &TextCounts, complex_words: usize) -> Result<f64, ReadabilityError> {
    check_counts(counts)?;
    if complex_words > counts.words {
        return Err(ReadabilityError::ComplexExceedsWords {
            complex: complex_words,
            words: counts.words,
        });
    }
    let asl = counts.words as f64 / counts.sentences as f64;
    Ok(0.4 * (asl + 100.0 * complex_words as f64 / counts.words as f64))
}

/// Linsear Write: r = (easy + 3·hard)/sentences; r/2 when r > 20, else
/// (r − 2)/2. Easy words have at most two syllables, hard words three or
/// more.
pub fn linsear_write(easy: usize, hard: usize, sentences: usize) -> Result<f64, ReadabilityError> {
    if sentences == 0 {
        return Err(ReadabilityError::ZeroCounts);
    }
    let r = (easy as f64 + 3.0 * hard as f64) / sentences as f64;
    Ok(if r > 20.0 { r / 2.0 } else { (r - 2.0) / 2.0 })
}

/// Spache: 0.141·ASL + 0.086·(100·difficult/words) + 0.839, where difficult
/// words are tokens absent from the familiar-word list.
pub fn spache(
    counts: &TextCounts,
    difficult: usize,
    list: &FamiliarWordList,
) -> Result<f64, ReadabilityError> {
    check_counts(counts)?;
    if list.is_empty() {
        return Err(ReadabilityError::EmptyFamiliarList);
    }
    let asl = counts.words as f64 / counts.sentences as f64;
    Ok(0.141 * asl + 0.086 * (100.0 * difficult as f64 / counts.words as f64) + 0.839)
}

/// Case-folded set of words familiar to young readers, for Spache.
#[derive(Debug, Clone)]
pub struct FamiliarWordList {
    entries: HashSet<String>,
    pub source_path: String,
}

impl FamiliarWordList {
    /// Load from a file with one word per line; `#` starts a comment.
    pub fn load(path: &Path) -> Result<Self, ReadabilityError> {
        let text = std::fs::read_to_string(path).map_err(|source| ReadabilityError::ListIo {
            path: path.display().to_string(),
            source,
        })?;
        let entries = text
            .lines()
            .map(|line| line.split('#').next().unwrap_or("").trim())
            .filter(|word| !word.is_empty())
            .map(str::to_lowercase)
            .collect();
        Ok(FamiliarWordList {
            entries,
            source_path: path.display().to_string(),
        })
    }

    pub fn from_words<I: IntoIterator<Item = S>, S: AsRef<str>>(words: I) -> Self {
        FamiliarWordList {
            entries: words
                .into_iter()
                .map(|w| w.as_ref().to_lowercase())
                .collect(),
            source_path: String::new(),
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains(&word.to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// All five scores plus the counts they were computed from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReadabilityScores {
    pub fk_grade: f64,
    pub fk_ease: f64,
    pub gunning_fog: f64,
    pub linsear_write: f64,
    pub spache: f64,
    pub words: usize,
    pub sentences: usize,
    pub syllables: usize,
}

/// Score one article, or skip it.
///
/// Returns `None` for articles of 100 or fewer words (and for empty text);
/// the gate is strict, so a 101-word article is scored. The text must be the
/// raw article body, not a cleaned one. Words whose syllable count is
/// undefined (no letters) count as easy and non-complex.
pub fn score_article(
    article: &Article,
    list: &FamiliarWordList,
) -> Result<Option<ReadabilityScores>, ReadabilityError> {
    let counts = match text_counts(&article.text) {
        Ok(counts) => counts,
        Err(ReadabilityError::NoWords) => return Ok(None),
        Err(e) => return Err(e),
    };
    if counts.words <= 100 {
        return Ok(None);
    }
    if list.is_empty() {
        return Err(ReadabilityError::EmptyFamiliarList);
    }

    let mut hard = 0;
    let mut difficult = 0;
    for word in split_words(&article.text) {
        if count_syllables(word).unwrap_or(0) >= 3 {
            hard += 1;
        }
        if !list.contains(word) {
            difficult += 1;
        }
    }
    let easy = counts.words - hard;

    Ok(Some(ReadabilityScores {
        fk_grade: fk_grade(&counts)?,
        fk_ease: fk_ease(&counts)?,
        gunning_fog: gunning_fog(&counts, hard)?,
        linsear_write: linsear_write(easy, hard, counts.sentences)?,
        spache: spache(&counts, difficult, list)?,
        words: counts.words,
        sentences: counts.sentences,
        syllables: counts.syllables,
    }))
}

/// One row of the per-article readability CSV.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReadabilityRow {
    pub article_id: String,
    pub domain: crate::corpus::Domain,
    pub source: crate::corpus::Source,
    pub fk_grade: f64,
    pub fk_ease: f64,
    pub gunning_fog: f64,
    pub linsear_write: f64,
    pub spache: f64,
    pub words: usize,
    pub sentences: usize,
    pub syllables: usize,
}

pub fn write_scores_csv<W: Write>(writer: W, rows: &[ReadabilityRow]) -> Result<(), ReadabilityError> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
