//! Reader for 10-column dependency annotation blocks.
//!
//! One token per line with columns ID, FORM, LEMMA, UPOS, XPOS, FEATS, HEAD,
//! DEPREL, DEPS, MISC. Columns are tab-separated; lines without any tab are
//! split on runs of whitespace instead, which keeps hand-written fixtures
//! readable. Comment lines (`#`), multi-word-token range lines (ID like
//! `3-4`), and empty-node lines (ID like `8.1`) are skipped: metrics count
//! syntactic words, and neither ranges nor empty nodes are part of the basic
//! dependency tree.

use super::{CorpusError, DepToken, Head};
use std::collections::HashSet;

fn dep_err(line: usize, msg: impl Into<String>) -> CorpusError {
    CorpusError::Dep {
        line,
        msg: msg.into(),
    }
}

/// Parse one sentence's dependency block into tokens.
///
/// Head column value 0 maps to [`Head::Root`]; exactly one token per block
/// must be the root. Token indices must run 1..n so that head references
/// resolve to positions.
pub fn read_dependency_block(block: &str) -> Result<Vec<DepToken>, CorpusError> {
    struct Raw {
        line: usize,
        index: usize,
        head: usize,
        form: String,
        upos: String,
        deprel: String,
    }

    let mut raws: Vec<Raw> = Vec::new();
    let mut seen = HashSet::new();
    let mut last_line = 0;

    for (line0, raw_line) in block.lines().enumerate() {
        let line = line0 + 1;
        last_line = line;
        let trimmed = raw_line.trim_end_matches('\r');
        if trimmed.trim().is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = if trimmed.contains('\t') {
            trimmed.split('\t').collect()
        } else {
            trimmed.split_whitespace().collect()
        };
        if cols.len() < 10 {
            return Err(dep_err(
                line,
                format!("expected 10 columns, found {}", cols.len()),
            ));
        }
        let id = cols[0];
        if id.contains('-') || id.contains('.') {
            continue;
        }
        let index: usize = id
            .parse()
            .map_err(|_| dep_err(line, format!("non-integer token index '{id}'")))?;
        if index == 0 {
            return Err(dep_err(line, "token index 0 is reserved for the root"));
        }
        if !seen.insert(index) {
            return Err(dep_err(line, format!("duplicate token index {index}")));
        }
        let head: usize = cols[6]
            .parse()
            .map_err(|_| dep_err(line, format!("non-integer head '{}'", cols[6])))?;
        raws.push(Raw {
            line,
            index,
            head,
            form: cols[1].to_string(),
            upos: cols[3].to_string(),
            deprel: cols[7].to_string(),
        });
    }

    raws.sort_by_key(|r| r.index);
    let n = raws.len();
    if n == 0 {
        return Err(dep_err(last_line, "no root token (empty block)"));
    }
    let mut root_seen = false;
    for (position, raw) in raws.iter().enumerate() {
        if raw.index != position + 1 {
            return Err(dep_err(
                raw.line,
                format!(
                    "token indices must be consecutive from 1; expected {}, found {}",
                    position + 1,
                    raw.index
                ),
            ));
        }
        if raw.head == 0 {
            if root_seen {
                return Err(dep_err(raw.line, "multiple root tokens"));
            }
            root_seen = true;
        } else if raw.head > n {
            return Err(dep_err(
                raw.line,
                format!("head {} refers to a missing token (block has {n})", raw.head),
            ));
        }
    }
    if !root_seen {
        return Err(dep_err(last_line, "no root token"));
    }

    Ok(raws
        .into_iter()
        .map(|r| DepToken {
            form: r.form,
            upos: r.upos,
            deprel: r.deprel,
            head: if r.head == 0 {
                Head::Root
            } else {
                Head::Index(r.head - 1)
            },
        })
        .collect())
}
