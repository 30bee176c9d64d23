//! Prompt templates and their deterministic expansion.
//!
//! The templates are fixed byte-for-byte, trailing spaces included, so a
//! checkpointed prompt can always be replayed to identical bytes. Wikipedia
//! prompts carry the article topic and its first 256 words, CCNews prompts
//! the title and first 180 words, ELI5 prompts only the thread title.

use crate::RegenConfig;
use textdrift_core::corpus::{Article, Domain};
use thiserror::Error;

pub const WIKIPEDIA_TEMPLATE: &str = "Generate a Wikipedia article on the topic of {topic}. \n\
Use the following first paragraph from the original Wikipedia article as a starting point:\n\
\n\
{first_paragraph}\n\
\n\
Now, expand upon the provided paragraph by providing additional details, \n\
historical context, notable events, key figures, and any relevant subtopics. \n\
Aim for a well-structured and informative Wikipedia style article with a minimum length of 700 words. \n\
Ensure that the content is factually accurate, well-written, and on Wikipedia writing style.";

pub const CCNEWS_TEMPLATE: &str = "Generate a news article on the topic of {title}.\n\
Use the following first paragraph from the original news article as a starting point:\n\
\n\
{first_paragraph}\n\
\n\
Now, expand upon the provided paragraph by providing additional details, context, notable events, key figures, and any relevant discussions. Aim for a well-structured and informative news style article with a minimum length of 500 words. Ensure that the content is factually accurate, well-written, and on news writing style.";

pub const ELI5_TEMPLATE: &str = "Generate a reddit reply to this thread {title}.\n\
\n\
Aim for an Explain Like I'm Five style reply with a minimum length of 100 words. Ensure that the content is factually accurate, well-written, and on Explain like I'm Five writing style.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum PromptError {
    #[error("article has no title")]
    MissingTitle,
    #[error("article has no text")]
    MissingText,
    #[error("article domain does not match the regeneration domain")]
    DomainMismatch,
}

/// First `n` whitespace-delimited words, joined by single spaces. Texts with
/// fewer than `n` words pass through whole (whitespace still normalized).
pub fn truncate_words(text: &str, n: usize) -> String {
    text.split_whitespace().take(n).collect::<Vec<_>>().join(" ")
}

fn fill_two(template: &str, first_key: &str, first: &str, second_key: &str, second: &str) -> String {
    // Single pass, left to right, so substituted values are never rescanned.
    let (head, rest) = template.split_once(first_key).expect("template placeholder");
    let (middle, tail) = rest.split_once(second_key).expect("template placeholder");
    let mut out = String::with_capacity(template.len() + first.len() + second.len());
    out.push_str(head);
    out.push_str(first);
    out.push_str(middle);
    out.push_str(second);
    out.push_str(tail);
    out
}

fn fill_one(template: &str, key: &str, value: &str) -> String {
    let (head, tail) = template.split_once(key).expect("template placeholder");
    let mut out = String::with_capacity(template.len() + value.len());
    out.push_str(head);
    out.push_str(value);
    out.push_str(tail);
    out
}

fn non_empty(value: Option<&str>, err: PromptError) -> Result<&str, PromptError> {
    match value.map(str::trim) {
        Some(v) if !v.is_empty() => Ok(v),
        _ => Err(err),
    }
}

/// Expand the domain template for one article.
///
/// Pure in (article, config): the same inputs always produce the same bytes.
pub fn build_prompt(article: &Article, config: &RegenConfig) -> Result<String, PromptError> {
    if article.domain != config.domain {
        return Err(PromptError::DomainMismatch);
    }
    let title = non_empty(article.title.as_deref(), PromptError::MissingTitle);
    match config.domain {
        Domain::Wikipedia => {
            let topic = title?;
            let text = non_empty(Some(article.text.as_str()), PromptError::MissingText)?;
            let paragraph = truncate_words(text, config.word_budget);
            Ok(fill_two(
                WIKIPEDIA_TEMPLATE,
                "{topic}",
                topic,
                "{first_paragraph}",
                &paragraph,
            ))
        }
        Domain::Ccnews => {
            let title = title?;
            let text = non_empty(Some(article.text.as_str()), PromptError::MissingText)?;
            let paragraph = truncate_words(text, config.word_budget);
            Ok(fill_two(
                CCNEWS_TEMPLATE,
                "{title}",
                title,
                "{first_paragraph}",
                &paragraph,
            ))
        }
        Domain::Eli5 => Ok(fill_one(ELI5_TEMPLATE, "{title}", title?)),
    }
}
