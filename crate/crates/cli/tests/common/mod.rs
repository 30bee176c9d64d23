//! Shared fixtures for the pipeline and acceptance tests: a tiny local
//! completion endpoint and deterministic corpus builders.

#![allow(dead_code)]

use serde_json::json;
use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

// ---------------------------------------------------------------------------
// Mock endpoint
// ---------------------------------------------------------------------------

#[derive(Clone)]
pub enum MockBehavior {
    Reply(String),
    Status(u16),
}

pub struct MockEndpoint {
    pub url: String,
    requests: Arc<AtomicUsize>,
}

impl MockEndpoint {
    pub fn request_count(&self) -> usize {
        self.requests.load(Ordering::SeqCst)
    }
}

pub fn start_mock_endpoint(behavior: MockBehavior) -> MockEndpoint {
    let listener = TcpListener::bind("127.0.0.1:0").expect("bind mock endpoint");
    let addr = listener.local_addr().expect("mock endpoint addr");
    let requests = Arc::new(AtomicUsize::new(0));
    let counter = Arc::clone(&requests);
    std::thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(stream) = stream else { continue };
            counter.fetch_add(1, Ordering::SeqCst);
            handle_connection(stream, &behavior);
        }
    });
    MockEndpoint {
        url: format!("http://{addr}/v1/chat/completions"),
        requests,
    }
}

fn handle_connection(stream: TcpStream, behavior: &MockBehavior) {
    let mut reader = BufReader::new(stream);
    let mut content_length = 0usize;
    loop {
        let mut line = String::new();
        if reader.read_line(&mut line).is_err() || line == "\r\n" || line.is_empty() {
            break;
        }
        let lower = line.to_ascii_lowercase();
        if let Some(value) = lower.strip_prefix("content-length:") {
            content_length = value.trim().parse().unwrap_or(0);
        }
    }
    let mut body = vec![0u8; content_length];
    let _ = reader.read_exact(&mut body);

    let (status_line, payload) = match behavior {
        MockBehavior::Reply(text) => (
            "200 OK".to_string(),
            json!({
                "choices": [{
                    "message": {"role": "assistant", "content": text},
                    "text": text,
                    "finish_reason": "stop"
                }]
            })
            .to_string(),
        ),
        MockBehavior::Status(code) => (format!("{code} Error"), "{}".to_string()),
    };
    let response = format!(
        "HTTP/1.1 {status_line}\r\nContent-Length: {}\r\nContent-Type: application/json\r\nConnection: close\r\n\r\n{payload}",
        payload.len(),
    );
    let mut stream = reader.into_inner();
    let _ = stream.write_all(response.as_bytes());
}

// ---------------------------------------------------------------------------
// Corpus fixtures
// ---------------------------------------------------------------------------

pub struct FixtureSentence {
    pub upos: Vec<&'static str>,
    pub tree: Option<String>,
    pub parse_failed: bool,
}

impl FixtureSentence {
    /// A sentence of `words` tokens; the first token is a VERB when asked,
    /// with a right-branching tree over matching leaf forms.
    pub fn plain(words: usize, with_verb: bool) -> Self {
        let mut upos = vec![if with_verb { "VERB" } else { "NOUN" }];
        upos.extend(std::iter::repeat("NOUN").take(words.saturating_sub(1)));
        let forms: Vec<String> = (0..words).map(|i| format!("w{i}")).collect();
        FixtureSentence {
            upos,
            tree: Some(chain_tree(&forms)),
            parse_failed: false,
        }
    }

    pub fn failed() -> Self {
        FixtureSentence {
            upos: vec![],
            tree: None,
            parse_failed: true,
        }
    }
}

/// Right-branching bracketed tree over the given leaf forms.
pub fn chain_tree(forms: &[String]) -> String {
    match forms {
        [] => String::new(),
        [only] => format!("(X {only})"),
        [head, rest @ ..] => format!("(S {head} {})", chain_tree(rest)),
    }
}

fn conllu_block(upos: &[&str]) -> String {
    upos.iter()
        .enumerate()
        .map(|(i, tag)| {
            let (head, deprel) = if i == 0 { (0, "root") } else { (1, "dep") };
            format!("{}\tw{}\t_\t{}\t_\t_\t{}\t{}\t_\t_", i + 1, i, tag, head, deprel)
        })
        .collect::<Vec<_>>()
        .join("\n")
}

pub struct FixtureArticle {
    pub id: String,
    pub title: Option<String>,
    pub text: String,
    pub sentences: Vec<FixtureSentence>,
}

/// Write an article store and its parse sidecar; returns both paths.
pub fn write_fixture_corpus(
    dir: &Path,
    tag: &str,
    domain: &str,
    source: &str,
    model_name: Option<&str>,
    articles: &[FixtureArticle],
) -> (PathBuf, PathBuf) {
    let articles_path = dir.join(format!("{tag}.jsonl"));
    let parses_path = dir.join(format!("{tag}.parses.jsonl"));
    let mut article_lines = Vec::new();
    let mut parse_lines = Vec::new();
    for article in articles {
        let mut record = json!({
            "id": article.id,
            "domain": domain,
            "source": source,
            "text": article.text,
        });
        if let Some(title) = &article.title {
            record["title"] = json!(title);
        }
        if let Some(name) = model_name {
            record["model_name"] = json!(name);
        }
        article_lines.push(record.to_string());
        for (index, sentence) in article.sentences.iter().enumerate() {
            parse_lines.push(
                json!({
                    "article_id": article.id,
                    "sentence_index": index,
                    "conllu": if sentence.parse_failed { String::new() } else { conllu_block(&sentence.upos) },
                    "tree": sentence.tree.clone().unwrap_or_default(),
                    "parse_failed": sentence.parse_failed,
                })
                .to_string(),
            );
        }
    }
    std::fs::write(&articles_path, article_lines.join("\n") + "\n").unwrap();
    std::fs::write(&parses_path, parse_lines.join("\n") + "\n").unwrap();
    (articles_path, parses_path)
}

/// A raw text of `words` words ending in a period, long enough to pass the
/// readability gate when `words > 100`.
pub fn raw_text(words: usize) -> String {
    (0..words)
        .map(|i| format!("word{i}"))
        .collect::<Vec<_>>()
        .join(" ")
        + "."
}

pub fn write_familiar_list(dir: &Path) -> PathBuf {
    let path = dir.join("familiar.txt");
    std::fs::write(&path, "the\ncat\nsat\na\ndog\nran\nfast\nbig\nred\nhe\nshe\nit\nis\nwas\nto\nand\nof\non\nin\nday\n").unwrap();
    path
}

/// Minimal TOML run configuration for the given corpora.
pub fn write_config(
    dir: &Path,
    out_dir: &Path,
    corpora: &[(&str, &str, &Path, Option<&Path>)],
    familiar: Option<&Path>,
    extra: &str,
) -> PathBuf {
    let mut text = format!("out_dir = {:?}\n\n", out_dir.to_str().unwrap());
    for (domain, source, articles, parses) in corpora {
        text.push_str("[[corpus]]\n");
        text.push_str(&format!("domain = {domain:?}\n"));
        text.push_str(&format!("source = {source:?}\n"));
        text.push_str(&format!("articles = {:?}\n", articles.to_str().unwrap()));
        if let Some(parses) = parses {
            text.push_str(&format!("parses = {:?}\n", parses.to_str().unwrap()));
        }
        text.push('\n');
    }
    if let Some(familiar) = familiar {
        text.push_str(&format!(
            "[readability]\nfamiliar_words = {:?}\n\n",
            familiar.to_str().unwrap()
        ));
    }
    text.push_str(extra);
    let path = dir.join("run.toml");
    std::fs::write(&path, text).unwrap();
    path
}

pub fn common_args(config: PathBuf) -> textdrift_cli::CommonArgs {
    textdrift_cli::CommonArgs {
        config,
        out: None,
        no_clean: false,
        threads: None,
        min_words: None,
        max_words: None,
    }
}
