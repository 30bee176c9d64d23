//! HTTP client with bounded retries and a checkpointed worker pool.
//!
//! Up to `parallelism` requests are in flight at once; every finished
//! article is appended to the checkpoint through a single writer thread and
//! flushed before the next, so an interrupt leaves at worst one torn final
//! line, which the loader tolerates. Article ids already present in the
//! checkpoint are never requested again.

use crate::{build_prompt, RegenConfig, RegenError, RegenRecord, RegenStatus, WireShape};
use serde_json::json;
use std::collections::HashSet;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;
use std::time::Duration;
use textdrift_core::corpus::Article;

/// Per-run accounting; `resumed` counts input articles that were already
/// checkpointed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct RunReport {
    pub requested: usize,
    pub resumed: usize,
    pub generated: usize,
    pub skipped: usize,
    pub failed: usize,
}

const CHECKPOINT_FILE: &str = "checkpoint.jsonl";

fn load_checkpoint(path: &Path) -> Result<Vec<RegenRecord>, RegenError> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let text = std::fs::read_to_string(path)?;
    let lines: Vec<&str> = text.lines().collect();
    let last_content = lines.iter().rposition(|l| !l.trim().is_empty());
    let mut records = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<RegenRecord>(line) {
            Ok(record) => records.push(record),
            // A torn final line is what an interrupt leaves behind; that
            // article is simply requested again. Corruption anywhere else is
            // a real problem.
            Err(_) if Some(i) == last_content => break,
            Err(e) => {
                return Err(RegenError::Checkpoint {
                    path: path.display().to_string(),
                    msg: format!("line {}: {}", i + 1, e),
                });
            }
        }
    }
    Ok(records)
}

enum AttemptError {
    Retryable(String),
    Fatal(String),
}

fn request_completion(
    client: &reqwest::blocking::Client,
    config: &RegenConfig,
    prompt: &str,
) -> Result<(String, String), AttemptError> {
    let body = match config.wire {
        WireShape::Chat => json!({
            "model": config.model_name,
            "temperature": config.temperature,
            "max_tokens": config.max_output_tokens,
            "messages": [{"role": "user", "content": prompt}],
        }),
        WireShape::Completion => json!({
            "model": config.model_name,
            "temperature": config.temperature,
            "max_tokens": config.max_output_tokens,
            "prompt": prompt,
        }),
    };
    let mut request = client.post(&config.endpoint_url).json(&body);
    if let Some(token) = &config.auth_token {
        request = request.header("Authorization", format!("Bearer {token}"));
    }
    let response = request
        .send()
        .map_err(|e| AttemptError::Retryable(format!("transport: {e}")))?;
    let status = response.status();
    if status.is_server_error() || status.as_u16() == 429 {
        return Err(AttemptError::Retryable(format!("HTTP {status}")));
    }
    if !status.is_success() {
        return Err(AttemptError::Fatal(format!("HTTP {status}")));
    }
    let value: serde_json::Value = response
        .json()
        .map_err(|e| AttemptError::Fatal(format!("malformed endpoint response: {e}")))?;
    let choice = &value["choices"][0];
    let completion = match config.wire {
        WireShape::Chat => choice["message"]["content"].as_str(),
        WireShape::Completion => choice["text"].as_str(),
    };
    let Some(completion) = completion else {
        return Err(AttemptError::Fatal(
            "malformed endpoint response: no completion text in first choice".to_string(),
        ));
    };
    let finish_reason = choice["finish_reason"].as_str().unwrap_or("").to_string();
    Ok((completion.to_string(), finish_reason))
}

fn now_rfc3339() -> String {
    time::OffsetDateTime::now_utc()
        .format(&time::format_description::well_known::Rfc3339)
        .unwrap_or_default()
}

fn process_article(
    client: &reqwest::blocking::Client,
    config: &RegenConfig,
    article: &Article,
) -> RegenRecord {
    let request_time = now_rfc3339();
    let prompt = match build_prompt(article, config) {
        Ok(prompt) => prompt,
        Err(reason) => {
            return RegenRecord {
                article_id: article.id.clone(),
                prompt: String::new(),
                completion: String::new(),
                model_name: config.model_name.clone(),
                request_time,
                finish_reason: String::new(),
                status: RegenStatus::Skipped,
                retries: 0,
                error: Some(reason.to_string()),
            };
        }
    };

    let mut last_error = String::new();
    for attempt in 1..=config.max_attempts {
        match request_completion(client, config, &prompt) {
            Ok((completion, finish_reason)) => {
                return RegenRecord {
                    article_id: article.id.clone(),
                    prompt,
                    completion,
                    model_name: config.model_name.clone(),
                    request_time,
                    finish_reason,
                    status: RegenStatus::Ok,
                    retries: attempt - 1,
                    error: None,
                };
            }
            Err(AttemptError::Fatal(msg)) => {
                return RegenRecord {
                    article_id: article.id.clone(),
                    prompt,
                    completion: String::new(),
                    model_name: config.model_name.clone(),
                    request_time,
                    finish_reason: String::new(),
                    status: RegenStatus::Failed,
                    retries: attempt,
                    error: Some(msg),
                };
            }
            Err(AttemptError::Retryable(msg)) => {
                last_error = msg;
                if attempt < config.max_attempts {
                    let backoff = config.initial_backoff_ms.saturating_mul(1 << (attempt - 1).min(16));
                    std::thread::sleep(Duration::from_millis(backoff.min(30_000)));
                }
            }
        }
    }
    RegenRecord {
        article_id: article.id.clone(),
        prompt,
        completion: String::new(),
        model_name: config.model_name.clone(),
        request_time,
        finish_reason: String::new(),
        status: RegenStatus::Failed,
        retries: config.max_attempts,
        error: Some(last_error),
    }
}

/// Regenerate every article not yet in the checkpoint.
///
/// Returns one record per input article, old and new, ordered by article id
/// regardless of completion order. Transport trouble produces failure
/// records, never a crash.
pub fn regenerate_corpus(
    articles: &[Article],
    config: &RegenConfig,
    checkpoint_dir: &Path,
) -> Result<(Vec<RegenRecord>, RunReport), RegenError> {
    config.validate()?;
    std::fs::create_dir_all(checkpoint_dir)?;
    let checkpoint_path = checkpoint_dir.join(CHECKPOINT_FILE);
    let existing = load_checkpoint(&checkpoint_path)?;
    let done: HashSet<&str> = existing.iter().map(|r| r.article_id.as_str()).collect();

    let input_ids: HashSet<&str> = articles.iter().map(|a| a.id.as_str()).collect();
    let pending: Vec<&Article> = articles
        .iter()
        .filter(|a| !done.contains(a.id.as_str()))
        .collect();

    let mut report = RunReport {
        requested: articles.len(),
        resumed: articles.len() - pending.len(),
        ..RunReport::default()
    };

    let client = reqwest::blocking::Client::builder()
        .timeout(Duration::from_secs(config.request_timeout_secs))
        .build()
        .map_err(|e| RegenError::Config(format!("http client: {e}")))?;

    let new_records: Vec<RegenRecord> = std::thread::scope(|scope| {
        let (job_tx, job_rx) = crossbeam_channel::unbounded::<&Article>();
        let (record_tx, record_rx) = crossbeam_channel::unbounded::<RegenRecord>();

        let writer = scope.spawn(move || -> Result<Vec<RegenRecord>, RegenError> {
            let mut file = OpenOptions::new()
                .create(true)
                .append(true)
                .open(&checkpoint_path)?;
            let mut collected = Vec::new();
            for record in record_rx {
                let line = serde_json::to_string(&record).map_err(|e| RegenError::Checkpoint {
                    path: checkpoint_path.display().to_string(),
                    msg: e.to_string(),
                })?;
                file.write_all(line.as_bytes())?;
                file.write_all(b"\n")?;
                file.flush()?;
                collected.push(record);
            }
            Ok(collected)
        });

        let workers = config.parallelism.min(pending.len().max(1));
        for _ in 0..workers {
            let job_rx = job_rx.clone();
            let record_tx = record_tx.clone();
            let client = &client;
            scope.spawn(move || {
                for article in job_rx {
                    let record = process_article(client, config, article);
                    if record_tx.send(record).is_err() {
                        break;
                    }
                }
            });
        }
        drop(job_rx);
        drop(record_tx);

        for article in &pending {
            job_tx.send(article).expect("workers alive");
        }
        drop(job_tx);

        writer.join().expect("writer thread")
    })?;

    for record in &new_records {
        match record.status {
            RegenStatus::Ok => report.generated += 1,
            RegenStatus::Skipped => report.skipped += 1,
            RegenStatus::Failed => report.failed += 1,
        }
    }

    let mut all: Vec<RegenRecord> = existing
        .into_iter()
        .filter(|r| input_ids.contains(r.article_id.as_str()))
        .chain(new_records)
        .collect();
    all.sort_by(|a, b| a.article_id.cmp(&b.article_id));
    Ok((all, report))
}
