//! Minimal in-process HTTP endpoint for exercising the client offline.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

#[derive(Clone)]
pub enum MockBehavior {
    /// Always 200 with the given completion text.
    Reply(String),
    /// Always the given HTTP status with an empty JSON body.
    Status(u16),
    /// The first `fail` requests get HTTP 500, the rest succeed.
    FailThenReply { fail: usize, text: String },
    /// 200 with a body that is not valid JSON.
    Garbage,
}

pub struct MockEndpoint {
    pub url: String,
    requests: Arc<AtomicUsize>,
}

impl MockEndpoint {
    /// Requests observed so far.
    pub fn request_count(&self) -> usize {
        self.requests.load(Ordering::SeqCst)
    }
}

/// Serve OpenAI-shaped completions on an ephemeral local port. The accept
/// loop runs on a detached thread for the life of the test process.
pub fn start_mock_endpoint(behavior: MockBehavior) -> MockEndpoint {
    let listener = TcpListener::bind("127.0.0.1:0").expect("bind mock endpoint");
    let addr = listener.local_addr().expect("mock endpoint addr");
    let requests = Arc::new(AtomicUsize::new(0));
    let counter = Arc::clone(&requests);
    std::thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(stream) = stream else { continue };
            let n = counter.fetch_add(1, Ordering::SeqCst);
            handle_connection(stream, &behavior, n);
        }
    });
    MockEndpoint {
        url: format!("http://{addr}/v1/chat/completions"),
        requests,
    }
}

fn handle_connection(stream: TcpStream, behavior: &MockBehavior, request_index: usize) {
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
        MockBehavior::Reply(text) => ("200 OK", completion_payload(text)),
        MockBehavior::Status(code) => {
            let status = format!("{code} Error");
            let response = format!(
                "HTTP/1.1 {status}\r\nContent-Length: 2\r\nContent-Type: application/json\r\nConnection: close\r\n\r\n{{}}",
            );
            let mut stream = reader.into_inner();
            let _ = stream.write_all(response.as_bytes());
            return;
        }
        MockBehavior::FailThenReply { fail, text } => {
            if request_index < *fail {
                ("500 Internal Server Error", "{}".to_string())
            } else {
                ("200 OK", completion_payload(text))
            }
        }
        MockBehavior::Garbage => ("200 OK", "this is not json".to_string()),
    };
    let response = format!(
        "HTTP/1.1 {status_line}\r\nContent-Length: {}\r\nContent-Type: application/json\r\nConnection: close\r\n\r\n{payload}",
        payload.len(),
    );
    let mut stream = reader.into_inner();
    let _ = stream.write_all(response.as_bytes());
}

fn completion_payload(text: &str) -> String {
    // Carries both chat and plain-completion shapes so either wire works.
    serde_json::json!({
        "choices": [{
            "message": {"role": "assistant", "content": text},
            "text": text,
            "finish_reason": "stop"
        }]
    })
    .to_string()
}
