//! OpenAI-compatible chat completions over a pluggable transport.

use std::collections::{HashMap, VecDeque};
use std::path::Path;
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChatError {
    #[error("request has no messages")]
    EmptyRequest,
    #[error("transport failed after {attempts} attempts: {message}")]
    Transport { attempts: u32, message: String },
    #[error("HTTP {status} after {attempts} attempts: {body}")]
    Status { status: u16, attempts: u32, body: String },
    #[error("malformed response: {0}")]
    MalformedResponse(String),
    #[error("no recorded response for request {0}")]
    NotRecorded(String),
    #[error("{path}: {message}")]
    Transcript { path: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

impl ChatMessage {
    pub fn user(content: impl Into<String>) -> Self {
        Self {
            role: Role::User,
            content: content.into(),
        }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        Self {
            role: Role::Assistant,
            content: content.into(),
        }
    }
}

/// Serialized as the wire request body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatRequest {
    pub model: String,
    pub messages: Vec<ChatMessage>,
    pub temperature: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_tokens: Option<u32>,
}

impl ChatRequest {
    /// A single user message at temperature 0.
    pub fn single(model: impl Into<String>, prompt: impl Into<String>) -> Self {
        Self {
            model: model.into(),
            messages: vec![ChatMessage::user(prompt)],
            temperature: 0.0,
            max_tokens: None,
        }
    }

    pub fn wire_body(&self) -> String {
        serde_json::to_string(self).expect("request serializes")
    }

    /// Hex SHA-256 of the wire body; keys recorded transcripts.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.wire_body().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Usage {
    #[serde(default)]
    pub prompt_tokens: u64,
    #[serde(default)]
    pub completion_tokens: u64,
    #[serde(default)]
    pub total_tokens: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChatResponse {
    pub content: String,
    pub finish_reason: Option<String>,
    pub usage: Option<Usage>,
    /// HTTP attempts it took, including the successful one.
    pub attempts: u32,
}

#[derive(Deserialize)]
struct WireResponse {
    choices: Vec<WireChoice>,
    usage: Option<Usage>,
}

#[derive(Deserialize)]
struct WireChoice {
    message: WireMessage,
    finish_reason: Option<String>,
}

#[derive(Deserialize)]
struct WireMessage {
    content: Option<String>,
}

pub fn parse_response_body(body: &str) -> Result<(String, Option<String>, Option<Usage>), ChatError> {
    let wire: WireResponse = serde_json::from_str(body).map_err(|e| ChatError::MalformedResponse(e.to_string()))?;
    let choice = wire
        .choices
        .into_iter()
        .next()
        .ok_or_else(|| ChatError::MalformedResponse("no choices".into()))?;
    let content = choice
        .message
        .content
        .ok_or_else(|| ChatError::MalformedResponse("choice has no content".into()))?;
    Ok((content, choice.finish_reason, wire.usage))
}

/// Anything that answers chat requests.
pub trait ChatCompletion: Send + Sync {
    fn complete(&self, request: &ChatRequest) -> Result<ChatResponse, ChatError>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpResponse {
    pub status: u16,
    pub body: String,
}

pub trait Transport: Send + Sync {
    /// One POST. `Err` means no HTTP response was received.
    fn post(&self, url: &str, api_key: Option<&str>, body: &str, timeout: Duration) -> Result<HttpResponse, String>;
}

impl<T: Transport + ?Sized> Transport for std::sync::Arc<T> {
    fn post(&self, url: &str, api_key: Option<&str>, body: &str, timeout: Duration) -> Result<HttpResponse, String> {
        (**self).post(url, api_key, body, timeout)
    }
}

pub struct UreqTransport;

impl Transport for UreqTransport {
    fn post(&self, url: &str, api_key: Option<&str>, body: &str, timeout: Duration) -> Result<HttpResponse, String> {
        let agent = ureq::AgentBuilder::new().timeout(timeout).build();
        let mut req = agent.post(url).set("Content-Type", "application/json");
        if let Some(key) = api_key {
            req = req.set("Authorization", &format!("Bearer {key}"));
        }
        match req.send_string(body) {
            Ok(resp) => {
                let status = resp.status();
                let body = resp.into_string().map_err(|e| e.to_string())?;
                Ok(HttpResponse { status, body })
            }
            Err(ureq::Error::Status(status, resp)) => Ok(HttpResponse {
                status,
                body: resp.into_string().unwrap_or_default(),
            }),
            Err(ureq::Error::Transport(t)) => Err(t.to_string()),
        }
    }
}

/// Returns queued responses in order and records request bodies.
#[derive(Default)]
pub struct MockTransport {
    queue: Mutex<VecDeque<Result<HttpResponse, String>>>,
    requests: Mutex<Vec<String>>,
}

impl MockTransport {
    pub fn new(responses: impl IntoIterator<Item = Result<HttpResponse, String>>) -> Self {
        Self {
            queue: Mutex::new(responses.into_iter().collect()),
            requests: Mutex::new(Vec::new()),
        }
    }

    pub fn requests(&self) -> Vec<String> {
        self.requests.lock().unwrap().clone()
    }
}

impl Transport for MockTransport {
    fn post(&self, _url: &str, _key: Option<&str>, body: &str, _timeout: Duration) -> Result<HttpResponse, String> {
        self.requests.lock().unwrap().push(body.to_string());
        self.queue
            .lock()
            .unwrap()
            .pop_front()
            .unwrap_or_else(|| Err("mock transport exhausted".into()))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub request_hash: String,
    /// Full wire response JSON.
    pub response_body: serde_json::Value,
}

/// Serves recorded responses keyed by request hash; unknown requests fail.
pub struct ReplayClient {
    entries: HashMap<String, String>,
}

impl ReplayClient {
    pub fn new(entries: Vec<TranscriptEntry>) -> Self {
        Self {
            entries: entries
                .into_iter()
                .map(|e| (e.request_hash, e.response_body.to_string()))
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        Ok(Self::new(serde_json::from_str(text)?))
    }

    pub fn load(path: &Path) -> Result<Self, ChatError> {
        let fail = |message: String| ChatError::Transcript {
            path: path.display().to_string(),
            message,
        };
        let text = std::fs::read_to_string(path).map_err(|e| fail(e.to_string()))?;
        Self::from_json(&text).map_err(|e| fail(e.to_string()))
    }
}

impl ChatCompletion for ReplayClient {
    fn complete(&self, request: &ChatRequest) -> Result<ChatResponse, ChatError> {
        let hash = request.hash();
        let body = self.entries.get(&hash).ok_or(ChatError::NotRecorded(hash))?;
        let (content, finish_reason, usage) = parse_response_body(body)?;
        Ok(ChatResponse {
            content,
            finish_reason,
            usage,
            attempts: 1,
        })
    }
}

#[derive(Debug, Clone)]
pub struct RetryPolicy {
    /// Retries after the first attempt.
    pub max_retries: u32,
    pub initial_backoff: Duration,
    pub max_backoff: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self {
            max_retries: 4,
            initial_backoff: Duration::from_millis(500),
            max_backoff: Duration::from_secs(30),
        }
    }
}

impl RetryPolicy {
    fn delay(&self, retry: u32) -> Duration {
        self.initial_backoff
            .saturating_mul(1u32.checked_shl(retry).unwrap_or(u32::MAX))
            .min(self.max_backoff)
    }
}

pub struct ChatClient {
    url: String,
    api_key: Option<String>,
    transport: Box<dyn Transport>,
    retry: RetryPolicy,
    timeout: Duration,
}

impl ChatClient {
    /// `endpoint` is the API base, e.g. `https://api.openai.com/v1`.
    pub fn new(endpoint: &str, api_key: Option<String>, transport: Box<dyn Transport>) -> Self {
        Self {
            url: format!("{}/chat/completions", endpoint.trim_end_matches('/')),
            api_key,
            transport,
            retry: RetryPolicy::default(),
            timeout: Duration::from_secs(120),
        }
    }

    pub fn http(endpoint: &str, api_key: Option<String>) -> Self {
        Self::new(endpoint, api_key, Box::new(UreqTransport))
    }

    pub fn with_retry(mut self, retry: RetryPolicy) -> Self {
        self.retry = retry;
        self
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    pub fn url(&self) -> &str {
        &self.url
    }
}

impl ChatCompletion for ChatClient {
    fn complete(&self, request: &ChatRequest) -> Result<ChatResponse, ChatError> {
        if request.messages.is_empty() {
            return Err(ChatError::EmptyRequest);
        }
        let body = request.wire_body();
        let mut attempts = 0;
        loop {
            attempts += 1;
            let result = self
                .transport
                .post(&self.url, self.api_key.as_deref(), &body, self.timeout);
            let retryable = match &result {
                Err(_) => true,
                Ok(r) => r.status == 429 || r.status >= 500,
            };
            if retryable && attempts <= self.retry.max_retries {
                thread::sleep(self.retry.delay(attempts - 1));
                continue;
            }
            return match result {
                Err(message) => Err(ChatError::Transport { attempts, message }),
                Ok(r) if !(200..300).contains(&r.status) => Err(ChatError::Status {
                    status: r.status,
                    attempts,
                    body: r.body,
                }),
                Ok(r) => {
                    let (content, finish_reason, usage) = parse_response_body(&r.body)?;
                    Ok(ChatResponse {
                        content,
                        finish_reason,
                        usage,
                        attempts,
                    })
                }
            };
        }
    }
}

/// Wire response body with `content` as the assistant message.
pub fn response_body(content: &str) -> serde_json::Value {
    serde_json::json!({
        "choices": [{"index": 0, "message": {"role": "assistant", "content": content}, "finish_reason": "stop"}],
        "usage": {"prompt_tokens": 0, "completion_tokens": 0, "total_tokens": 0}
    })
}
