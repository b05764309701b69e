//! Completion clients: a live chat-completion endpoint and an offline replay source.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub const API_KEY_VAR: &str = "MODEL_API_KEY";
pub const DEFAULT_ENDPOINT: &str = "https://api.openai.com/v1/chat/completions";
pub const DEFAULT_MODEL: &str = "gpt-4o-2024-11-20";

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("environment variable {0} is not set")]
    MissingCredentials(&'static str),
    #[error("no recorded response for request {0}")]
    MissingReplay(String),
    #[error("transport: {0}")]
    Transport(String),
    #[error("HTTP {status}: {body}")]
    Status { status: u16, body: String },
    #[error("unexpected response body: {0}")]
    BadResponse(String),
    #[error("replay file line {line}: {message}")]
    BadReplay { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl ClientError {
    fn is_retryable(&self) -> bool {
        match self {
            ClientError::Transport(_) => true,
            ClientError::Status { status, .. } => *status == 429 || *status >= 500,
            _ => false,
        }
    }
}

pub trait ModelClient: Send + Sync {
    fn complete(&self, system: &str, user: &str) -> Result<String, ClientError>;
}

impl<C: ModelClient + ?Sized> ModelClient for &C {
    fn complete(&self, system: &str, user: &str) -> Result<String, ClientError> {
        (**self).complete(system, user)
    }
}

impl<C: ModelClient + ?Sized> ModelClient for Box<C> {
    fn complete(&self, system: &str, user: &str) -> Result<String, ClientError> {
        (**self).complete(system, user)
    }
}

/// Hex SHA-256 over the length-prefixed system and user messages.
pub fn request_digest(system: &str, user: &str) -> String {
    let mut h = Sha256::new();
    for part in [system, user] {
        h.update((part.len() as u64).to_le_bytes());
        h.update(part.as_bytes());
    }
    hex::encode(h.finalize())
}

/// One line of a replay file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayRecord {
    pub digest: String,
    pub response: String,
}

/// Serves recorded responses by request digest.
#[derive(Debug, Clone, Default)]
pub struct ReplayClient {
    responses: HashMap<String, String>,
}

impl ReplayClient {
    pub fn load(path: impl AsRef<Path>) -> Result<ReplayClient, ClientError> {
        Self::read(File::open(path)?)
    }

    /// JSON lines; blank lines are skipped and later records replace earlier ones.
    pub fn read<R: Read>(reader: R) -> Result<ReplayClient, ClientError> {
        let mut responses = HashMap::new();
        for (i, line) in BufReader::new(reader).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: ReplayRecord = serde_json::from_str(&line).map_err(|e| ClientError::BadReplay {
                line: i + 1,
                message: e.to_string(),
            })?;
            responses.insert(rec.digest, rec.response);
        }
        Ok(ReplayClient { responses })
    }

    pub fn from_records(records: impl IntoIterator<Item = ReplayRecord>) -> ReplayClient {
        ReplayClient {
            responses: records.into_iter().map(|r| (r.digest, r.response)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.responses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.responses.is_empty()
    }
}

impl ModelClient for ReplayClient {
    fn complete(&self, system: &str, user: &str) -> Result<String, ClientError> {
        let digest = request_digest(system, user);
        self.responses
            .get(&digest)
            .cloned()
            .ok_or(ClientError::MissingReplay(digest))
    }
}

pub fn write_replay<W: Write>(mut out: W, records: &[ReplayRecord]) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Wraps a client and keeps every successful exchange for a replay file.
pub struct RecordingClient<C> {
    inner: C,
    records: Mutex<Vec<ReplayRecord>>,
}

impl<C: ModelClient> RecordingClient<C> {
    pub fn new(inner: C) -> Self {
        RecordingClient {
            inner,
            records: Mutex::new(Vec::new()),
        }
    }

    /// Records sorted by digest, so files do not depend on completion order.
    pub fn into_records(self) -> Vec<ReplayRecord> {
        let mut r = self.records.into_inner().unwrap_or_else(|e| e.into_inner());
        r.sort_by(|a, b| a.digest.cmp(&b.digest));
        r.dedup_by(|a, b| a.digest == b.digest);
        r
    }
}

impl<C: ModelClient> ModelClient for RecordingClient<C> {
    fn complete(&self, system: &str, user: &str) -> Result<String, ClientError> {
        let response = self.inner.complete(system, user)?;
        self.records
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .push(ReplayRecord {
                digest: request_digest(system, user),
                response: response.clone(),
            });
        Ok(response)
    }
}

#[derive(Debug, Clone)]
pub struct HttpConfig {
    pub endpoint: String,
    pub model: String,
    pub max_retries: u32,
    pub base_delay: Duration,
    pub timeout: Duration,
}

impl Default for HttpConfig {
    fn default() -> Self {
        HttpConfig {
            endpoint: DEFAULT_ENDPOINT.to_string(),
            model: DEFAULT_MODEL.to_string(),
            max_retries: 5,
            base_delay: Duration::from_secs(1),
            timeout: Duration::from_secs(120),
        }
    }
}

/// Chat-completion client with default sampling parameters.
pub struct HttpClient {
    config: HttpConfig,
    api_key: String,
    http: reqwest::blocking::Client,
}

impl HttpClient {
    pub fn new(config: HttpConfig, api_key: String) -> Result<HttpClient, ClientError> {
        let http = reqwest::blocking::Client::builder()
            .timeout(config.timeout)
            .build()
            .map_err(|e| ClientError::Transport(e.to_string()))?;
        Ok(HttpClient { config, api_key, http })
    }

    /// Reads the key from `MODEL_API_KEY`.
    pub fn from_env(config: HttpConfig) -> Result<HttpClient, ClientError> {
        let key = std::env::var(API_KEY_VAR)
            .ok()
            .filter(|k| !k.trim().is_empty())
            .ok_or(ClientError::MissingCredentials(API_KEY_VAR))?;
        Self::new(config, key)
    }

    fn attempt(&self, body: &serde_json::Value) -> Result<String, ClientError> {
        let resp = self
            .http
            .post(&self.config.endpoint)
            .bearer_auth(&self.api_key)
            .json(body)
            .send()
            .map_err(|e| ClientError::Transport(e.to_string()))?;
        let status = resp.status();
        let text = resp.text().map_err(|e| ClientError::Transport(e.to_string()))?;
        if !status.is_success() {
            return Err(ClientError::Status {
                status: status.as_u16(),
                body: text,
            });
        }
        let json: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| ClientError::BadResponse(e.to_string()))?;
        json.pointer("/choices/0/message/content")
            .and_then(|v| v.as_str())
            .map(str::to_string)
            .ok_or(ClientError::BadResponse(text))
    }
}

impl ModelClient for HttpClient {
    fn complete(&self, system: &str, user: &str) -> Result<String, ClientError> {
        let body = serde_json::json!({
            "model": self.config.model,
            "messages": [
                {"role": "system", "content": system},
                {"role": "user", "content": user},
            ],
        });
        let mut attempt = 0;
        loop {
            match self.attempt(&body) {
                Err(e) if e.is_retryable() && attempt < self.config.max_retries => {
                    let delay = self.config.base_delay * 2u32.pow(attempt);
                    log::warn!("request failed ({e}), retrying in {delay:?}");
                    thread::sleep(delay);
                    attempt += 1;
                }
                other => return other,
            }
        }
    }
}
