use std::collections::{HashMap, VecDeque};
use std::sync::{Condvar, Mutex};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{ChatRequest, LlmError, PipelineTranscript};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProviderError {
    /// Worth retrying: rate limits, 5xx, dropped connections.
    #[error("transient provider failure: {0}")]
    Transient(String),
    /// A scripted provider ran out of replies.
    #[error("no scripted reply left")]
    Exhausted,
    #[error("provider rejected the request: {0}")]
    Fatal(String),
}

/// Backend that turns a chat request into assistant text.
pub trait ChatProvider: Send + Sync {
    fn send(&self, request: &ChatRequest) -> Result<String, ProviderError>;
}

/// A canned reply for [`ScriptedProvider`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScriptedReply {
    Text(String),
    Fail { fail: String },
}

impl From<&str> for ScriptedReply {
    fn from(s: &str) -> Self {
        ScriptedReply::Text(s.to_owned())
    }
}

impl From<String> for ScriptedReply {
    fn from(s: String) -> Self {
        ScriptedReply::Text(s)
    }
}

#[derive(Default, Serialize, Deserialize)]
struct ScriptDoc {
    #[serde(default)]
    fifo: Vec<ScriptedReply>,
    #[serde(default)]
    keyed: HashMap<String, Vec<ScriptedReply>>,
}

#[derive(Default)]
struct Script {
    fifo: VecDeque<ScriptedReply>,
    keyed: HashMap<String, VecDeque<ScriptedReply>>,
}

/// Deterministic provider replaying canned replies.
///
/// Replies keyed by the hash of the request's last user message take
/// priority; otherwise replies are consumed first-in first-out.
#[derive(Default)]
pub struct ScriptedProvider {
    script: Mutex<Script>,
}

impl ScriptedProvider {
    pub fn new<I, R>(replies: I) -> Self
    where
        I: IntoIterator<Item = R>,
        R: Into<ScriptedReply>,
    {
        ScriptedProvider {
            script: Mutex::new(Script {
                fifo: replies.into_iter().map(Into::into).collect(),
                keyed: HashMap::new(),
            }),
        }
    }

    /// Hex SHA-256 of a user message, the key used for keyed replies.
    pub fn key_for(user_message: &str) -> String {
        let digest = Sha256::digest(user_message.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn push(&self, reply: impl Into<ScriptedReply>) {
        self.script.lock().unwrap().fifo.push_back(reply.into());
    }

    pub fn push_keyed(&self, user_message: &str, reply: impl Into<ScriptedReply>) {
        self.script
            .lock()
            .unwrap()
            .keyed
            .entry(Self::key_for(user_message))
            .or_default()
            .push_back(reply.into());
    }

    pub fn remaining(&self) -> usize {
        let s = self.script.lock().unwrap();
        s.fifo.len() + s.keyed.values().map(VecDeque::len).sum::<usize>()
    }

    /// Parses a script file: either a JSON array of replies, or
    /// `{"fifo": [...], "keyed": {"<sha256>": [...]}}`. A reply is a string
    /// or `{"fail": "reason"}` for a transient failure.
    pub fn from_json(text: &str) -> Result<Self, LlmError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| LlmError::Script(e.to_string()))?;
        let doc: ScriptDoc = if value.is_array() {
            ScriptDoc {
                fifo: serde_json::from_value(value).map_err(|e| LlmError::Script(e.to_string()))?,
                keyed: HashMap::new(),
            }
        } else {
            serde_json::from_value(value).map_err(|e| LlmError::Script(e.to_string()))?
        };
        Ok(ScriptedProvider {
            script: Mutex::new(Script {
                fifo: doc.fifo.into(),
                keyed: doc
                    .keyed
                    .into_iter()
                    .map(|(k, v)| (k, v.into()))
                    .collect(),
            }),
        })
    }

    /// Replays the replies recorded in a transcript, failed attempts
    /// included, so a run can be reproduced from its transcript and seed.
    pub fn from_transcript(transcript: &PipelineTranscript) -> Self {
        let replies = transcript.exchanges().iter().filter_map(|ex| match &ex.error {
            None => Some(ScriptedReply::Text(ex.response_text.clone())),
            Some(e) if e == EMPTY_TEXT => Some(ScriptedReply::Text(String::new())),
            Some(e) if e == EXHAUSTED => None,
            Some(e) => Some(ScriptedReply::Fail { fail: e.clone() }),
        });
        ScriptedProvider::new(replies)
    }
}

pub(crate) const EMPTY_TEXT: &str = "empty assistant text";
pub(crate) const EXHAUSTED: &str = "scripted replies exhausted";

impl ChatProvider for ScriptedProvider {
    fn send(&self, request: &ChatRequest) -> Result<String, ProviderError> {
        let mut script = self.script.lock().unwrap();
        let keyed = request
            .last_user_message()
            .map(Self::key_for)
            .and_then(|k| script.keyed.get_mut(&k))
            .and_then(VecDeque::pop_front);
        let reply = match keyed {
            Some(r) => r,
            None => script.fifo.pop_front().ok_or(ProviderError::Exhausted)?,
        };
        match reply {
            ScriptedReply::Text(t) => Ok(t),
            ScriptedReply::Fail { fail } => Err(ProviderError::Transient(fail)),
        }
    }
}

/// Counting semaphore bounding in-flight remote calls.
struct Semaphore {
    permits: Mutex<usize>,
    cv: Condvar,
}

impl Semaphore {
    fn new(n: usize) -> Self {
        Semaphore {
            permits: Mutex::new(n.max(1)),
            cv: Condvar::new(),
        }
    }

    fn acquire(&self) -> SemaphoreGuard<'_> {
        let mut p = self.permits.lock().unwrap();
        while *p == 0 {
            p = self.cv.wait(p).unwrap();
        }
        *p -= 1;
        SemaphoreGuard(self)
    }
}

struct SemaphoreGuard<'a>(&'a Semaphore);

impl Drop for SemaphoreGuard<'_> {
    fn drop(&mut self) {
        *self.0.permits.lock().unwrap() += 1;
        self.0.cv.notify_one();
    }
}

#[derive(Deserialize)]
struct CompletionResponse {
    choices: Vec<Choice>,
}

#[derive(Deserialize)]
struct Choice {
    message: ChoiceMessage,
}

#[derive(Deserialize)]
struct ChoiceMessage {
    #[serde(default)]
    content: Option<String>,
}

/// Chat-completions client over HTTP(S).
pub struct RemoteProvider {
    endpoint: String,
    api_key: Option<String>,
    agent: ureq::Agent,
    in_flight: Semaphore,
}

impl RemoteProvider {
    pub const DEFAULT_CONCURRENCY: usize = 2;

    pub fn new(endpoint: impl Into<String>, api_key: Option<String>) -> Self {
        Self::with_concurrency(endpoint, api_key, Self::DEFAULT_CONCURRENCY)
    }

    pub fn with_concurrency(endpoint: impl Into<String>, api_key: Option<String>, cap: usize) -> Self {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .timeout_global(Some(Duration::from_secs(300)))
            .build()
            .into();
        RemoteProvider {
            endpoint: endpoint.into(),
            api_key,
            agent,
            in_flight: Semaphore::new(cap),
        }
    }

    /// Reads `LLM_ENDPOINT` and `LLM_API_KEY`.
    pub fn from_env() -> Option<Self> {
        let endpoint = std::env::var("LLM_ENDPOINT").ok()?;
        Some(Self::new(endpoint, std::env::var("LLM_API_KEY").ok()))
    }
}

impl ChatProvider for RemoteProvider {
    fn send(&self, request: &ChatRequest) -> Result<String, ProviderError> {
        let _permit = self.in_flight.acquire();
        let mut req = self.agent.post(&self.endpoint);
        if let Some(key) = &self.api_key {
            req = req.header("Authorization", &format!("Bearer {key}"));
        }
        let mut resp = req
            .send_json(request)
            .map_err(|e| ProviderError::Transient(e.to_string()))?;
        let status = resp.status().as_u16();
        if status == 429 || status >= 500 {
            return Err(ProviderError::Transient(format!("HTTP {status}")));
        }
        if !(200..300).contains(&status) {
            let body = resp.body_mut().read_to_string().unwrap_or_default();
            return Err(ProviderError::Fatal(format!("HTTP {status}: {body}")));
        }
        let parsed: CompletionResponse = resp
            .body_mut()
            .read_json()
            .map_err(|e| ProviderError::Fatal(format!("unreadable completion: {e}")))?;
        Ok(parsed
            .choices
            .into_iter()
            .next()
            .and_then(|c| c.message.content)
            .unwrap_or_default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::llm::ChatMessage;

    fn req(user: &str) -> ChatRequest {
        ChatRequest {
            model: "m".into(),
            messages: vec![ChatMessage::user(user)],
            temperature: 1.0,
            seed: None,
        }
    }

    #[test]
    fn fifo_order() {
        let p = ScriptedProvider::new(["A", "B"]);
        assert_eq!(p.send(&req("x")).unwrap(), "A");
        assert_eq!(p.send(&req("x")).unwrap(), "B");
        assert_eq!(p.send(&req("x")), Err(ProviderError::Exhausted));
    }

    #[test]
    fn keyed_replies_win() {
        let p = ScriptedProvider::new(["fifo"]);
        p.push_keyed("special", "keyed");
        assert_eq!(p.send(&req("special")).unwrap(), "keyed");
        assert_eq!(p.send(&req("special")).unwrap(), "fifo");
    }

    #[test]
    fn script_file_forms() {
        let p = ScriptedProvider::from_json(r#"["a", {"fail": "429"}]"#).unwrap();
        assert_eq!(p.remaining(), 2);
        p.send(&req("x")).unwrap();
        assert!(matches!(p.send(&req("x")), Err(ProviderError::Transient(_))));
        let key = ScriptedProvider::key_for("hello");
        let p = ScriptedProvider::from_json(&format!(r#"{{"keyed": {{"{key}": ["hi"]}}}}"#)).unwrap();
        assert_eq!(p.send(&req("hello")).unwrap(), "hi");
    }
}
