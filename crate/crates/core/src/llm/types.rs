use std::io::{BufRead, Write};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::LlmError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

impl ChatMessage {
    pub fn system(content: impl Into<String>) -> Self {
        ChatMessage {
            role: Role::System,
            content: content.into(),
        }
    }

    pub fn user(content: impl Into<String>) -> Self {
        ChatMessage {
            role: Role::User,
            content: content.into(),
        }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        ChatMessage {
            role: Role::Assistant,
            content: content.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChatRequest {
    pub model: String,
    pub messages: Vec<ChatMessage>,
    pub temperature: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ChatRequest {
    pub fn validate(&self) -> Result<(), LlmError> {
        if self.messages.is_empty() {
            return Err(LlmError::InvalidRequest("request has no messages".into()));
        }
        if let Some(i) = self.messages.iter().position(|m| m.content.trim().is_empty()) {
            return Err(LlmError::InvalidRequest(format!("message {i} is empty")));
        }
        if let Some(i) = self.messages.iter().skip(1).position(|m| m.role == Role::System) {
            return Err(LlmError::InvalidRequest(format!(
                "system message must come first, found one at {}",
                i + 1
            )));
        }
        if self.temperature.is_nan() || self.temperature < 0.0 {
            return Err(LlmError::InvalidRequest("temperature must be >= 0".into()));
        }
        Ok(())
    }

    /// Content of the last user message, if any.
    pub fn last_user_message(&self) -> Option<&str> {
        self.messages
            .iter()
            .rev()
            .find(|m| m.role == Role::User)
            .map(|m| m.content.as_str())
    }
}

/// One attempt at a chat completion, successful or not.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChatExchange {
    pub request: ChatRequest,
    pub response_text: String,
    pub latency_ms: u64,
    pub attempt: u32,
    pub started_at: DateTime<Utc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ChatExchange {
    pub fn succeeded(&self) -> bool {
        self.error.is_none()
    }
}

/// Ordered record of every exchange behind one pipeline run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineTranscript {
    pub id: String,
    pub created_at: DateTime<Utc>,
    exchanges: Vec<ChatExchange>,
}

impl PipelineTranscript {
    pub fn new(id: impl Into<String>, created_at: DateTime<Utc>) -> Self {
        PipelineTranscript {
            id: id.into(),
            created_at,
            exchanges: Vec::new(),
        }
    }

    pub fn push(&mut self, exchange: ChatExchange) {
        self.exchanges.push(exchange);
    }

    pub fn exchanges(&self) -> &[ChatExchange] {
        &self.exchanges
    }

    pub fn len(&self) -> usize {
        self.exchanges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exchanges.is_empty()
    }

    /// Writes one exchange per line.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for e in &self.exchanges {
            serde_json::to_writer(&mut out, e)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("serde_json emits UTF-8")
    }

    /// Reads a JSONL transcript. `created_at` is taken from the first
    /// exchange, or `fallback` when the file is empty.
    pub fn read_jsonl<R: BufRead>(
        id: impl Into<String>,
        input: R,
        fallback: DateTime<Utc>,
    ) -> Result<Self, LlmError> {
        let mut exchanges = Vec::new();
        for (n, line) in input.lines().enumerate() {
            let line = line.map_err(|e| LlmError::Transcript(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let e: ChatExchange = serde_json::from_str(&line)
                .map_err(|e| LlmError::Transcript(format!("line {}: {e}", n + 1)))?;
            exchanges.push(e);
        }
        let created_at = exchanges.first().map(|e| e.started_at).unwrap_or(fallback);
        Ok(PipelineTranscript {
            id: id.into(),
            created_at,
            exchanges,
        })
    }
}
