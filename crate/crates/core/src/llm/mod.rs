//! Chat-completion gateway.
//!
//! [`Gateway`] wraps a [`ChatProvider`] (remote HTTP or scripted) with
//! retries and records every attempt into a [`PipelineTranscript`].

mod gateway;
mod parse;
mod provider;
mod types;

pub use gateway::{Clock, FixedClock, Gateway, GatewayConfig, RetryPolicy, SystemClock};
pub use parse::{extract_labeled_block, labeled, split_list, LabeledBlock};
pub use provider::{ChatProvider, ProviderError, RemoteProvider, ScriptedProvider, ScriptedReply};
pub use types::{ChatExchange, ChatMessage, ChatRequest, PipelineTranscript, Role};

#[derive(Debug, thiserror::Error)]
pub enum LlmError {
    #[error("provider unavailable after {attempts} attempt(s): {reason}")]
    ProviderUnavailable { attempts: u32, reason: String },
    #[error("malformed response: {0}")]
    MalformedResponse(String),
    #[error("provider error: {0}")]
    Fatal(String),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("label {0} not found in response")]
    LabelMissing(String),
    #[error("transcript: {0}")]
    Transcript(String),
    #[error("script: {0}")]
    Script(String),
}
