use std::sync::Arc;
use std::time::Duration;

use chrono::{DateTime, Utc};
use rand::Rng;

use super::provider::{EMPTY_TEXT, EXHAUSTED};
use super::{ChatExchange, ChatMessage, ChatProvider, ChatRequest, LlmError, PipelineTranscript, ProviderError};

/// Time source; swapped for a fixed clock to make transcripts reproducible.
pub trait Clock: Send + Sync {
    fn now(&self) -> DateTime<Utc>;
    fn sleep(&self, duration: Duration);
}

pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> DateTime<Utc> {
        Utc::now()
    }

    fn sleep(&self, duration: Duration) {
        std::thread::sleep(duration);
    }
}

/// Always reports the same instant and never sleeps.
pub struct FixedClock(pub DateTime<Utc>);

impl FixedClock {
    pub fn epoch() -> Self {
        FixedClock(DateTime::<Utc>::UNIX_EPOCH)
    }
}

impl Clock for FixedClock {
    fn now(&self) -> DateTime<Utc> {
        self.0
    }

    fn sleep(&self, _duration: Duration) {}
}

/// Exponential backoff: the delay after failed attempt `n` is
/// `base_delay * 2^(n-1)`, scaled by a uniform factor in `1 ± jitter`.
#[derive(Clone, Debug)]
pub struct RetryPolicy {
    /// Total attempts per request, including the first.
    pub max_attempts: u32,
    pub base_delay: Duration,
    pub jitter: f64,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            max_attempts: 3,
            base_delay: Duration::from_secs(1),
            jitter: 0.2,
        }
    }
}

impl RetryPolicy {
    pub fn no_delay(max_attempts: u32) -> Self {
        RetryPolicy {
            max_attempts,
            base_delay: Duration::ZERO,
            jitter: 0.0,
        }
    }

    pub fn delay_after(&self, failed_attempt: u32) -> Duration {
        let exp = 2f64.powi(failed_attempt.saturating_sub(1) as i32);
        let factor = if self.jitter > 0.0 {
            rand::rng().random_range((1.0 - self.jitter)..=(1.0 + self.jitter))
        } else {
            1.0
        };
        self.base_delay.mul_f64(exp * factor)
    }
}

#[derive(Clone, Debug)]
pub struct GatewayConfig {
    pub model: String,
    pub temperature: f64,
    pub retry: RetryPolicy,
}

impl Default for GatewayConfig {
    fn default() -> Self {
        GatewayConfig {
            model: "gpt-4-1106-preview".into(),
            temperature: 1.0,
            retry: RetryPolicy::default(),
        }
    }
}

/// Entry point for every completion the pipeline makes.
pub struct Gateway {
    provider: Arc<dyn ChatProvider>,
    config: GatewayConfig,
    clock: Arc<dyn Clock>,
}

impl Gateway {
    pub fn new(provider: Arc<dyn ChatProvider>, config: GatewayConfig, clock: Arc<dyn Clock>) -> Self {
        Gateway {
            provider,
            config,
            clock,
        }
    }

    /// Gateway over a provider with a fixed clock and no backoff delay,
    /// for replayable runs.
    pub fn deterministic(provider: Arc<dyn ChatProvider>) -> Self {
        let config = GatewayConfig {
            retry: RetryPolicy::no_delay(3),
            ..GatewayConfig::default()
        };
        Gateway::new(provider, config, Arc::new(FixedClock::epoch()))
    }

    pub fn config(&self) -> &GatewayConfig {
        &self.config
    }

    pub fn now(&self) -> DateTime<Utc> {
        self.clock.now()
    }

    /// Builds a request with the configured model and temperature.
    pub fn request(&self, messages: Vec<ChatMessage>, seed: Option<u64>) -> ChatRequest {
        ChatRequest {
            model: self.config.model.clone(),
            messages,
            temperature: self.config.temperature,
            seed,
        }
    }

    /// Sends `request`, retrying transient failures, and appends every
    /// attempt to `transcript`.
    pub fn complete(
        &self,
        request: ChatRequest,
        transcript: &mut PipelineTranscript,
    ) -> Result<ChatExchange, LlmError> {
        request.validate()?;
        let max = self.config.retry.max_attempts.max(1);
        let mut attempt = 1;
        loop {
            let started_at = self.clock.now();
            let result = self.provider.send(&request);
            let latency_ms = (self.clock.now() - started_at).num_milliseconds().max(0) as u64;
            let mut exchange = ChatExchange {
                request: request.clone(),
                response_text: String::new(),
                latency_ms,
                attempt,
                started_at,
                error: None,
            };
            match result {
                Ok(text) if text.trim().is_empty() => {
                    exchange.error = Some(EMPTY_TEXT.into());
                    transcript.push(exchange);
                    return Err(LlmError::MalformedResponse(EMPTY_TEXT.into()));
                }
                Ok(text) => {
                    exchange.response_text = text;
                    transcript.push(exchange.clone());
                    return Ok(exchange);
                }
                Err(ProviderError::Transient(reason)) => {
                    exchange.error = Some(reason.clone());
                    transcript.push(exchange);
                    if attempt >= max {
                        return Err(LlmError::ProviderUnavailable { attempts: attempt, reason });
                    }
                    log::warn!("attempt {attempt} failed ({reason}); retrying");
                    self.clock.sleep(self.config.retry.delay_after(attempt));
                    attempt += 1;
                }
                Err(ProviderError::Exhausted) => {
                    exchange.error = Some(EXHAUSTED.into());
                    transcript.push(exchange);
                    return Err(LlmError::ProviderUnavailable {
                        attempts: attempt,
                        reason: EXHAUSTED.into(),
                    });
                }
                Err(ProviderError::Fatal(reason)) => {
                    exchange.error = Some(reason.clone());
                    transcript.push(exchange);
                    return Err(LlmError::Fatal(reason));
                }
            }
        }
    }
}
