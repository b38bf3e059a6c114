//! HTTP study server: issues one AI and one published puzzle per
//! participant in random order, plays both boards server-side, and records
//! pairs, guesses, finished sessions and surveys as append-only JSONL.
//!
//! See `docs/api.md` for the wire format.

pub mod api;
mod error;
pub mod store;
pub mod study;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use connections_core::llm::{Clock, SystemClock};
use connections_core::puzzle::load_puzzle_dir;
use tokio::net::TcpListener;

pub use api::{router, GuessRequest, ShuffleRequest, SharedStudy, TOKEN_HEADER};
pub use error::{ErrorBody, ServerError};
pub use study::{BoardView, GroupView, GuessReply, Health, IssuedPair, SlotSource, Study, SurveyAck};

#[derive(Clone, Debug)]
pub struct ServeConfig {
    pub puzzles: PathBuf,
    pub data: PathBuf,
    pub addr: SocketAddr,
    pub seed: u64,
}

/// Opens the study described by `cfg` with the system clock.
pub fn open_study(cfg: &ServeConfig) -> Result<Study, ServerError> {
    let puzzles = load_puzzle_dir(&cfg.puzzles).map_err(|e| ServerError::Puzzles(e.to_string()))?;
    let clock: Arc<dyn Clock> = Arc::new(SystemClock);
    Study::open(puzzles, &cfg.data, cfg.seed, clock)
}

/// Serves until ctrl-c.
pub async fn serve(cfg: ServeConfig) -> Result<(), ServerError> {
    let study = open_study(&cfg)?;
    let listener = TcpListener::bind(cfg.addr)
        .await
        .map_err(|e| ServerError::Internal(format!("bind {}: {e}", cfg.addr)))?;
    log::info!("listening on {}", cfg.addr);
    axum::serve(listener, router(Arc::new(Mutex::new(study))))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|e| ServerError::Internal(e.to_string()))
}
