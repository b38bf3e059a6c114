//! Connections rules engine.
//!
//! A guess of four words is correct when it matches an unsolved group,
//! "one away" when three of the four share a group, and incorrect
//! otherwise. Four mistakes end the game and reveal every group.

mod board;
mod session;

pub use board::{BoardState, GuessResult, Status, Verdict, MAX_MISTAKES};
pub use session::{replay, GameSession, GuessRecord, PlaySession};

#[derive(Debug, thiserror::Error)]
pub enum GameError {
    #[error("invalid puzzle: {0}")]
    InvalidPuzzle(String),
    #[error("the game is already over")]
    SessionClosed,
    #[error("inconsistent session: {0}")]
    InconsistentSession(String),
}
