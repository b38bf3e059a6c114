use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::{BoardState, GameError, GuessResult, Status, Verdict};
use crate::puzzle::Puzzle;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GuessRecord {
    pub words: Vec<String>,
    pub verdict: Verdict,
    pub t: DateTime<Utc>,
}

/// The logged play of one puzzle, stored one per line in JSONL.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaySession {
    pub session_id: String,
    pub puzzle_id: String,
    pub guesses: Vec<GuessRecord>,
    pub solved: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub completed_at: Option<DateTime<Utc>>,
}

impl PlaySession {
    pub fn new(session_id: impl Into<String>, puzzle_id: impl Into<String>) -> Self {
        PlaySession {
            session_id: session_id.into(),
            puzzle_id: puzzle_id.into(),
            guesses: Vec::new(),
            solved: false,
            completed_at: None,
        }
    }

    /// Number of guesses that cost a mistake.
    pub fn mistakes(&self) -> usize {
        self.guesses.iter().filter(|g| g.verdict.is_mistake()).count()
    }
}

/// A board plus the log of how it was played.
#[derive(Clone, Debug)]
pub struct GameSession {
    board: BoardState,
    log: PlaySession,
}

impl GameSession {
    pub fn new(session_id: impl Into<String>, puzzle: Puzzle, rng_seed: u64) -> Result<Self, GameError> {
        let log = PlaySession::new(session_id, puzzle.id.clone());
        Ok(GameSession {
            board: BoardState::new(puzzle, rng_seed)?,
            log,
        })
    }

    pub fn board(&self) -> &BoardState {
        &self.board
    }

    pub fn log(&self) -> &PlaySession {
        &self.log
    }

    pub fn into_log(self) -> PlaySession {
        self.log
    }

    pub fn guess<S: AsRef<str>>(&mut self, words: &[S], at: DateTime<Utc>) -> Result<GuessResult, GameError> {
        let result = self.board.submit_guess_strs(words)?;
        self.log.guesses.push(GuessRecord {
            words: words.iter().map(|w| w.as_ref().trim().to_owned()).collect(),
            verdict: result.verdict,
            t: at,
        });
        if self.board.status().is_terminal() {
            self.log.solved = self.board.status() == Status::Solved;
            self.log.completed_at = Some(at);
        }
        Ok(result)
    }

    pub fn shuffle(&mut self) -> Result<(), GameError> {
        self.board.shuffle()
    }
}

/// Re-plays a logged session against its puzzle, checking every verdict.
pub fn replay(session: &PlaySession, puzzle: &Puzzle) -> Result<BoardState, GameError> {
    let inconsistent = |m: String| GameError::InconsistentSession(m);
    if session.puzzle_id != puzzle.id {
        return Err(inconsistent(format!(
            "session is for puzzle {}, got {}",
            session.puzzle_id, puzzle.id
        )));
    }
    let mut board = BoardState::new(puzzle.clone(), 0)?;
    for (i, g) in session.guesses.iter().enumerate() {
        let result = board
            .submit_guess_strs(&g.words)
            .map_err(|_| inconsistent(format!("guess {i} comes after the game ended")))?;
        if result.verdict != g.verdict {
            return Err(inconsistent(format!(
                "guess {i} logged as {:?} but evaluates to {:?}",
                g.verdict, result.verdict
            )));
        }
    }
    let solved = board.status() == Status::Solved;
    if solved != session.solved {
        return Err(inconsistent(format!(
            "session says solved={} but replay ends {:?}",
            session.solved,
            board.status()
        )));
    }
    Ok(board)
}
