use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::GameError;
use crate::puzzle::{check_structure, validate_puzzle, Puzzle, Word, WordGroup};

/// Incorrect guesses allowed before the puzzle is failed.
pub const MAX_MISTAKES: u8 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    InProgress,
    Solved,
    Failed,
}

impl Status {
    pub fn is_terminal(self) -> bool {
        self != Status::InProgress
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Correct,
    OneAway,
    Incorrect,
    RejectedDuplicate,
    RejectedInvalid,
}

impl Verdict {
    /// Whether this verdict costs a mistake.
    pub fn is_mistake(self) -> bool {
        matches!(self, Verdict::OneAway | Verdict::Incorrect)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuessResult {
    pub verdict: Verdict,
    /// The group uncovered by a correct guess.
    pub revealed: Option<WordGroup>,
    pub mistakes_after: u8,
}

/// Live state of one board.
#[derive(Clone, Debug)]
pub struct BoardState {
    puzzle: Puzzle,
    remaining: Vec<Word>,
    solved_groups: Vec<WordGroup>,
    revealed_on_failure: Vec<WordGroup>,
    mistakes: u8,
    status: Status,
    rng_seed: u64,
    rng: ChaCha8Rng,
    wrong_guesses: Vec<BTreeSet<Word>>,
}

impl BoardState {
    /// Lays out the 16 words in seeded random order.
    pub fn new(puzzle: Puzzle, rng_seed: u64) -> Result<Self, GameError> {
        check_structure(&puzzle).map_err(|e| GameError::InvalidPuzzle(e.to_string()))?;
        let report = validate_puzzle(&puzzle);
        if !report.is_valid() {
            let msgs: Vec<_> = report.hard_violations.iter().map(|v| v.message.clone()).collect();
            return Err(GameError::InvalidPuzzle(msgs.join("; ")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let mut remaining: Vec<Word> = puzzle.words().cloned().collect();
        remaining.shuffle(&mut rng);
        Ok(BoardState {
            puzzle,
            remaining,
            solved_groups: Vec::new(),
            revealed_on_failure: Vec::new(),
            mistakes: 0,
            status: Status::InProgress,
            rng_seed,
            rng,
            wrong_guesses: Vec::new(),
        })
    }

    pub fn puzzle(&self) -> &Puzzle {
        &self.puzzle
    }

    /// Words still on the grid, in display order.
    pub fn remaining(&self) -> &[Word] {
        &self.remaining
    }

    /// Groups found by the player, in the order found.
    pub fn solved_groups(&self) -> &[WordGroup] {
        &self.solved_groups
    }

    /// Groups uncovered because the player ran out of mistakes.
    pub fn revealed_on_failure(&self) -> &[WordGroup] {
        &self.revealed_on_failure
    }

    pub fn mistakes(&self) -> u8 {
        self.mistakes
    }

    pub fn mistakes_remaining(&self) -> u8 {
        MAX_MISTAKES - self.mistakes
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn rng_seed(&self) -> u64 {
        self.rng_seed
    }

    fn ensure_open(&self) -> Result<(), GameError> {
        if self.status.is_terminal() {
            Err(GameError::SessionClosed)
        } else {
            Ok(())
        }
    }

    /// Evaluates a guess of four words.
    ///
    /// Invalid selections and repeats of an earlier wrong guess are
    /// rejected without changing state.
    pub fn submit_guess(&mut self, guess: &[Word]) -> Result<GuessResult, GameError> {
        self.ensure_open()?;
        let set: BTreeSet<Word> = guess.iter().cloned().collect();
        let valid = guess.len() == 4
            && set.len() == 4
            && set.iter().all(|w| self.remaining.contains(w));
        if !valid {
            return Ok(self.result(Verdict::RejectedInvalid, None));
        }
        if self.wrong_guesses.contains(&set) {
            return Ok(self.result(Verdict::RejectedDuplicate, None));
        }

        let (best, overlap) = self
            .puzzle
            .groups
            .iter()
            .filter(|g| !self.solved_groups.contains(g))
            .map(|g| (g, g.overlap(set.iter())))
            .max_by_key(|(_, n)| *n)
            .expect("an open board has an unsolved group");

        if overlap == 4 {
            let group = best.clone();
            self.remaining.retain(|w| !group.contains(w));
            self.solved_groups.push(group.clone());
            if self.solved_groups.len() == 4 {
                self.status = Status::Solved;
            }
            return Ok(self.result(Verdict::Correct, Some(group)));
        }

        let verdict = if overlap == 3 {
            Verdict::OneAway
        } else {
            Verdict::Incorrect
        };
        self.wrong_guesses.push(set);
        self.mistakes += 1;
        if self.mistakes >= MAX_MISTAKES {
            self.status = Status::Failed;
            self.revealed_on_failure = self
                .puzzle
                .groups
                .iter()
                .filter(|g| !self.solved_groups.contains(g))
                .cloned()
                .collect();
            self.remaining.clear();
        }
        Ok(self.result(verdict, None))
    }

    /// Parses raw strings and submits them; unparseable words make the
    /// guess invalid.
    pub fn submit_guess_strs<S: AsRef<str>>(&mut self, guess: &[S]) -> Result<GuessResult, GameError> {
        self.ensure_open()?;
        let words: Result<Vec<Word>, _> = guess.iter().map(|s| Word::parse(s.as_ref())).collect();
        match words {
            Ok(words) => self.submit_guess(&words),
            Err(_) => Ok(self.result(Verdict::RejectedInvalid, None)),
        }
    }

    /// Permutes the remaining words using the board's RNG stream.
    pub fn shuffle(&mut self) -> Result<(), GameError> {
        self.ensure_open()?;
        self.remaining.shuffle(&mut self.rng);
        Ok(())
    }

    fn result(&self, verdict: Verdict, revealed: Option<WordGroup>) -> GuessResult {
        GuessResult {
            verdict,
            revealed,
            mistakes_after: self.mistakes,
        }
    }

    /// Checks the state invariants; used by tests and replay.
    pub fn check_invariants(&self) -> Result<(), String> {
        if self.mistakes > MAX_MISTAKES {
            return Err(format!("mistakes {} exceed {MAX_MISTAKES}", self.mistakes));
        }
        match self.status {
            Status::InProgress => {
                let expected = 16 - 4 * self.solved_groups.len();
                if self.remaining.len() != expected {
                    return Err(format!("{} words remain, expected {expected}", self.remaining.len()));
                }
                if self.mistakes >= MAX_MISTAKES {
                    return Err("in progress with no mistakes left".into());
                }
            }
            Status::Failed => {
                if self.mistakes != MAX_MISTAKES {
                    return Err("failed without four mistakes".into());
                }
                if self.solved_groups.len() + self.revealed_on_failure.len() != 4 {
                    return Err("failed board does not reveal every group".into());
                }
            }
            Status::Solved => {
                if self.solved_groups.len() != 4 {
                    return Err("solved without four groups".into());
                }
            }
        }
        Ok(())
    }
}
