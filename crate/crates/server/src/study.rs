//! Server-side study state. The game engine here is authoritative; the
//! HTTP layer only translates requests into these calls.

use std::collections::{HashMap, HashSet};
use std::path::Path;
use std::sync::Arc;

use connections_core::analysis::{PuzzlePair, SlotOrder, SurveyResponse};
use connections_core::game::{BoardState, GameError, GameSession, Status, Verdict};
use connections_core::llm::Clock;
use connections_core::{Color, Puzzle, Source, WordGroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::store::{BoardEvent, JsonlStore, Log, PairRecord};
use crate::ServerError;

/// A group as shown once it has been revealed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupView {
    pub category: String,
    pub words: Vec<String>,
    pub color: Option<Color>,
}

impl From<&WordGroup> for GroupView {
    fn from(g: &WordGroup) -> Self {
        GroupView {
            category: g.category.clone(),
            words: g.words.iter().map(|w| w.as_str().to_owned()).collect(),
            color: g.color,
        }
    }
}

/// What a client may know about one board. `solution` is present only
/// once the board is finished.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoardView {
    pub slot: u8,
    pub words: Vec<String>,
    pub solved: Vec<GroupView>,
    pub mistakes_remaining: u8,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<Vec<GroupView>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IssuedPair {
    pub token: String,
    pub pair_id: String,
    pub boards: Vec<BoardView>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuessReply {
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub revealed: Option<GroupView>,
    pub board: BoardView,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotSource {
    pub slot: u8,
    pub puzzle_id: String,
    pub source: Source,
}

/// Survey acknowledgement; this is where puzzle sources are disclosed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyAck {
    pub pair_id: String,
    pub sources: Vec<SlotSource>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub ai_puzzles: usize,
    pub nyt_puzzles: usize,
    pub pairs_issued: u64,
    pub surveys: usize,
}

struct PairState {
    record: PairRecord,
    boards: [GameSession; 2],
    logged: [bool; 2],
    surveyed: bool,
}

impl PairState {
    fn board_mut(&mut self, slot: u8) -> Result<&mut GameSession, ServerError> {
        match slot {
            1 | 2 => Ok(&mut self.boards[slot as usize - 1]),
            _ => Err(ServerError::BadSlot(slot)),
        }
    }

    fn board(&self, slot: u8) -> Result<&GameSession, ServerError> {
        match slot {
            1 | 2 => Ok(&self.boards[slot as usize - 1]),
            _ => Err(ServerError::BadSlot(slot)),
        }
    }
}

/// Choices made for the issuance with index `issuance`; depends only on
/// the server seed and that index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairDraw {
    pub ai_index: usize,
    pub nyt_index: usize,
    pub slot_order: SlotOrder,
    pub board_seeds: [u64; 2],
}

pub fn draw_pair(seed: u64, issuance: u64, ai_len: usize, nyt_len: usize) -> PairDraw {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(issuance);
    PairDraw {
        ai_index: rng.random_range(0..ai_len),
        nyt_index: rng.random_range(0..nyt_len),
        slot_order: if rng.random_bool(0.5) { SlotOrder::AiFirst } else { SlotOrder::NytFirst },
        board_seeds: [rng.random(), rng.random()],
    }
}

/// Fresh unguessable 128-bit token, hex encoded.
pub fn new_token() -> String {
    format!("{:032x}", rand::rng().random::<u128>())
}

pub struct Study {
    ai: Vec<Puzzle>,
    nyt: Vec<Puzzle>,
    seed: u64,
    store: JsonlStore,
    clock: Arc<dyn Clock>,
    pairs: HashMap<String, PairState>,
    surveys: usize,
}

impl Study {
    /// Loads the puzzle set and rebuilds every pair recorded in `data_dir`.
    pub fn open(
        puzzles: Vec<Puzzle>,
        data_dir: impl AsRef<Path>,
        seed: u64,
        clock: Arc<dyn Clock>,
    ) -> Result<Self, ServerError> {
        let mut ids = HashSet::new();
        for p in &puzzles {
            if !ids.insert(p.id.clone()) {
                return Err(ServerError::Puzzles(format!("duplicate puzzle id {}", p.id)));
            }
            BoardState::new(p.clone(), 0).map_err(|e| ServerError::Puzzles(format!("{}: {e}", p.id)))?;
        }
        let (nyt, ai): (Vec<Puzzle>, Vec<Puzzle>) = puzzles.into_iter().partition(|p| p.source == Source::Nyt);
        let store = JsonlStore::open(data_dir)?;
        let mut study = Study {
            ai,
            nyt,
            seed,
            store,
            clock,
            pairs: HashMap::new(),
            surveys: 0,
        };
        study.recover()?;
        Ok(study)
    }

    fn find(&self, id: &str) -> Option<&Puzzle> {
        self.ai.iter().chain(&self.nyt).find(|p| p.id == id)
    }

    fn build(&self, record: PairRecord) -> Result<PairState, ServerError> {
        let pair = &record.pair;
        let mut boards = Vec::with_capacity(2);
        for slot in 1..=2u8 {
            let id = pair.puzzle_in_slot(slot).expect("slots 1 and 2 exist");
            let puzzle = self
                .find(id)
                .ok_or_else(|| ServerError::Corrupt(format!("pair {} uses unknown puzzle {id}", pair.pair_id)))?;
            let session_id = format!("{}-{slot}", pair.pair_id);
            let game = GameSession::new(session_id, puzzle.clone(), record.board_seeds[slot as usize - 1])
                .map_err(|e| ServerError::Puzzles(e.to_string()))?;
            boards.push(game);
        }
        let boards: [GameSession; 2] = boards.try_into().map_err(|_| ServerError::Internal("two boards".into()))?;
        Ok(PairState {
            record,
            boards,
            logged: [false; 2],
            surveyed: false,
        })
    }

    fn recover(&mut self) -> Result<(), ServerError> {
        let snap = self.store.load()?;
        let mut by_pair: HashMap<String, String> = HashMap::new();
        for rec in snap.pairs {
            by_pair.insert(rec.pair.pair_id.clone(), rec.pair.issued_to.clone());
            let state = self.build(rec)?;
            self.pairs.insert(state.record.pair.issued_to.clone(), state);
        }
        fn state_for<'a>(
            pairs: &'a mut HashMap<String, PairState>,
            by_pair: &HashMap<String, String>,
            pair_id: &str,
        ) -> Result<&'a mut PairState, ServerError> {
            by_pair
                .get(pair_id)
                .and_then(|tok| pairs.get_mut(tok))
                .ok_or_else(|| ServerError::Corrupt(format!("record for unknown pair {pair_id}")))
        }
        for ev in &snap.events {
            let (pair_id, slot) = ev.target();
            let board = state_for(&mut self.pairs, &by_pair, pair_id)?.board_mut(slot)?;
            match ev {
                BoardEvent::Guess { words, verdict, t, .. } => {
                    let r = board
                        .guess(words, *t)
                        .map_err(|e| ServerError::Corrupt(format!("pair {pair_id} slot {slot}: {e}")))?;
                    if r.verdict != *verdict {
                        return Err(ServerError::Corrupt(format!(
                            "pair {pair_id} slot {slot}: logged {verdict:?}, replayed {:?}",
                            r.verdict
                        )));
                    }
                }
                BoardEvent::Shuffle { .. } => {
                    board
                        .shuffle()
                        .map_err(|e| ServerError::Corrupt(format!("pair {pair_id} slot {slot}: {e}")))?;
                }
            }
        }
        for s in &snap.sessions {
            let (pair_id, slot) = s
                .session_id
                .rsplit_once('-')
                .and_then(|(p, n)| Some((p, n.parse::<u8>().ok()?)))
                .ok_or_else(|| ServerError::Corrupt(format!("bad session id {}", s.session_id)))?;
            let state = state_for(&mut self.pairs, &by_pair, pair_id)?;
            state.board(slot)?;
            state.logged[slot as usize - 1] = true;
        }
        for r in &snap.surveys {
            state_for(&mut self.pairs, &by_pair, &r.session_pair_id)?.surveyed = true;
            self.surveys += 1;
        }
        // a crash between the final guess and its session record
        let tokens: Vec<String> = self.pairs.keys().cloned().collect();
        for tok in tokens {
            for slot in 1..=2u8 {
                self.log_if_finished(&tok, slot)?;
            }
        }
        Ok(())
    }

    fn log_if_finished(&mut self, token: &str, slot: u8) -> Result<(), ServerError> {
        let state = self.pairs.get(token).ok_or(ServerError::UnknownToken)?;
        let i = slot as usize - 1;
        if state.logged[i] || !state.boards[i].board().status().is_terminal() {
            return Ok(());
        }
        let log = state.boards[i].log().clone();
        self.store.append(Log::Sessions, &log)?;
        self.pairs.get_mut(token).expect("checked above").logged[i] = true;
        Ok(())
    }

    pub fn pairs_issued(&self) -> u64 {
        self.pairs.len() as u64
    }

    pub fn health(&self) -> Health {
        Health {
            status: "ok".into(),
            ai_puzzles: self.ai.len(),
            nyt_puzzles: self.nyt.len(),
            pairs_issued: self.pairs_issued(),
            surveys: self.surveys,
        }
    }

    /// Samples and records a new pair.
    pub fn issue_pair(&mut self) -> Result<IssuedPair, ServerError> {
        if self.ai.is_empty() {
            return Err(ServerError::EmptyPool("AI"));
        }
        if self.nyt.is_empty() {
            return Err(ServerError::EmptyPool("published"));
        }
        let issuance = self.pairs_issued();
        let d = draw_pair(self.seed, issuance, self.ai.len(), self.nyt.len());
        let token = new_token();
        let record = PairRecord {
            pair: PuzzlePair {
                pair_id: format!("pair-{issuance:06}"),
                ai_puzzle_id: self.ai[d.ai_index].id.clone(),
                nyt_puzzle_id: self.nyt[d.nyt_index].id.clone(),
                slot_order: d.slot_order,
                issued_to: token.clone(),
                issued_at: Some(self.clock.now()),
            },
            issuance,
            board_seeds: d.board_seeds,
        };
        let state = self.build(record)?;
        self.store.append(Log::Pairs, &state.record)?;
        let out = IssuedPair {
            token: token.clone(),
            pair_id: state.record.pair.pair_id.clone(),
            boards: vec![view(&state, 1), view(&state, 2)],
        };
        self.pairs.insert(token, state);
        Ok(out)
    }

    fn state(&self, token: &str) -> Result<&PairState, ServerError> {
        self.pairs.get(token).ok_or(ServerError::UnknownToken)
    }

    pub fn board(&self, token: &str, slot: u8) -> Result<BoardView, ServerError> {
        let state = self.state(token)?;
        state.board(slot)?;
        Ok(view(state, slot))
    }

    /// The pair issued to `token`, for tests and tooling.
    pub fn pair(&self, token: &str) -> Result<&PuzzlePair, ServerError> {
        Ok(&self.state(token)?.record.pair)
    }

    pub fn guess(&mut self, token: &str, slot: u8, words: &[String]) -> Result<GuessReply, ServerError> {
        let now = self.clock.now();
        let state = self.pairs.get(token).ok_or(ServerError::UnknownToken)?;
        // apply to a copy, persist, then commit
        let mut next = state.board(slot)?.clone();
        let result = next.guess(words, now).map_err(game_error)?;
        let event = BoardEvent::Guess {
            pair_id: state.record.pair.pair_id.clone(),
            slot,
            words: next.log().guesses.last().expect("just pushed").words.clone(),
            verdict: result.verdict,
            t: now,
        };
        self.store.append(Log::Events, &event)?;
        let state = self.pairs.get_mut(token).expect("checked above");
        *state.board_mut(slot)? = next;
        self.log_if_finished(token, slot)?;
        let state = self.state(token)?;
        Ok(GuessReply {
            verdict: result.verdict,
            revealed: result.revealed.as_ref().map(GroupView::from),
            board: view(state, slot),
        })
    }

    pub fn shuffle(&mut self, token: &str, slot: u8) -> Result<BoardView, ServerError> {
        let now = self.clock.now();
        let state = self.pairs.get(token).ok_or(ServerError::UnknownToken)?;
        let mut next = state.board(slot)?.clone();
        next.shuffle().map_err(game_error)?;
        let event = BoardEvent::Shuffle {
            pair_id: state.record.pair.pair_id.clone(),
            slot,
            t: now,
        };
        self.store.append(Log::Events, &event)?;
        let state = self.pairs.get_mut(token).expect("checked above");
        *state.board_mut(slot)? = next;
        Ok(view(state, slot))
    }

    pub fn submit_survey(&mut self, token: &str, mut response: SurveyResponse) -> Result<SurveyAck, ServerError> {
        let state = self.state(token)?;
        let pair = &state.record.pair;
        if response.session_pair_id != pair.pair_id {
            return Err(ServerError::InvalidSurvey(format!(
                "session_pair_id {} does not match pair {}",
                response.session_pair_id, pair.pair_id
            )));
        }
        response.validate().map_err(|e| ServerError::InvalidSurvey(e.to_string()))?;
        if state.surveyed {
            return Err(ServerError::DuplicateSurvey);
        }
        if state.boards.iter().any(|b| !b.board().status().is_terminal()) {
            return Err(ServerError::PairIncomplete);
        }
        response.submitted_at = Some(self.clock.now());
        self.store.append(Log::Surveys, &response)?;
        self.surveys += 1;
        let state = self.pairs.get_mut(token).expect("checked above");
        state.surveyed = true;
        let pair = &state.record.pair;
        let sources = (1..=2u8)
            .map(|slot| SlotSource {
                slot,
                puzzle_id: pair.puzzle_in_slot(slot).expect("valid slot").to_owned(),
                source: if slot == pair.ai_slot() { Source::Ai } else { Source::Nyt },
            })
            .collect();
        Ok(SurveyAck {
            pair_id: pair.pair_id.clone(),
            sources,
        })
    }
}

fn game_error(e: GameError) -> ServerError {
    match e {
        GameError::SessionClosed => ServerError::SessionClosed,
        other => ServerError::Internal(other.to_string()),
    }
}

fn view(state: &PairState, slot: u8) -> BoardView {
    let b = state.boards[slot as usize - 1].board();
    let finished = b.status().is_terminal();
    BoardView {
        slot,
        words: b.remaining().iter().map(|w| w.as_str().to_owned()).collect(),
        solved: b.solved_groups().iter().map(GroupView::from).collect(),
        mistakes_remaining: b.mistakes_remaining(),
        status: b.status(),
        solution: finished.then(|| b.puzzle().groups.iter().map(GroupView::from).collect()),
    }
}
