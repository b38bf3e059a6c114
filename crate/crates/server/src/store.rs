//! Append-only JSONL persistence. Every record is written and synced
//! before the request that produced it is acknowledged.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use connections_core::analysis::{PuzzlePair, SurveyResponse};
use connections_core::game::{PlaySession, Verdict};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::ServerError;

/// The four logs kept in the data directory.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Log {
    Pairs,
    Events,
    Sessions,
    Surveys,
}

impl Log {
    pub fn file_name(self) -> &'static str {
        match self {
            Log::Pairs => "pairs.jsonl",
            Log::Events => "events.jsonl",
            Log::Sessions => "sessions.jsonl",
            Log::Surveys => "surveys.jsonl",
        }
    }
}

/// A pair as issued, with what is needed to rebuild its boards.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    #[serde(flatten)]
    pub pair: PuzzlePair,
    pub issuance: u64,
    pub board_seeds: [u64; 2],
}

/// One player action on a board.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoardEvent {
    Guess {
        pair_id: String,
        slot: u8,
        words: Vec<String>,
        verdict: Verdict,
        t: DateTime<Utc>,
    },
    Shuffle {
        pair_id: String,
        slot: u8,
        t: DateTime<Utc>,
    },
}

impl BoardEvent {
    pub fn target(&self) -> (&str, u8) {
        match self {
            BoardEvent::Guess { pair_id, slot, .. } | BoardEvent::Shuffle { pair_id, slot, .. } => (pair_id, *slot),
        }
    }
}

/// Everything read back from a data directory.
#[derive(Debug, Default)]
pub struct Snapshot {
    pub pairs: Vec<PairRecord>,
    pub events: Vec<BoardEvent>,
    pub sessions: Vec<PlaySession>,
    pub surveys: Vec<SurveyResponse>,
}

#[derive(Debug)]
pub struct JsonlStore {
    dir: PathBuf,
    files: [File; 4],
}

const LOGS: [Log; 4] = [Log::Pairs, Log::Events, Log::Sessions, Log::Surveys];

impl JsonlStore {
    /// Opens (creating if needed) the logs under `dir`.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self, ServerError> {
        let dir = dir.as_ref().to_path_buf();
        std::fs::create_dir_all(&dir).map_err(|e| ServerError::io(&dir, e))?;
        let open = |log: Log| {
            let path = dir.join(log.file_name());
            drop_torn_tail(&path)?;
            OpenOptions::new()
                .create(true)
                .append(true)
                .open(&path)
                .map_err(|e| ServerError::io(&path, e))
        };
        let files = [open(Log::Pairs)?, open(Log::Events)?, open(Log::Sessions)?, open(Log::Surveys)?];
        Ok(JsonlStore { dir, files })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, log: Log) -> PathBuf {
        self.dir.join(log.file_name())
    }

    /// Appends one record and syncs it to disk.
    pub fn append<T: Serialize>(&mut self, log: Log, record: &T) -> Result<(), ServerError> {
        let mut line = serde_json::to_string(record).map_err(|e| ServerError::Internal(e.to_string()))?;
        line.push('\n');
        let idx = LOGS.iter().position(|l| *l == log).expect("every log has a file");
        let path = self.path(log);
        let f = &mut self.files[idx];
        f.write_all(line.as_bytes()).map_err(|e| ServerError::io(&path, e))?;
        f.sync_data().map_err(|e| ServerError::io(&path, e))
    }

    pub fn load(&self) -> Result<Snapshot, ServerError> {
        Ok(Snapshot {
            pairs: self.read(Log::Pairs)?,
            events: self.read(Log::Events)?,
            sessions: self.read(Log::Sessions)?,
            surveys: self.read(Log::Surveys)?,
        })
    }

    /// Reads a log. A torn final line, left by a crash mid-write, is skipped.
    pub fn read<T: DeserializeOwned>(&self, log: Log) -> Result<Vec<T>, ServerError> {
        let path = self.path(log);
        let file = File::open(&path).map_err(|e| ServerError::io(&path, e))?;
        let lines: Vec<String> = BufReader::new(file)
            .lines()
            .collect::<Result<_, _>>()
            .map_err(|e| ServerError::io(&path, e))?;
        let mut out = Vec::with_capacity(lines.len());
        for (i, line) in lines.iter().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str(line) {
                Ok(v) => out.push(v),
                Err(e) if i + 1 == lines.len() => {
                    log::warn!("{}: ignoring torn last line: {e}", path.display());
                }
                Err(e) => {
                    return Err(ServerError::Corrupt(format!("{}:{}: {e}", path.display(), i + 1)));
                }
            }
        }
        Ok(out)
    }
}

// Cuts a trailing partial line so later appends start on a fresh line.
fn drop_torn_tail(path: &Path) -> Result<(), ServerError> {
    let bytes = match std::fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(()),
        Err(e) => return Err(ServerError::io(path, e)),
    };
    if bytes.is_empty() || bytes.ends_with(b"\n") {
        return Ok(());
    }
    let keep = bytes.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
    log::warn!("{}: dropping {} bytes of torn tail", path.display(), bytes.len() - keep);
    let f = OpenOptions::new().write(true).open(path).map_err(|e| ServerError::io(path, e))?;
    f.set_len(keep as u64).map_err(|e| ServerError::io(path, e))
}
