//! Study statistics: solve rates, mistake histograms, false-group guess
//! rates, preference tallies and Pearson's chi-squared test.

mod chi;
mod report;
mod stats;
mod survey;
pub mod synthetic;

use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::de::DeserializeOwned;

pub use chi::{chi_squared, p_band, ChiSquared, ContingencyTable};
pub use report::{analyze, render_markdown, AnalysisReport};
pub use stats::{
    false_group_guess_rate, has_false_group_guess, index_puzzles, mistake_distribution, percent,
    preference_tally, solve_rates, solve_table, FalseGroupRate, MistakeHistogram, PreferenceCounts,
    PreferenceTally, PuzzleIndex, Slice, SolveRate, FALSE_GROUP_GUESS_MIN_SHARED,
};
pub use survey::{
    Axis, Choice, EnglishProficiency, PlayFrequency, Preference, PuzzlePair, SlotOrder, SurveyResponse,
    FREE_TEXT_KEYS,
};

#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error("unknown puzzle {0}")]
    UnknownPuzzle(String),
    #[error("puzzle {0} has no false group")]
    MissingFalseGroup(String),
    #[error("degenerate table: {0}")]
    DegenerateTable(String),
    #[error("survey for unknown pair {0}")]
    UnpairedResponse(String),
    #[error("invalid survey: {0}")]
    InvalidSurvey(String),
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// Reads one JSON value per non-blank line.
pub fn read_jsonl<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<Vec<T>, AnalysisError> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let file = std::fs::File::open(path).map_err(|source| AnalysisError::Io { path: name.clone(), source })?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|source| AnalysisError::Io { path: name.clone(), source })?;
        if line.trim().is_empty() {
            continue;
        }
        let value = serde_json::from_str(&line).map_err(|e| AnalysisError::Parse {
            path: name.clone(),
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(value);
    }
    Ok(out)
}
