//! Staged puzzle generation.
//!
//! A run proposes 8-word pools through chat prompts, picks quartets by
//! embedding similarity, then passes the chosen puzzle through an editor
//! and a difficulty ranker. Four subtypes are supported:
//!
//! - `one_step`: the whole puzzle from a single prompt.
//! - `overlap`: a story-seeded root group, then three groups each built on
//!   another meaning of a word already on the board.
//! - `false_group_llm`: the root group becomes a decoy and each of its words
//!   seeds a new group.
//! - `false_group_seeded`: as above with a hand-picked decoy group.

mod config;
mod generator;
mod styles;
mod templates;

pub use config::{parse_group_json, sample_seed_words, seed_word_list, GenerationConfig, ProposedGroup};
pub use generator::{anchors_for, builtin_few_shot, false_group_from_pool, GenerationRun, Generator, RunLog};
pub use styles::{CategoryStyle, StyleRegistry};
pub use templates::{PromptSet, PromptTemplate, Stage};

use crate::difficulty::DifficultyError;
use crate::llm::LlmError;
use crate::puzzle::ValidationReport;

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Llm(#[from] LlmError),
    #[error("{stage:?} reply unusable after {attempts} attempt(s): {reason}")]
    ParseFailure { stage: Stage, attempts: u32, reason: String },
    #[error("declared style {0:?} is not in the registry")]
    StyleViolation(String),
    #[error("overlap violation: {0}")]
    OverlapViolation(String),
    #[error("pool for {category} is missing its anchor word {anchor:?}")]
    MissingAnchor { anchor: String, category: String },
    #[error("no color assignment yields a valid puzzle")]
    NoValidVariant,
    #[error("generated puzzle breaks constraint(s) {}", .0.hard_violations.iter().map(|v| v.constraint.to_string()).collect::<Vec<_>>().join(", "))]
    ValidationFailure(ValidationReport),
    #[error("group {0:?} copies a prompt example")]
    FewShotLeak(String),
    #[error(transparent)]
    Difficulty(#[from] DifficultyError),
    #[error("template: {0}")]
    Template(String),
    #[error("config: {0}")]
    Config(String),
}
