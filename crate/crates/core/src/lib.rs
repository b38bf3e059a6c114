//! Generation, validation, play and analysis of Connections-style word
//! puzzles.
//!
//! Each module covers one stage:
//!
//! - [`puzzle`]: data model, JSON schema, constraint checker
//! - [`difficulty`]: embedding similarity, quartet selection, variant enumeration
//! - [`llm`]: chat-completion gateway with a scripted provider and transcripts
//! - [`pipeline`]: the staged puzzle creator, editor and difficulty ranker
//! - [`game`]: rules engine and play sessions
//! - [`analysis`]: solve rates, mistake histograms, preferences, chi-squared

pub mod analysis;
pub mod difficulty;
pub mod game;
pub mod llm;
pub mod pipeline;
pub mod puzzle;

pub use puzzle::{Color, Puzzle, Source, Subtype, Word, WordGroup};
