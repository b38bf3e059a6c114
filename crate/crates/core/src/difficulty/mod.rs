//! Embedding-backed difficulty engine.
//!
//! Group difficulty is estimated by the mean pairwise cosine similarity of
//! the group's word embeddings: tight groups read as easy (yellow), loose
//! ones as hard (purple).

mod corpus;
mod quartets;
mod store;
mod variants;

pub use corpus::{corpus_color_stats, ColorStats};
pub use quartets::{
    group_similarity, score_quartets, select_color_quartets, select_color_quartets_anchored,
    ColorQuartets, QuartetScore, WordPool, POOL_SIZE, TIE_EPSILON,
};
pub use store::{EmbeddingProvider, EmbeddingStore, FixtureEmbeddings, RemoteEmbeddings};
pub use variants::{
    color_assignments, enumerate_variants, false_group_salience, EmbeddingProbe, ScoredPool,
    VariantTemplate,
};

use crate::puzzle::Color;

#[derive(Debug, thiserror::Error)]
pub enum DifficultyError {
    #[error("no embedding for word {0:?}")]
    MissingEmbedding(String),
    #[error("invalid vector for {word:?}: {reason}")]
    InvalidVector { word: String, reason: String },
    #[error("invalid word pool: {0}")]
    InvalidPool(String),
    #[error("need at least two words to score, got {0}")]
    TooFewWords(usize),
    #[error("anchor word {0:?} is not in the pool")]
    AnchorNotInPool(String),
    #[error("no quartet of pool {0:?} satisfies the anchors")]
    NoEligibleQuartet(String),
    #[error("puzzle {0} has a group without a color")]
    MissingColor(String),
    #[error("no groups of color {0}")]
    EmptyColorClass(Color),
    #[error("puzzle {0} has no false group")]
    MissingFalseGroup(String),
    #[error("embedding fixture: {0}")]
    Fixture(String),
    #[error("embedding provider: {0}")]
    Provider(String),
}
