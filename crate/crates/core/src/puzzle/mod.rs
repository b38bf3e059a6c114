//! Puzzle data model, JSON schema and validity checks.

mod model;
mod schema;
mod validate;
mod word;

pub use model::{Color, Puzzle, Source, Subtype, WordGroup};
pub use schema::{
    check_structure, deserialize_puzzle, deserialize_puzzle_set, serialize_puzzle,
    serialize_puzzle_set, SchemaError,
};
pub use validate::{
    is_generic_category, validate_groups, validate_puzzle, validate_puzzle_with, Advisory,
    Principle, PrincipleWarning, SemanticProbe, ValidationReport, Violation,
    VARIED_CATEGORIES_JACCARD,
};
pub use word::{category_tokens, normalize_category, normalize_word, Word};

#[derive(Debug, thiserror::Error)]
pub enum PuzzleError {
    #[error("word is empty after trimming")]
    EmptyWord,
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Reads a puzzle file holding one puzzle or an array of puzzles.
pub fn load_puzzles(path: impl AsRef<std::path::Path>) -> Result<Vec<Puzzle>, PuzzleError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| PuzzleError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(deserialize_puzzle_set(&text)?)
}

/// Reads every `*.json` file in a directory, sorted by file name.
pub fn load_puzzle_dir(dir: impl AsRef<std::path::Path>) -> Result<Vec<Puzzle>, PuzzleError> {
    let dir = dir.as_ref();
    let io = |source| PuzzleError::Io {
        path: dir.display().to_string(),
        source,
    };
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut out = Vec::new();
    for f in files {
        out.extend(load_puzzles(&f)?);
    }
    Ok(out)
}
