//! JSON representation of puzzles.
//!
//! Keys are fixed:
//!
//! ```json
//! {"id": "...", "source": "nyt", "subtype": "published",
//!  "groups": [{"category": "...", "words": ["a","b","c","d"], "color": "yellow"}, ...],
//!  "false_group": null, "seed_words": null, "provenance": null}
//! ```
//!
//! A file holds either one puzzle object or a top-level array of them.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_path_to_error::Segment;

use super::model::{Color, Puzzle, Source, Subtype, WordGroup};
use super::word::Word;

/// A schema violation located by a JSON pointer.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("schema error at {path}: {message}")]
pub struct SchemaError {
    pub path: String,
    pub message: String,
}

impl SchemaError {
    fn at(path: impl Into<String>, message: impl fmt::Display) -> Self {
        SchemaError {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupDoc {
    category: String,
    words: [Word; 4],
    color: Option<Color>,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FalseGroupDoc {
    category: String,
    words: [Word; 4],
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PuzzleDoc {
    id: String,
    source: Source,
    subtype: Subtype,
    groups: [GroupDoc; 4],
    false_group: Option<FalseGroupDoc>,
    seed_words: Option<[Word; 4]>,
    provenance: Option<String>,
}

impl From<&Puzzle> for PuzzleDoc {
    fn from(p: &Puzzle) -> Self {
        PuzzleDoc {
            id: p.id.clone(),
            source: p.source,
            subtype: p.subtype,
            groups: p.groups.clone().map(|g| GroupDoc {
                category: g.category,
                words: g.words,
                color: g.color,
            }),
            false_group: p.false_group.as_ref().map(|g| FalseGroupDoc {
                category: g.category.clone(),
                words: g.words.clone(),
            }),
            seed_words: p.seed_words.clone(),
            provenance: p.provenance.clone(),
        }
    }
}

impl PuzzleDoc {
    fn into_puzzle(self, base: &str) -> Result<Puzzle, SchemaError> {
        let puzzle = Puzzle {
            id: self.id,
            source: self.source,
            subtype: self.subtype,
            groups: self
                .groups
                .map(|g| WordGroup::new(g.category, g.words, g.color)),
            false_group: self
                .false_group
                .map(|g| WordGroup::new(g.category, g.words, None)),
            seed_words: self.seed_words,
            provenance: self.provenance,
        };
        check_structure_at(&puzzle, base)?;
        Ok(puzzle)
    }
}

impl Serialize for Puzzle {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PuzzleDoc::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Puzzle {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        PuzzleDoc::deserialize(deserializer)?
            .into_puzzle("")
            .map_err(serde::de::Error::custom)
    }
}

/// Checks the structural invariants that the type system does not carry.
pub fn check_structure(p: &Puzzle) -> Result<(), SchemaError> {
    check_structure_at(p, "")
}

fn check_structure_at(p: &Puzzle, base: &str) -> Result<(), SchemaError> {
    if p.id.trim().is_empty() {
        return Err(SchemaError::at(format!("{base}/id"), "id must not be empty"));
    }
    match (p.source, p.subtype) {
        (Source::Nyt, Subtype::Published) => {}
        (Source::Ai, s) if s != Subtype::Published => {}
        (source, subtype) => {
            return Err(SchemaError::at(
                format!("{base}/subtype"),
                format!("subtype {subtype} is not allowed for source {source:?}"),
            ))
        }
    }
    for (i, g) in p.groups.iter().enumerate() {
        if g.category.is_empty() {
            return Err(SchemaError::at(
                format!("{base}/groups/{i}/category"),
                "category must not be empty",
            ));
        }
    }
    let mut seen = HashSet::new();
    for (i, g) in p.groups.iter().enumerate() {
        if let Some(c) = g.color {
            if !seen.insert(c) {
                return Err(SchemaError::at(
                    format!("{base}/groups/{i}/color"),
                    format!("color {c} assigned to more than one group"),
                ));
            }
        }
    }
    if let Some(fg) = &p.false_group {
        if !p.subtype.has_false_group() {
            return Err(SchemaError::at(
                format!("{base}/false_group"),
                format!("false_group is only allowed for false-group subtypes, not {}", p.subtype),
            ));
        }
        if p.groups.iter().any(|g| g.same_words(fg)) {
            return Err(SchemaError::at(
                format!("{base}/false_group"),
                "false_group must not coincide with a solution group",
            ));
        }
    }
    Ok(())
}

fn pointer(path: &serde_path_to_error::Path, base: &str) -> String {
    let mut out = base.to_owned();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{key}")),
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => out.push_str("/?"),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

fn parse_doc<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, SchemaError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = pointer(e.path(), "");
        SchemaError::at(path, e.into_inner())
    })
}

/// Canonical pretty-printed JSON for one puzzle.
pub fn serialize_puzzle(p: &Puzzle) -> String {
    serde_json::to_string_pretty(p).expect("puzzle serialization is infallible")
}

pub fn serialize_puzzle_set(puzzles: &[Puzzle]) -> String {
    serde_json::to_string_pretty(puzzles).expect("puzzle serialization is infallible")
}

pub fn deserialize_puzzle(text: &str) -> Result<Puzzle, SchemaError> {
    parse_doc::<PuzzleDoc>(text)?.into_puzzle("")
}

/// Reads either a single puzzle object or an array of puzzles.
pub fn deserialize_puzzle_set(text: &str) -> Result<Vec<Puzzle>, SchemaError> {
    let value: serde_json::Value = parse_doc(text)?;
    if value.is_array() {
        let docs: Vec<PuzzleDoc> = parse_doc(text)?;
        docs.into_iter()
            .enumerate()
            .map(|(i, d)| d.into_puzzle(&format!("/{i}")))
            .collect()
    } else {
        Ok(vec![deserialize_puzzle(text)?])
    }
}
