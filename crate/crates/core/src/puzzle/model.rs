use std::fmt;

use serde::{Deserialize, Serialize};

use super::word::Word;

/// Group difficulty tier, ordered from easiest to hardest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Yellow,
    Green,
    Blue,
    Purple,
}

impl Color {
    pub const ALL: [Color; 4] = [Color::Yellow, Color::Green, Color::Blue, Color::Purple];

    pub fn as_str(self) -> &'static str {
        match self {
            Color::Yellow => "yellow",
            Color::Green => "green",
            Color::Blue => "blue",
            Color::Purple => "purple",
        }
    }

    pub fn parse(raw: &str) -> Option<Color> {
        match raw.trim().to_lowercase().as_str() {
            "yellow" => Some(Color::Yellow),
            "green" => Some(Color::Green),
            "blue" => Some(Color::Blue),
            "purple" => Some(Color::Purple),
            _ => None,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Nyt,
    Ai,
}

/// How a puzzle was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subtype {
    OneStep,
    Overlap,
    FalseGroupLlm,
    FalseGroupSeeded,
    Published,
}

impl Subtype {
    pub const ALL: [Subtype; 5] = [
        Subtype::OneStep,
        Subtype::Overlap,
        Subtype::FalseGroupLlm,
        Subtype::FalseGroupSeeded,
        Subtype::Published,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Subtype::OneStep => "one_step",
            Subtype::Overlap => "overlap",
            Subtype::FalseGroupLlm => "false_group_llm",
            Subtype::FalseGroupSeeded => "false_group_seeded",
            Subtype::Published => "published",
        }
    }

    pub fn parse(raw: &str) -> Option<Subtype> {
        Subtype::ALL.into_iter().find(|s| s.as_str() == raw.trim())
    }

    /// Human-readable label used in reports.
    pub fn label(self) -> &'static str {
        match self {
            Subtype::OneStep => "One-Step",
            Subtype::Overlap => "Intentional Overlap",
            Subtype::FalseGroupLlm => "False group (LLM)",
            Subtype::FalseGroupSeeded => "False group (seeded)",
            Subtype::Published => "NYT",
        }
    }

    pub fn has_false_group(self) -> bool {
        matches!(self, Subtype::FalseGroupLlm | Subtype::FalseGroupSeeded)
    }
}

impl fmt::Display for Subtype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A category with its four words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordGroup {
    pub category: String,
    pub words: [Word; 4],
    pub color: Option<Color>,
}

impl WordGroup {
    pub fn new(category: impl Into<String>, words: [Word; 4], color: Option<Color>) -> Self {
        WordGroup {
            category: category.into().trim().to_owned(),
            words,
            color,
        }
    }

    /// Builds a group from raw strings, normalizing each word.
    pub fn from_strs(
        category: &str,
        words: [&str; 4],
        color: Option<Color>,
    ) -> Result<Self, super::PuzzleError> {
        let [a, b, c, d] = words;
        Ok(WordGroup::new(
            category,
            [Word::parse(a)?, Word::parse(b)?, Word::parse(c)?, Word::parse(d)?],
            color,
        ))
    }

    pub fn contains(&self, word: &Word) -> bool {
        self.words.contains(word)
    }

    /// Number of words shared with `words`.
    pub fn overlap<'a>(&self, words: impl IntoIterator<Item = &'a Word>) -> usize {
        words.into_iter().filter(|w| self.contains(w)).count()
    }

    /// True when both groups hold the same four words in any order.
    pub fn same_words(&self, other: &WordGroup) -> bool {
        self.overlap(other.words.iter()) == 4 && other.overlap(self.words.iter()) == 4
    }
}

/// A complete 4x4 puzzle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Puzzle {
    pub id: String,
    pub source: Source,
    pub subtype: Subtype,
    pub groups: [WordGroup; 4],
    pub false_group: Option<WordGroup>,
    pub seed_words: Option<[Word; 4]>,
    pub provenance: Option<String>,
}

impl Puzzle {
    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.groups.iter().flat_map(|g| g.words.iter())
    }

    pub fn group_of(&self, word: &Word) -> Option<usize> {
        self.groups.iter().position(|g| g.contains(word))
    }

    /// Colors of the four groups when every group has one.
    pub fn colors(&self) -> Option<[Color; 4]> {
        let [a, b, c, d] = &self.groups;
        Some([a.color?, b.color?, c.color?, d.color?])
    }
}
