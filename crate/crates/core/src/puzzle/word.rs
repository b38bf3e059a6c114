use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::PuzzleError;

/// A board word.
///
/// Identity (equality, ordering, hashing) uses the normalized `surface`
/// form: lowercased, trimmed, internal whitespace runs collapsed to one
/// space. The `display` form keeps the caller's casing with the same
/// whitespace cleanup and is what gets serialized.
#[derive(Clone, Debug)]
pub struct Word {
    surface: String,
    display: String,
}

impl Word {
    pub fn parse(raw: &str) -> Result<Self, PuzzleError> {
        let display = raw.split_whitespace().collect::<Vec<_>>().join(" ");
        if display.is_empty() {
            return Err(PuzzleError::EmptyWord);
        }
        let surface = display.to_lowercase();
        Ok(Word { surface, display })
    }

    /// The normalized form used for comparisons.
    pub fn as_str(&self) -> &str {
        &self.surface
    }

    pub fn display(&self) -> &str {
        &self.display
    }
}

/// Normalizes a raw token into a [`Word`].
pub fn normalize_word(raw: &str) -> Result<Word, PuzzleError> {
    Word::parse(raw)
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.surface == other.surface
    }
}

impl Eq for Word {}

impl Hash for Word {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.surface.hash(state);
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.surface.cmp(&other.surface)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display)
    }
}

impl std::str::FromStr for Word {
    type Err = PuzzleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse(s)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.display)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        Word::parse(&raw).map_err(serde::de::Error::custom)
    }
}

/// Splits a category name into normalized whole tokens (runs of
/// alphanumerics and apostrophes).
pub fn category_tokens(category: &str) -> Vec<String> {
    category
        .to_lowercase()
        .split(|c: char| !(c.is_alphanumeric() || c == '\''))
        .filter(|t| !t.is_empty())
        .map(str::to_owned)
        .collect()
}

/// Normalized form of a category name used for equality checks.
pub fn normalize_category(category: &str) -> String {
    category
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trims_and_lowercases() {
        assert_eq!(normalize_word("  Fudge ").unwrap().as_str(), "fudge");
        assert_eq!(normalize_word("fudge").unwrap().as_str(), "fudge");
        assert_eq!(normalize_word("SILK  ROAD").unwrap().as_str(), "silk road");
    }

    #[test]
    fn keeps_display_casing() {
        let w = normalize_word(" SILK \t ROAD ").unwrap();
        assert_eq!(w.display(), "SILK ROAD");
        assert_eq!(w, normalize_word("silk road").unwrap());
    }

    #[test]
    fn rejects_blank() {
        assert!(matches!(normalize_word(" \t\n"), Err(PuzzleError::EmptyWord)));
        assert!(matches!(normalize_word(""), Err(PuzzleError::EmptyWord)));
    }

    #[test]
    fn tokens_strip_punctuation() {
        assert_eq!(
            category_tokens("WORDS THAT CAN FOLLOW \"FIRE\""),
            vec!["words", "that", "can", "follow", "fire"]
        );
        assert_eq!(category_tokens("___ ROAD"), vec!["road"]);
    }

    proptest::proptest! {
        #[test]
        fn normalization_is_idempotent(raw in "[ a-zA-Z\t]{0,20}") {
            if let Ok(once) = normalize_word(&raw) {
                let twice = normalize_word(once.as_str()).unwrap();
                proptest::prop_assert_eq!(once.as_str(), twice.as_str());
            }
        }
    }
}
