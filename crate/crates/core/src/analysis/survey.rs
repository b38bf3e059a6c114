use std::collections::BTreeMap;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::AnalysisError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnglishProficiency {
    Native,
    Fluent,
    Intermediate,
    Basic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlayFrequency {
    Daily,
    Weekly,
    Monthly,
    Rarely,
    Never,
}

/// An answer to one of the comparison questions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Choice {
    #[serde(rename = "puzzle_1")]
    Puzzle1,
    #[serde(rename = "puzzle_2")]
    Puzzle2,
    #[serde(rename = "tie_neither")]
    TieNeither,
}

/// Keys accepted in [`SurveyResponse::free_text`].
pub const FREE_TEXT_KEYS: [&str; 4] = ["q_creative", "q_harder", "q_liked", "comments"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurveyResponse {
    pub session_pair_id: String,
    pub username: String,
    pub english_proficiency: EnglishProficiency,
    pub play_frequency: PlayFrequency,
    pub seen_before: bool,
    pub q_creative: Choice,
    pub q_harder: Choice,
    pub q_liked: Choice,
    #[serde(default)]
    pub free_text: BTreeMap<String, Option<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub submitted_at: Option<DateTime<Utc>>,
}

impl SurveyResponse {
    pub fn validate(&self) -> Result<(), AnalysisError> {
        if let Some(k) = self.free_text.keys().find(|k| !FREE_TEXT_KEYS.contains(&k.as_str())) {
            return Err(AnalysisError::InvalidSurvey(format!("unknown free-text key {k:?}")));
        }
        if self.session_pair_id.trim().is_empty() {
            return Err(AnalysisError::InvalidSurvey("empty session_pair_id".into()));
        }
        Ok(())
    }

    pub fn answer(&self, axis: Axis) -> Choice {
        match axis {
            Axis::Creative => self.q_creative,
            Axis::Harder => self.q_harder,
            Axis::Liked => self.q_liked,
        }
    }
}

/// The three comparison questions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Creative,
    Harder,
    Liked,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::Creative, Axis::Harder, Axis::Liked];

    pub fn question(self) -> &'static str {
        match self {
            Axis::Creative => "Which puzzle was more creative?",
            Axis::Harder => "Which puzzle was harder?",
            Axis::Liked => "Which puzzle did you like more?",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotOrder {
    AiFirst,
    NytFirst,
}

/// One AI and one published puzzle shown to a participant, in slot order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PuzzlePair {
    pub pair_id: String,
    pub ai_puzzle_id: String,
    pub nyt_puzzle_id: String,
    pub slot_order: SlotOrder,
    pub issued_to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub issued_at: Option<DateTime<Utc>>,
}

impl PuzzlePair {
    /// Puzzle id shown in slot 1 or 2.
    pub fn puzzle_in_slot(&self, slot: u8) -> Option<&str> {
        match (slot, self.slot_order) {
            (1, SlotOrder::AiFirst) | (2, SlotOrder::NytFirst) => Some(&self.ai_puzzle_id),
            (1, SlotOrder::NytFirst) | (2, SlotOrder::AiFirst) => Some(&self.nyt_puzzle_id),
            _ => None,
        }
    }

    pub fn ai_slot(&self) -> u8 {
        match self.slot_order {
            SlotOrder::AiFirst => 1,
            SlotOrder::NytFirst => 2,
        }
    }

    /// Maps a slot answer onto sources.
    pub fn resolve(&self, choice: Choice) -> Preference {
        match (choice, self.ai_slot()) {
            (Choice::TieNeither, _) => Preference::Tie,
            (Choice::Puzzle1, 1) | (Choice::Puzzle2, 2) => Preference::Ai,
            _ => Preference::Nyt,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preference {
    Ai,
    Nyt,
    Tie,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(order: SlotOrder) -> PuzzlePair {
        PuzzlePair {
            pair_id: "p".into(),
            ai_puzzle_id: "ai".into(),
            nyt_puzzle_id: "nyt".into(),
            slot_order: order,
            issued_to: "t".into(),
            issued_at: None,
        }
    }

    #[test]
    fn slots_map_to_sources() {
        let a = pair(SlotOrder::AiFirst);
        assert_eq!(a.puzzle_in_slot(1), Some("ai"));
        assert_eq!(a.resolve(Choice::Puzzle1), Preference::Ai);
        let n = pair(SlotOrder::NytFirst);
        assert_eq!(n.puzzle_in_slot(1), Some("nyt"));
        assert_eq!(n.resolve(Choice::Puzzle1), Preference::Nyt);
        assert_eq!(n.resolve(Choice::TieNeither), Preference::Tie);
        assert_eq!(n.puzzle_in_slot(3), None);
    }

    #[test]
    fn survey_wire_format() {
        let text = r#"{"session_pair_id":"p1","username":"u","english_proficiency":"native",
            "play_frequency":"weekly","seen_before":false,"q_creative":"puzzle_1",
            "q_harder":"tie_neither","q_liked":"puzzle_2","free_text":{"q_liked":"fun","comments":null}}"#;
        let s: SurveyResponse = serde_json::from_str(text).unwrap();
        assert_eq!(s.q_harder, Choice::TieNeither);
        s.validate().unwrap();
        let mut bad = s.clone();
        bad.free_text.insert("q9".into(), None);
        assert!(bad.validate().is_err());
    }
}
