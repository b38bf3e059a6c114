use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::difficulty::WordPool;
use crate::puzzle::{Subtype, Word, WordGroup};

const SEED_WORDS: &str = include_str!("../../data/seed_words.txt");

/// The bundled list that story-injection words are drawn from.
pub fn seed_word_list() -> Vec<Word> {
    SEED_WORDS
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .filter_map(|l| Word::parse(l).ok())
        .collect()
}

/// Samples 4 distinct seed words.
pub fn sample_seed_words(rng: &mut ChaCha8Rng) -> [Word; 4] {
    let list = seed_word_list();
    let picked: Vec<Word> = list.choose_multiple(rng, 4).cloned().collect();
    [picked[0].clone(), picked[1].clone(), picked[2].clone(), picked[3].clone()]
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenerationConfig {
    pub subtype: Subtype,
    pub seed_words: [Word; 4],
    pub seeded_false_group: Option<WordGroup>,
    pub rng_seed: u64,
    pub max_stage_retries: u32,
}

impl GenerationConfig {
    pub const DEFAULT_STAGE_RETRIES: u32 = 2;

    /// A config whose seed words are sampled from the bundled list using
    /// `rng_seed`.
    pub fn new(subtype: Subtype, rng_seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        GenerationConfig {
            subtype,
            seed_words: sample_seed_words(&mut rng),
            seeded_false_group: None,
            rng_seed,
            max_stage_retries: Self::DEFAULT_STAGE_RETRIES,
        }
    }

    pub fn with_seed_words(mut self, words: [Word; 4]) -> Self {
        self.seed_words = words;
        self
    }

    pub fn with_seeded_false_group(mut self, group: WordGroup) -> Self {
        self.seeded_false_group = Some(group);
        self
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |m: &str| Err(PipelineError::Config(m.to_owned()));
        match self.subtype {
            Subtype::Published => return bad("published puzzles are not generated"),
            Subtype::FalseGroupSeeded if self.seeded_false_group.is_none() => {
                return bad("false_group_seeded needs a seeded false group")
            }
            s if s != Subtype::FalseGroupSeeded && self.seeded_false_group.is_some() => {
                return bad("a seeded false group is only allowed for false_group_seeded")
            }
            _ => {}
        }
        let mut seen = self.seed_words.to_vec();
        seen.sort();
        seen.dedup();
        if seen.len() != 4 {
            return bad("seed words must be 4 distinct words");
        }
        Ok(())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupDoc {
    category: String,
    words: [String; 4],
}

/// Reads a `{"category": .., "words": [4 words]}` document, the format used
/// for hand-picked false groups.
pub fn parse_group_json(text: &str) -> Result<WordGroup, PipelineError> {
    let doc: GroupDoc = serde_json::from_str(text).map_err(|e| PipelineError::Config(format!("group: {e}")))?;
    let [a, b, c, d] = &doc.words;
    WordGroup::from_strs(&doc.category, [a.as_str(), b.as_str(), c.as_str(), d.as_str()], None).map_err(|e| PipelineError::Config(e.to_string()))
}

/// A category with its 8-word pool, as proposed by one stage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProposedGroup {
    pub category: String,
    pub pool: WordPool,
    pub style: String,
    /// The earlier word whose other meaning inspired this group.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_word: Option<Word>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub story: Option<String>,
}
