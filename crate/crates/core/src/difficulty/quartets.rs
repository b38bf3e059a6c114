//! Quartet scoring and per-color quartet selection.

use std::cmp::Ordering;
use std::collections::HashSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::{DifficultyError, EmbeddingStore};
use crate::puzzle::{Color, Word};

/// Size of the candidate pool proposed for one category.
pub const POOL_SIZE: usize = 8;

/// Scores closer than this are ties, broken by word order.
pub const TIE_EPSILON: f64 = 1e-12;

/// Mean of the pairwise cosine similarities among `words`.
///
/// For a quartet this averages the six pairs.
pub fn group_similarity(words: &[Word], store: &EmbeddingStore) -> Result<f64, DifficultyError> {
    if words.len() < 2 {
        return Err(DifficultyError::TooFewWords(words.len()));
    }
    let mut sum = 0.0;
    let mut pairs = 0usize;
    for (a, b) in words.iter().tuple_combinations() {
        sum += store.cosine(a, b)?;
        pairs += 1;
    }
    Ok((sum / pairs as f64).clamp(-1.0, 1.0))
}

/// Eight distinct candidate words under one category.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PoolDoc", into = "PoolDoc")]
pub struct WordPool {
    category: String,
    words: Vec<Word>,
}

#[derive(Clone, Serialize, Deserialize)]
struct PoolDoc {
    category: String,
    words: Vec<Word>,
}

impl TryFrom<PoolDoc> for WordPool {
    type Error = DifficultyError;

    fn try_from(doc: PoolDoc) -> Result<Self, Self::Error> {
        WordPool::new(doc.category, doc.words)
    }
}

impl From<WordPool> for PoolDoc {
    fn from(p: WordPool) -> Self {
        PoolDoc {
            category: p.category,
            words: p.words,
        }
    }
}

impl WordPool {
    pub fn new(category: impl Into<String>, words: Vec<Word>) -> Result<Self, DifficultyError> {
        let distinct: HashSet<&Word> = words.iter().collect();
        if words.len() != POOL_SIZE || distinct.len() != POOL_SIZE {
            return Err(DifficultyError::InvalidPool(format!(
                "expected {POOL_SIZE} distinct words, got {} ({} distinct)",
                words.len(),
                distinct.len()
            )));
        }
        Ok(WordPool {
            category: category.into(),
            words,
        })
    }

    pub fn category(&self) -> &str {
        &self.category
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn contains(&self, word: &Word) -> bool {
        self.words.contains(word)
    }
}

/// A 4-word subset (kept sorted) with its mean pairwise similarity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuartetScore {
    pub words: [Word; 4],
    pub similarity: f64,
}

impl QuartetScore {
    fn tuple_cmp(&self, other: &Self) -> Ordering {
        self.words.cmp(&other.words)
    }
}

/// One quartet per color, all drawn from the same pool.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColorQuartets {
    pub yellow: QuartetScore,
    pub green: QuartetScore,
    pub blue: QuartetScore,
    pub purple: QuartetScore,
}

impl ColorQuartets {
    pub fn get(&self, color: Color) -> &QuartetScore {
        match color {
            Color::Yellow => &self.yellow,
            Color::Green => &self.green,
            Color::Blue => &self.blue,
            Color::Purple => &self.purple,
        }
    }

    /// Similarity targets used for green and blue.
    pub fn targets(max: f64, min: f64) -> (f64, f64) {
        let range = max - min;
        (min + range / 3.0, min + 2.0 * range / 3.0)
    }
}

/// Scores every quartet of `pool` that contains all `anchors`.
pub fn score_quartets(
    pool: &WordPool,
    store: &EmbeddingStore,
    anchors: &[Word],
) -> Result<Vec<QuartetScore>, DifficultyError> {
    // canonical order keeps the float sums independent of pool order
    let mut words = pool.words().to_vec();
    words.sort();
    for a in anchors {
        if !pool.contains(a) {
            return Err(DifficultyError::AnchorNotInPool(a.as_str().to_owned()));
        }
    }
    // pairwise cosine table, computed once
    let n = words.len();
    let mut sims = vec![[0.0f64; POOL_SIZE]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let s = store.cosine(&words[i], &words[j])?;
            sims[i][j] = s;
            sims[j][i] = s;
        }
    }
    let mut out = Vec::with_capacity(70);
    for idx in (0..n).combinations(4) {
        let members: Vec<&Word> = idx.iter().map(|&i| &words[i]).collect();
        if !anchors.iter().all(|a| members.contains(&a)) {
            continue;
        }
        let total: f64 = idx
            .iter()
            .tuple_combinations()
            .map(|(&i, &j)| sims[i][j])
            .sum();
        let mut quartet = [
            members[0].clone(),
            members[1].clone(),
            members[2].clone(),
            members[3].clone(),
        ];
        quartet.sort();
        out.push(QuartetScore {
            words: quartet,
            similarity: (total / 6.0).clamp(-1.0, 1.0),
        });
    }
    Ok(out)
}

fn pick<F>(scores: &[QuartetScore], key: F) -> &QuartetScore
where
    F: Fn(&QuartetScore) -> f64,
{
    scores
        .iter()
        .min_by(|a, b| {
            let (ka, kb) = (key(a), key(b));
            let by_key = if (ka - kb).abs() <= TIE_EPSILON {
                Ordering::Equal
            } else {
                ka.partial_cmp(&kb).unwrap_or(Ordering::Equal)
            };
            by_key.then_with(|| a.tuple_cmp(b))
        })
        .expect("non-empty")
}

/// Picks the yellow/green/blue/purple quartets of a pool.
///
/// Yellow is the most similar quartet and purple the least. Green and blue
/// are the quartets nearest to `min + (max-min)/3` and `min + 2(max-min)/3`.
/// Ties go to the lexicographically smallest sorted word tuple.
pub fn select_color_quartets(
    pool: &WordPool,
    store: &EmbeddingStore,
) -> Result<ColorQuartets, DifficultyError> {
    select_color_quartets_anchored(pool, store, &[])
}

/// Like [`select_color_quartets`], restricted to quartets containing every
/// anchor word.
pub fn select_color_quartets_anchored(
    pool: &WordPool,
    store: &EmbeddingStore,
    anchors: &[Word],
) -> Result<ColorQuartets, DifficultyError> {
    let scores = score_quartets(pool, store, anchors)?;
    if scores.is_empty() {
        return Err(DifficultyError::NoEligibleQuartet(pool.category().to_owned()));
    }
    let yellow = pick(&scores, |q| -q.similarity).clone();
    let purple = pick(&scores, |q| q.similarity).clone();
    let (green_target, blue_target) = ColorQuartets::targets(yellow.similarity, purple.similarity);
    let green = pick(&scores, |q| (q.similarity - green_target).abs()).clone();
    let blue = pick(&scores, |q| (q.similarity - blue_target).abs()).clone();
    Ok(ColorQuartets {
        yellow,
        green,
        blue,
        purple,
    })
}
