use std::collections::BTreeMap;

use serde::Serialize;

use super::{group_similarity, DifficultyError, EmbeddingStore};
use crate::puzzle::{Color, Puzzle};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ColorStats {
    pub mean: f64,
    /// Population variance.
    pub variance: f64,
    pub groups: usize,
}

/// Per-color mean and population variance of group similarity, computed
/// per group (not per puzzle).
pub fn corpus_color_stats(
    puzzles: &[Puzzle],
    store: &EmbeddingStore,
) -> Result<BTreeMap<Color, ColorStats>, DifficultyError> {
    let mut by_color: BTreeMap<Color, Vec<f64>> = BTreeMap::new();
    for p in puzzles {
        for g in &p.groups {
            let color = g.color.ok_or_else(|| DifficultyError::MissingColor(p.id.clone()))?;
            by_color
                .entry(color)
                .or_default()
                .push(group_similarity(&g.words, store)?);
        }
    }
    let mut out = BTreeMap::new();
    for color in Color::ALL {
        let values = by_color
            .get(&color)
            .filter(|v| !v.is_empty())
            .ok_or(DifficultyError::EmptyColorClass(color))?;
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let variance = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        out.insert(
            color,
            ColorStats {
                mean,
                variance,
                groups: values.len(),
            },
        );
    }
    Ok(out)
}
