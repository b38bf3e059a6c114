use itertools::Itertools;

use super::{group_similarity, ColorQuartets, DifficultyError, EmbeddingStore};
use crate::puzzle::{validate_puzzle, Advisory, Color, Puzzle, SemanticProbe, Source, Subtype, Word, WordGroup};

/// A category with its selected per-color quartets.
#[derive(Clone, Debug)]
pub struct ScoredPool {
    pub category: String,
    pub quartets: ColorQuartets,
}

/// Fixed puzzle metadata shared by all variants of one generation run.
#[derive(Clone, Debug)]
pub struct VariantTemplate {
    pub id_prefix: String,
    pub source: Source,
    pub subtype: Subtype,
    pub false_group: Option<WordGroup>,
    pub seed_words: Option<[Word; 4]>,
    pub provenance: Option<String>,
}

/// The 24 color-to-pool assignments in a fixed order; entry `k` gives the
/// color used for each pool.
pub fn color_assignments() -> Vec<[Color; 4]> {
    Color::ALL
        .iter()
        .copied()
        .permutations(4)
        .map(|p| [p[0], p[1], p[2], p[3]])
        .collect()
}

/// Assembles one puzzle per color assignment and keeps those passing the
/// hard constraints. Puzzle ids are `{prefix}-v{index:02}` where `index` is
/// the assignment's position in [`color_assignments`].
pub fn enumerate_variants(pools: &[ScoredPool; 4], template: &VariantTemplate) -> Vec<Puzzle> {
    color_assignments()
        .into_iter()
        .enumerate()
        .filter_map(|(index, colors)| {
            let groups: [WordGroup; 4] = std::array::from_fn(|i| {
                let q = pools[i].quartets.get(colors[i]);
                WordGroup::new(pools[i].category.clone(), q.words.clone(), Some(colors[i]))
            });
            let puzzle = Puzzle {
                id: format!("{}-v{index:02}", template.id_prefix),
                source: template.source,
                subtype: template.subtype,
                groups,
                false_group: template.false_group.clone(),
                seed_words: template.seed_words.clone(),
                provenance: template.provenance.clone(),
            };
            if validate_puzzle(&puzzle).is_valid() && crate::puzzle::check_structure(&puzzle).is_ok() {
                Some(puzzle)
            } else {
                None
            }
        })
        .collect()
}

/// Similarity of a puzzle's false group, a proxy for how much it stands out.
pub fn false_group_salience(p: &Puzzle, store: &EmbeddingStore) -> Result<f64, DifficultyError> {
    let fg = p
        .false_group
        .as_ref()
        .ok_or_else(|| DifficultyError::MissingFalseGroup(p.id.clone()))?;
    group_similarity(&fg.words, store)
}

/// Embedding-backed advisories for the semantic constraints.
///
/// Constraint 3 is flagged when a group's similarity falls below
/// `coherence_floor`. Constraint 5 is flagged when some non-solution
/// quartet on the board is more cohesive than every solution group.
pub struct EmbeddingProbe<'a> {
    pub store: &'a EmbeddingStore,
    pub coherence_floor: f64,
}

impl<'a> EmbeddingProbe<'a> {
    pub const DEFAULT_COHERENCE_FLOOR: f64 = 0.05;

    pub fn new(store: &'a EmbeddingStore) -> Self {
        EmbeddingProbe {
            store,
            coherence_floor: Self::DEFAULT_COHERENCE_FLOOR,
        }
    }
}

impl SemanticProbe for EmbeddingProbe<'_> {
    fn advisories(&self, puzzle: &Puzzle) -> Vec<Advisory> {
        let mut out = Vec::new();
        let mut best_group = f64::NEG_INFINITY;
        for (i, g) in puzzle.groups.iter().enumerate() {
            match group_similarity(&g.words, self.store) {
                Ok(s) => {
                    best_group = best_group.max(s);
                    if s < self.coherence_floor {
                        out.push(Advisory {
                            constraint: 3,
                            message: format!(
                                "group {:?} similarity {s:.3} is below {:.3}",
                                g.category, self.coherence_floor
                            ),
                            groups: vec![i],
                        });
                    }
                }
                Err(e) => out.push(Advisory {
                    constraint: 3,
                    message: format!("group {:?} could not be scored: {e}", g.category),
                    groups: vec![i],
                }),
            }
        }
        if !best_group.is_finite() {
            return out;
        }
        let board: Vec<Word> = puzzle.words().cloned().collect();
        let mut best_alt: Option<(f64, Vec<Word>)> = None;
        for quartet in board.iter().combinations(4) {
            if puzzle.groups.iter().any(|g| g.overlap(quartet.iter().copied()) == 4) {
                continue;
            }
            let words: Vec<Word> = quartet.into_iter().cloned().collect();
            let Ok(s) = group_similarity(&words, self.store) else {
                continue;
            };
            if s > best_group && best_alt.as_ref().is_none_or(|(b, _)| s > *b) {
                best_alt = Some((s, words));
            }
        }
        if let Some((s, words)) = best_alt {
            let names: Vec<&str> = words.iter().map(Word::as_str).collect();
            let groups = words
                .iter()
                .filter_map(|w| puzzle.group_of(w))
                .unique()
                .collect();
            out.push(Advisory {
                constraint: 5,
                message: format!(
                    "non-solution quartet {names:?} (similarity {s:.3}) is more cohesive than every solution group ({best_group:.3})"
                ),
                groups,
            });
        }
        out
    }
}
