//! Puzzle constraint and principle checks.
//!
//! Hard constraints, numbered as in the rule list:
//!
//! 1. the puzzle contains 16 unique words
//! 2. the puzzle has 4 unique groups of 4 words
//! 3. all words in a group share a connection
//! 4. each word is used exactly once
//! 5. the puzzle has exactly one solution
//! 6. categories are more specific than generic word classes
//!
//! 1, 2, 4 and 6 are checked mechanically. 3 and 5 are semantic and only
//! surface as advisories from a [`SemanticProbe`] (the difficulty module
//! provides an embedding-backed one).

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::model::Puzzle;
use super::word::{category_tokens, normalize_category, Word};

/// Jaccard similarity of category token sets at or above which two
/// categories are flagged as too alike.
pub const VARIED_CATEGORIES_JACCARD: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Principle {
    VariedCategories,
    UniqueNames,
    SpellingMatters,
}

impl fmt::Display for Principle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Principle::VariedCategories => "varied_categories",
            Principle::UniqueNames => "unique_names",
            Principle::SpellingMatters => "spelling_matters",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub constraint: u8,
    pub message: String,
    pub words: Vec<String>,
    pub groups: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrincipleWarning {
    pub principle: Principle,
    pub message: String,
    pub groups: Vec<usize>,
}

/// Heuristic finding for a constraint that cannot be decided mechanically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Advisory {
    pub constraint: u8,
    pub message: String,
    pub groups: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub hard_violations: Vec<Violation>,
    pub principle_warnings: Vec<PrincipleWarning>,
    pub advisories: Vec<Advisory>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.hard_violations.is_empty()
    }

    pub fn violates(&self, constraint: u8) -> bool {
        self.hard_violations.iter().any(|v| v.constraint == constraint)
    }

    pub fn warns(&self, principle: Principle) -> bool {
        self.principle_warnings.iter().any(|w| w.principle == principle)
    }

    fn hard(&mut self, constraint: u8, message: String, words: Vec<String>, groups: Vec<usize>) {
        self.hard_violations.push(Violation {
            constraint,
            message,
            words,
            groups,
        });
    }

    fn warn(&mut self, principle: Principle, message: String, groups: Vec<usize>) {
        self.principle_warnings.push(PrincipleWarning {
            principle,
            message,
            groups,
        });
    }
}

/// Source of advisories for the semantic constraints (3 and 5).
pub trait SemanticProbe {
    fn advisories(&self, puzzle: &Puzzle) -> Vec<Advisory>;
}

pub fn validate_puzzle(p: &Puzzle) -> ValidationReport {
    let draft: Vec<(String, Vec<Word>)> = p
        .groups
        .iter()
        .map(|g| (g.category.clone(), g.words.to_vec()))
        .collect();
    validate_groups(&draft)
}

pub fn validate_puzzle_with(p: &Puzzle, probe: &dyn SemanticProbe) -> ValidationReport {
    let mut report = validate_puzzle(p);
    report.advisories = probe.advisories(p);
    report
}

/// Validates a parsed but not necessarily well-shaped set of groups, as
/// produced by a one-shot completion. Arity problems become constraint 1
/// and 2 violations instead of parse errors.
pub fn validate_groups(groups: &[(String, Vec<Word>)]) -> ValidationReport {
    let mut report = ValidationReport::default();

    // 1: sixteen unique words
    let total: usize = groups.iter().map(|(_, w)| w.len()).sum();
    let distinct: HashSet<&Word> = groups.iter().flat_map(|(_, w)| w.iter()).collect();
    if total != 16 || distinct.len() != 16 {
        let mut counts: BTreeMap<&Word, usize> = BTreeMap::new();
        for w in groups.iter().flat_map(|(_, w)| w.iter()) {
            *counts.entry(w).or_default() += 1;
        }
        let repeated: Vec<String> = counts
            .iter()
            .filter(|(_, &n)| n > 1)
            .map(|(w, _)| w.as_str().to_owned())
            .collect();
        report.hard(
            1,
            format!("puzzle has {} words, {} unique; expected 16 unique", total, distinct.len()),
            repeated,
            Vec::new(),
        );
    }

    // 2: four unique groups of four words
    if groups.len() != 4 {
        report.hard(2, format!("puzzle has {} groups; expected 4", groups.len()), Vec::new(), Vec::new());
    }
    for (i, (_, words)) in groups.iter().enumerate() {
        let unique: HashSet<&Word> = words.iter().collect();
        if words.len() != 4 || unique.len() != 4 {
            report.hard(
                2,
                format!("group {} has {} distinct of {} words; expected 4", i, unique.len(), words.len()),
                words.iter().map(|w| w.as_str().to_owned()).collect(),
                vec![i],
            );
        }
    }
    for i in 0..groups.len() {
        for j in (i + 1)..groups.len() {
            if normalize_category(&groups[i].0) == normalize_category(&groups[j].0) {
                report.hard(
                    2,
                    format!("groups {i} and {j} share the category {:?}", groups[i].0),
                    Vec::new(),
                    vec![i, j],
                );
            }
        }
    }

    // 4: each word used exactly once (across groups)
    let mut homes: BTreeMap<&Word, Vec<usize>> = BTreeMap::new();
    for (i, (_, words)) in groups.iter().enumerate() {
        for w in words.iter().collect::<HashSet<_>>() {
            homes.entry(w).or_default().push(i);
        }
    }
    for (w, gs) in homes.iter().filter(|(_, gs)| gs.len() > 1) {
        report.hard(
            4,
            format!("word {:?} appears in groups {:?}", w.as_str(), gs),
            vec![w.as_str().to_owned()],
            gs.clone(),
        );
    }

    // 6: overly generic categories
    for (i, (category, _)) in groups.iter().enumerate() {
        if is_generic_category(category) {
            report.hard(
                6,
                format!("category {category:?} is too generic"),
                Vec::new(),
                vec![i],
            );
        }
    }

    check_principles(groups, &mut report);
    report
}

fn generic_category_pattern() -> &'static Regex {
    static PATTERN: OnceLock<Regex> = OnceLock::new();
    PATTERN.get_or_init(|| {
        Regex::new(
            r"^(?:(?:\d+|one|two|three|four|five|six|seven|eight|nine|ten)[- ]letter words|names|verbs|nouns|words)$",
        )
        .unwrap()
    })
}

/// Deny-list check for categories no more specific than a word class.
pub fn is_generic_category(category: &str) -> bool {
    generic_category_pattern().is_match(&normalize_category(category))
}

fn jaccard(a: &HashSet<String>, b: &HashSet<String>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 0.0;
    }
    a.intersection(b).count() as f64 / union as f64
}

fn check_principles(groups: &[(String, Vec<Word>)], report: &mut ValidationReport) {
    for (i, (category, words)) in groups.iter().enumerate() {
        let tokens = category_tokens(category);
        for w in words {
            if tokens.iter().any(|t| t == w.as_str()) {
                report.warn(
                    Principle::UniqueNames,
                    format!("word {:?} appears in its own category name {:?}", w.as_str(), category),
                    vec![i],
                );
            }
        }
    }

    let token_sets: Vec<HashSet<String>> = groups
        .iter()
        .map(|(c, _)| category_tokens(c).into_iter().collect())
        .collect();
    for i in 0..groups.len() {
        for j in (i + 1)..groups.len() {
            if normalize_category(&groups[i].0) == normalize_category(&groups[j].0) {
                continue;
            }
            let score = jaccard(&token_sets[i], &token_sets[j]);
            if score >= VARIED_CATEGORIES_JACCARD {
                report.warn(
                    Principle::VariedCategories,
                    format!(
                        "categories {:?} and {:?} overlap (token Jaccard {score:.2})",
                        groups[i].0, groups[j].0
                    ),
                    vec![i, j],
                );
            }
        }
    }

    // Near-identical spellings on one board (BE / BEE) make the intended
    // spelling ambiguous.
    let board: Vec<(usize, &Word)> = groups
        .iter()
        .enumerate()
        .flat_map(|(i, (_, ws))| ws.iter().map(move |w| (i, w)))
        .collect();
    for a in 0..board.len() {
        for b in (a + 1)..board.len() {
            let (ga, wa) = board[a];
            let (gb, wb) = board[b];
            if wa == wb {
                continue;
            }
            if strsim::levenshtein(wa.as_str(), wb.as_str()) == 1 {
                report.warn(
                    Principle::SpellingMatters,
                    format!("{:?} and {:?} differ by a single letter", wa.as_str(), wb.as_str()),
                    vec![ga, gb],
                );
            }
        }
    }
}
