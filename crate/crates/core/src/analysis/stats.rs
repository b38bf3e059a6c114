use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::{AnalysisError, Axis, ContingencyTable, Preference, PuzzlePair, SurveyResponse};
use crate::game::{PlaySession, Verdict, MAX_MISTAKES};
use crate::puzzle::{Puzzle, Source, Subtype, Word};

/// Puzzles indexed by id.
pub type PuzzleIndex<'a> = HashMap<&'a str, &'a Puzzle>;

pub fn index_puzzles(puzzles: &[Puzzle]) -> PuzzleIndex<'_> {
    puzzles.iter().map(|p| (p.id.as_str(), p)).collect()
}

/// A reporting slice: one AI subtype, all AI puzzles, or published ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Slice {
    Subtype(Subtype),
    AllAi,
    Nyt,
}

impl Slice {
    pub fn label(self) -> &'static str {
        match self {
            Slice::Subtype(s) => s.label(),
            Slice::AllAi => "All AI",
            Slice::Nyt => "NYT",
        }
    }

    /// Row order used in tables.
    pub fn table_order() -> Vec<Slice> {
        let mut v: Vec<Slice> = Subtype::ALL
            .iter()
            .filter(|s| **s != Subtype::Published)
            .map(|&s| Slice::Subtype(s))
            .collect();
        v.push(Slice::AllAi);
        v.push(Slice::Nyt);
        v
    }

    fn of(p: &Puzzle) -> Vec<Slice> {
        match p.source {
            Source::Nyt => vec![Slice::Nyt],
            Source::Ai => vec![Slice::Subtype(p.subtype), Slice::AllAi],
        }
    }
}

/// Percentage with two decimals, e.g. `58.06%`.
pub fn percent(fraction: f64) -> String {
    format!("{:.2}%", fraction * 100.0)
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn lookup<'a>(index: &PuzzleIndex<'a>, id: &str) -> Result<&'a Puzzle, AnalysisError> {
    index
        .get(id)
        .copied()
        .ok_or_else(|| AnalysisError::UnknownPuzzle(id.to_owned()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveRate {
    pub slice: Slice,
    pub solved: usize,
    pub sessions: usize,
    pub rate: f64,
}

/// Solved / total sessions per slice, in [`Slice::table_order`]. Slices with
/// no sessions are omitted.
pub fn solve_rates(sessions: &[PlaySession], puzzles: &PuzzleIndex) -> Result<Vec<SolveRate>, AnalysisError> {
    let mut counts: BTreeMap<Slice, (usize, usize)> = BTreeMap::new();
    for s in sessions {
        let p = lookup(puzzles, &s.puzzle_id)?;
        for slice in Slice::of(p) {
            let e = counts.entry(slice).or_default();
            e.0 += usize::from(s.solved);
            e.1 += 1;
        }
    }
    Ok(Slice::table_order()
        .into_iter()
        .filter_map(|slice| {
            counts.get(&slice).map(|&(solved, n)| SolveRate {
                slice,
                solved,
                sessions: n,
                rate: ratio(solved, n),
            })
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MistakeHistogram {
    pub slice: Slice,
    /// Sessions ending with 0..=4 mistakes.
    pub counts: [usize; 5],
    pub fractions: [f64; 5],
}

impl MistakeHistogram {
    pub fn sessions(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Distribution of mistakes per play, per slice.
pub fn mistake_distribution(
    sessions: &[PlaySession],
    puzzles: &PuzzleIndex,
) -> Result<Vec<MistakeHistogram>, AnalysisError> {
    let mut counts: BTreeMap<Slice, [usize; 5]> = BTreeMap::new();
    for s in sessions {
        let p = lookup(puzzles, &s.puzzle_id)?;
        let k = s.mistakes().min(MAX_MISTAKES as usize);
        for slice in Slice::of(p) {
            counts.entry(slice).or_default()[k] += 1;
        }
    }
    Ok(Slice::table_order()
        .into_iter()
        .filter_map(|slice| {
            counts.get(&slice).map(|&c| {
                let n: usize = c.iter().sum();
                MistakeHistogram {
                    slice,
                    counts: c,
                    fractions: c.map(|k| ratio(k, n)),
                }
            })
        })
        .collect())
}

/// Whether a guess counts as falling for the false group: it shares at
/// least this many words with it.
pub const FALSE_GROUP_GUESS_MIN_SHARED: usize = 2;

/// True when some evaluated guess in the session shares at least two words
/// with `false_group`. Guesses rejected as invalid are ignored.
pub fn has_false_group_guess(session: &PlaySession, false_group: &[Word; 4]) -> bool {
    session
        .guesses
        .iter()
        .filter(|g| g.verdict != Verdict::RejectedInvalid)
        .any(|g| {
            let words: Vec<Word> = g.words.iter().filter_map(|w| Word::parse(w).ok()).collect();
            let mut shared: Vec<&Word> = words.iter().filter(|w| false_group.contains(w)).collect();
            shared.sort();
            shared.dedup();
            shared.len() >= FALSE_GROUP_GUESS_MIN_SHARED
        })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FalseGroupRate {
    pub puzzle_id: String,
    pub subtype: Subtype,
    pub tripped: usize,
    pub sessions: usize,
    pub rate: f64,
}

/// Share of sessions per false-group puzzle containing a false-group guess.
pub fn false_group_guess_rate(
    sessions: &[PlaySession],
    puzzles: &PuzzleIndex,
) -> Result<Vec<FalseGroupRate>, AnalysisError> {
    let mut counts: BTreeMap<&str, (Subtype, usize, usize)> = BTreeMap::new();
    for s in sessions {
        let p = lookup(puzzles, &s.puzzle_id)?;
        if !p.subtype.has_false_group() {
            continue;
        }
        let fg = p
            .false_group
            .as_ref()
            .ok_or_else(|| AnalysisError::MissingFalseGroup(p.id.clone()))?;
        let e = counts.entry(p.id.as_str()).or_insert((p.subtype, 0, 0));
        e.1 += usize::from(has_false_group_guess(s, &fg.words));
        e.2 += 1;
    }
    Ok(counts
        .into_iter()
        .map(|(id, (subtype, tripped, n))| FalseGroupRate {
            puzzle_id: id.to_owned(),
            subtype,
            tripped,
            sessions: n,
            rate: ratio(tripped, n),
        })
        .collect())
}

/// Slices x {solved, failed}; only slices with sessions are included and
/// the "All AI" aggregate is left out so rows are disjoint.
pub fn solve_table(sessions: &[PlaySession], puzzles: &PuzzleIndex) -> Result<ContingencyTable, AnalysisError> {
    let rates = solve_rates(sessions, puzzles)?;
    let rows: Vec<&SolveRate> = rates.iter().filter(|r| r.slice != Slice::AllAi).collect();
    ContingencyTable::new(
        rows.iter().map(|r| r.slice.label().to_owned()).collect(),
        vec!["solved".into(), "failed".into()],
        rows.iter()
            .map(|r| vec![r.solved as u64, (r.sessions - r.solved) as u64])
            .collect(),
    )
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PreferenceCounts {
    pub ai: usize,
    pub nyt: usize,
    pub tie: usize,
}

impl PreferenceCounts {
    pub fn total(&self) -> usize {
        self.ai + self.nyt + self.tie
    }

    fn add(&mut self, p: Preference) {
        match p {
            Preference::Ai => self.ai += 1,
            Preference::Nyt => self.nyt += 1,
            Preference::Tie => self.tie += 1,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct PreferenceTally {
    /// (slice, question) -> counts; slices are AI subtypes and "All AI".
    pub counts: BTreeMap<(Slice, Axis), PreferenceCounts>,
    pub included: usize,
    pub excluded_seen_before: usize,
}

impl PreferenceTally {
    pub fn get(&self, slice: Slice, axis: Axis) -> PreferenceCounts {
        self.counts.get(&(slice, axis)).copied().unwrap_or_default()
    }
}

/// Joins survey answers to their pair so that "Puzzle 1"/"Puzzle 2"
/// become AI/NYT. Responses from participants who had seen a puzzle before
/// are excluded.
pub fn preference_tally(
    responses: &[SurveyResponse],
    pairs: &[PuzzlePair],
    puzzles: &PuzzleIndex,
) -> Result<PreferenceTally, AnalysisError> {
    let by_id: HashMap<&str, &PuzzlePair> = pairs.iter().map(|p| (p.pair_id.as_str(), p)).collect();
    let mut tally = PreferenceTally::default();
    for r in responses {
        let pair = by_id
            .get(r.session_pair_id.as_str())
            .ok_or_else(|| AnalysisError::UnpairedResponse(r.session_pair_id.clone()))?;
        if r.seen_before {
            tally.excluded_seen_before += 1;
            continue;
        }
        let ai = lookup(puzzles, &pair.ai_puzzle_id)?;
        tally.included += 1;
        for axis in Axis::ALL {
            let pref = pair.resolve(r.answer(axis));
            for slice in [Slice::Subtype(ai.subtype), Slice::AllAi] {
                tally.counts.entry((slice, axis)).or_default().add(pref);
            }
        }
    }
    Ok(tally)
}

#[cfg(test)]
mod tests {
    use chrono::DateTime;

    use super::*;
    use crate::game::GuessRecord;
    use crate::puzzle::{Color, WordGroup};

    fn puzzle(id: &str, subtype: Subtype) -> Puzzle {
        let source = if subtype == Subtype::Published { Source::Nyt } else { Source::Ai };
        Puzzle {
            id: id.into(),
            source,
            subtype,
            groups: [
                WordGroup::from_strs("SLANG FOR MONEY", ["bucks", "bread", "dough", "clams"], Some(Color::Yellow)).unwrap(),
                WordGroup::from_strs("___ WAVE", ["heat", "micro", "brain", "tidal"], Some(Color::Green)).unwrap(),
                WordGroup::from_strs("___ HANDS", ["jazz", "farm", "deck", "stage"], Some(Color::Blue)).unwrap(),
                WordGroup::from_strs("THINGS WITH HOLES", ["nets", "sieve", "sponge", "flute"], Some(Color::Purple)).unwrap(),
            ],
            false_group: subtype
                .has_false_group()
                .then(|| WordGroup::from_strs("NBA TEAMS", ["bucks", "heat", "jazz", "nets"], None).unwrap()),
            seed_words: None,
            provenance: None,
        }
    }

    fn session(puzzle: &str, guesses: &[(&[&str], Verdict)], solved: bool) -> PlaySession {
        PlaySession {
            session_id: "s".into(),
            puzzle_id: puzzle.into(),
            guesses: guesses
                .iter()
                .map(|(w, v)| GuessRecord {
                    words: w.iter().map(|s| s.to_string()).collect(),
                    verdict: *v,
                    t: DateTime::UNIX_EPOCH,
                })
                .collect(),
            solved,
            completed_at: None,
        }
    }

    #[test]
    fn rates_per_slice_with_aggregates() {
        let ps = vec![puzzle("a", Subtype::OneStep), puzzle("n", Subtype::Published)];
        let idx = index_puzzles(&ps);
        let sessions = vec![session("a", &[], true), session("a", &[], false), session("n", &[], true)];
        let r = solve_rates(&sessions, &idx).unwrap();
        assert_eq!(r.iter().map(|r| r.slice).collect::<Vec<_>>(), [Slice::Subtype(Subtype::OneStep), Slice::AllAi, Slice::Nyt]);
        assert_eq!(percent(r[0].rate), "50.00%");
        assert_eq!(percent(r[2].rate), "100.00%");
        assert!(matches!(solve_rates(&[session("x", &[], true)], &idx), Err(AnalysisError::UnknownPuzzle(_))));
    }

    #[test]
    fn histogram_counts_mistakes() {
        let ps = vec![puzzle("a", Subtype::Overlap)];
        let idx = index_puzzles(&ps);
        let wrong: &[&str] = &["bucks", "heat", "jazz", "nets"];
        let s = session("a", &[(wrong, Verdict::Incorrect), (wrong, Verdict::RejectedDuplicate)], false);
        let h = mistake_distribution(&[s, session("a", &[], true)], &idx).unwrap();
        assert_eq!(h[0].counts, [1, 1, 0, 0, 0]);
        assert!((h[0].fractions.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn false_group_threshold_is_two_words() {
        let ps = vec![puzzle("f", Subtype::FalseGroupLlm)];
        let idx = index_puzzles(&ps);
        let one: &[&str] = &["bucks", "micro", "farm", "sieve"];
        let two: &[&str] = &["bucks", "heat", "farm", "sieve"];
        let all: &[&str] = &["bucks", "heat", "jazz", "nets"];
        let s1 = session("f", &[(one, Verdict::Incorrect)], false);
        let s2 = session("f", &[(two, Verdict::Incorrect)], false);
        let s4 = session("f", &[(all, Verdict::Incorrect)], false);
        let invalid = session("f", &[(all, Verdict::RejectedInvalid)], false);
        let r = false_group_guess_rate(&[s1.clone(), s2, s4, invalid], &idx).unwrap();
        assert_eq!((r[0].tripped, r[0].sessions), (2, 4));
        let mut missing = ps.clone();
        missing[0].false_group = None;
        assert!(matches!(
            false_group_guess_rate(&[s1], &index_puzzles(&missing)),
            Err(AnalysisError::MissingFalseGroup(_))
        ));
    }
}
