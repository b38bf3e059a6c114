//! Constructed study logs with known outcomes, for tests, demos and
//! checking the report pipeline end to end.

use chrono::{DateTime, Duration, Utc};

use crate::game::{GameError, GameSession, PlaySession, Status};
use crate::puzzle::{Color, Puzzle, Source, Subtype, WordGroup};

const GRID: [(&str, [&str; 4]); 4] = [
    ("DOG BREEDS", ["beagle", "poodle", "boxer", "pug"]),
    ("PASTA SHAPES", ["penne", "fusilli", "orzo", "rigatoni"]),
    ("THINGS THAT ARE RINGED", ["bell", "saturn", "phone", "circus"]),
    ("___ CAKE", ["cup", "pan", "cheese", "sponge"]),
];

/// A valid puzzle with fixed words. False-group subtypes get a false group
/// taking the first word of each group.
pub fn fixture_puzzle(id: &str, source: Source, subtype: Subtype) -> Puzzle {
    let group = |i: usize| {
        let (cat, words) = GRID[i];
        WordGroup::from_strs(cat, words, Some(Color::ALL[i])).expect("fixture words are valid")
    };
    let false_group = subtype.has_false_group().then(|| {
        WordGroup::from_strs("THINGS WITH BARKS", [GRID[0].1[0], GRID[1].1[0], GRID[2].1[0], GRID[3].1[0]], None)
            .expect("fixture words are valid")
    });
    Puzzle {
        id: id.to_owned(),
        source,
        subtype,
        groups: [group(0), group(1), group(2), group(3)],
        false_group,
        seed_words: None,
        provenance: Some("synthetic".into()),
    }
}

// Two words of group 0 with two of group 1. Index 0 is skipped so that a
// mistake never touches the fixture false group.
const MISTAKE_MIXES: [([usize; 2], [usize; 2]); 4] = [([1, 2], [1, 2]), ([1, 2], [1, 3]), ([1, 2], [2, 3]), ([1, 3], [1, 2])];

/// Plays `puzzle` with `mistakes` wrong guesses first. Four mistakes end
/// the game failed; fewer are followed by solving every group.
pub fn scripted_play(
    session_id: &str,
    puzzle: &Puzzle,
    mistakes: u8,
    start: DateTime<Utc>,
) -> Result<PlaySession, GameError> {
    let mut s = GameSession::new(session_id, puzzle.clone(), 0)?;
    let mut t = start;
    let mut tick = || {
        t += Duration::seconds(5);
        t
    };
    let [g0, g1, ..] = &puzzle.groups;
    for ([a, b], [c, d]) in MISTAKE_MIXES.iter().take(mistakes.min(4) as usize) {
        let guess = [
            g0.words[*a].as_str(),
            g0.words[*b].as_str(),
            g1.words[*c].as_str(),
            g1.words[*d].as_str(),
        ];
        s.guess(&guess, tick())?;
    }
    for g in &puzzle.groups {
        if s.board().status() != Status::InProgress {
            break;
        }
        let words: Vec<&str> = g.words.iter().map(|w| w.as_str()).collect();
        s.guess(&words, tick())?;
    }
    Ok(s.into_log())
}

/// One slice of a constructed study: `solved` of `sessions` plays, where
/// `perfect` of the solved ones had no mistakes. Solved plays that are not
/// perfect make one mistake; unsolved plays make four.
#[derive(Clone, Copy, Debug)]
pub struct SliceSpec {
    pub subtype: Subtype,
    pub sessions: usize,
    pub solved: usize,
    pub perfect: usize,
}

/// Puzzles and sessions realising each [`SliceSpec`], one puzzle per slice.
pub fn constructed_study(specs: &[SliceSpec]) -> Result<(Vec<Puzzle>, Vec<PlaySession>), GameError> {
    let start = DateTime::from_timestamp(1_700_000_000, 0).expect("valid timestamp");
    let mut puzzles = Vec::new();
    let mut sessions = Vec::new();
    for (k, spec) in specs.iter().enumerate() {
        let source = if spec.subtype == Subtype::Published { Source::Nyt } else { Source::Ai };
        let p = fixture_puzzle(&format!("fixture-{k}-{}", spec.subtype), source, spec.subtype);
        for i in 0..spec.sessions {
            let mistakes = match i {
                i if i < spec.perfect.min(spec.solved) => 0,
                i if i < spec.solved => 1,
                _ => 4,
            };
            sessions.push(scripted_play(&format!("{}-s{i}", p.id), &p, mistakes, start)?);
        }
        puzzles.push(p);
    }
    Ok((puzzles, sessions))
}

/// A study whose solve rates and mistake histograms hit the published
/// reference percentages: one-step 18/31, overlap 5/16 with every failure
/// at four mistakes, seeded false group 26/28 with 15 perfect plays, LLM
/// false group 5/9 and published 67/97.
pub fn reference_study() -> Vec<SliceSpec> {
    vec![
        SliceSpec { subtype: Subtype::OneStep, sessions: 31, solved: 18, perfect: 9 },
        SliceSpec { subtype: Subtype::Overlap, sessions: 16, solved: 5, perfect: 1 },
        SliceSpec { subtype: Subtype::FalseGroupLlm, sessions: 9, solved: 5, perfect: 2 },
        SliceSpec { subtype: Subtype::FalseGroupSeeded, sessions: 28, solved: 26, perfect: 15 },
        SliceSpec { subtype: Subtype::Published, sessions: 97, solved: 67, perfect: 30 },
    ]
}
