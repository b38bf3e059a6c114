use std::collections::BTreeSet;

use chrono::{DateTime, Utc};
use connections_core::analysis::synthetic::fixture_puzzle;
use connections_core::game::{replay, BoardState, GameError, GameSession, Status, Verdict, MAX_MISTAKES};
use connections_core::{Puzzle, Source, Subtype};
use proptest::prelude::*;

#[derive(Clone, Debug)]
enum Action {
    Guess(Vec<usize>),
    Junk,
    Shuffle,
}

fn action() -> impl Strategy<Value = Action> {
    prop_oneof![
        // mostly group-heavy picks so correct guesses actually happen
        6 => (0usize..4, prop::collection::vec(0usize..16, 4), 0usize..5).prop_map(|(g, mut idx, keep)| {
            for (k, slot) in idx.iter_mut().enumerate().take(keep.min(4)) {
                *slot = 4 * g + k;
            }
            Action::Guess(idx)
        }),
        2 => prop::collection::vec(0usize..16, 0..6).prop_map(Action::Guess),
        1 => Just(Action::Junk),
        1 => Just(Action::Shuffle),
    ]
}

fn puzzle() -> Puzzle {
    fixture_puzzle("fuzz", Source::Ai, Subtype::FalseGroupSeeded)
}

fn words(p: &Puzzle) -> Vec<String> {
    p.groups.iter().flat_map(|g| g.words.iter().map(|w| w.as_str().to_owned())).collect()
}

// Reference rules, written against the puzzle directly.
struct Referee {
    solved: Vec<usize>,
    wrong: Vec<BTreeSet<String>>,
    mistakes: u8,
}

impl Referee {
    fn judge(&mut self, p: &Puzzle, guess: &[String]) -> Verdict {
        let set: BTreeSet<String> = guess.iter().cloned().collect();
        let open: Vec<usize> = (0..4).filter(|g| !self.solved.contains(g)).collect();
        let on_board = |w: &String| open.iter().any(|&g| p.groups[g].words.iter().any(|x| x.as_str() == w));
        if guess.len() != 4 || set.len() != 4 || !set.iter().all(on_board) {
            return Verdict::RejectedInvalid;
        }
        if self.wrong.contains(&set) {
            return Verdict::RejectedDuplicate;
        }
        let (best, hits) = open
            .iter()
            .map(|&g| (g, p.groups[g].words.iter().filter(|w| set.contains(w.as_str())).count()))
            .max_by_key(|&(_, n)| n)
            .unwrap();
        if hits == 4 {
            self.solved.push(best);
            return Verdict::Correct;
        }
        self.wrong.push(set);
        self.mistakes += 1;
        if hits == 3 { Verdict::OneAway } else { Verdict::Incorrect }
    }
}

fn t0() -> DateTime<Utc> {
    DateTime::from_timestamp(1_700_000_000, 0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn fuzzed_play_follows_the_rules(seed in any::<u64>(), actions in prop::collection::vec(action(), 0..30)) {
        let p = puzzle();
        let all = words(&p);
        let mut s = GameSession::new("fuzz", p.clone(), seed).unwrap();
        let mut referee = Referee { solved: vec![], wrong: vec![], mistakes: 0 };
        let mut prev_mistakes = 0;
        let mut correct = 0;
        for a in &actions {
            let was = s.board().status();
            let guess: Vec<String> = match a {
                Action::Shuffle => {
                    let before: BTreeSet<String> = s.board().remaining().iter().map(|w| w.as_str().to_owned()).collect();
                    let r = s.shuffle();
                    if was.is_terminal() {
                        prop_assert!(matches!(r, Err(GameError::SessionClosed)));
                    } else {
                        let after: BTreeSet<String> = s.board().remaining().iter().map(|w| w.as_str().to_owned()).collect();
                        prop_assert_eq!(before, after);
                    }
                    continue;
                }
                Action::Junk => vec!["zzz".into(), "yyy".into(), "xxx".into(), "www".into()],
                Action::Guess(idx) => idx.iter().map(|&i| all[i].clone()).collect(),
            };
            let r = s.guess(&guess, t0());
            if was.is_terminal() {
                prop_assert!(matches!(r, Err(GameError::SessionClosed)));
                continue;
            }
            let r = r.unwrap();
            prop_assert_eq!(r.verdict, referee.judge(&p, &guess));
            if r.verdict == Verdict::Correct {
                correct += 1;
                prop_assert!(r.revealed.is_some());
            }
            let b = s.board();
            b.check_invariants().map_err(TestCaseError::fail)?;
            prop_assert!(b.mistakes() >= prev_mistakes);
            prop_assert!(b.mistakes() <= MAX_MISTAKES);
            prop_assert_eq!(b.mistakes(), referee.mistakes);
            prev_mistakes = b.mistakes();
            match b.status() {
                Status::Solved => prop_assert_eq!(correct, 4),
                Status::Failed => prop_assert_eq!(b.mistakes(), MAX_MISTAKES),
                Status::InProgress => prop_assert!(correct < 4 && b.mistakes() < MAX_MISTAKES),
            }
        }
        let status = s.board().status();
        let mistakes = s.board().mistakes();
        let log = s.into_log();
        prop_assert_eq!(log.solved, status == Status::Solved);
        let replayed = replay(&log, &p).unwrap();
        prop_assert_eq!(replayed.status(), status);
        prop_assert_eq!(replayed.mistakes(), mistakes);
        let logged_correct = log.guesses.iter().filter(|g| g.verdict == Verdict::Correct).count();
        prop_assert_eq!(logged_correct, correct);
    }

    #[test]
    fn layout_and_shuffles_depend_only_on_seed(seed in any::<u64>(), shuffles in 0usize..5) {
        let run = || {
            let mut b = BoardState::new(puzzle(), seed).unwrap();
            for _ in 0..shuffles {
                b.shuffle().unwrap();
            }
            b.remaining().to_vec()
        };
        prop_assert_eq!(run(), run());
    }
}

#[test]
fn tampered_log_fails_replay() {
    let p = puzzle();
    let mut s = GameSession::new("t", p.clone(), 1).unwrap();
    let g = &p.groups[0];
    let words: Vec<&str> = g.words.iter().map(|w| w.as_str()).collect();
    s.guess(&words, t0()).unwrap();
    let mut log = s.into_log();
    log.guesses[0].verdict = Verdict::Incorrect;
    assert!(replay(&log, &p).is_err());
}
