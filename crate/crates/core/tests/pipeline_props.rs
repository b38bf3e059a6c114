use std::sync::Arc;

use connections_core::difficulty::{EmbeddingStore, FixtureEmbeddings};
use connections_core::llm::{Gateway, ScriptedProvider, ScriptedReply};
use connections_core::pipeline::{GenerationConfig, GenerationRun, Generator};
use connections_core::puzzle::{deserialize_puzzle, serialize_puzzle, validate_puzzle};
use connections_core::{Color, Subtype, WordGroup};
use proptest::prelude::*;

const EMBEDDINGS: &str = include_str!("../fixtures/embeddings.json");
const HAWK: &str = include_str!("../fixtures/editor/hawk_the_wares.json");

fn script(subtype: Subtype) -> Vec<String> {
    let text = match subtype {
        Subtype::Overlap => include_str!("../fixtures/scripts/overlap.json"),
        Subtype::FalseGroupLlm => include_str!("../fixtures/scripts/false_group_llm.json"),
        Subtype::FalseGroupSeeded => include_str!("../fixtures/scripts/false_group_seeded.json"),
        _ => include_str!("../fixtures/scripts/one_step.json"),
    };
    serde_json::from_str(text).unwrap()
}

fn generator(provider: ScriptedProvider) -> Generator {
    let store = EmbeddingStore::from_fixture_json(EMBEDDINGS).unwrap();
    Generator::new(Gateway::deterministic(Arc::new(provider)), Arc::new(FixtureEmbeddings::new(store)))
}

fn cfg(subtype: Subtype) -> GenerationConfig {
    let c = GenerationConfig::new(subtype, 7);
    if subtype == Subtype::FalseGroupSeeded {
        c.with_seeded_false_group(WordGroup::from_strs("___ ROAD", ["abbey", "high", "rocky", "silk"], None).unwrap())
    } else {
        c
    }
}

const SUBTYPES: [Subtype; 4] = [Subtype::OneStep, Subtype::Overlap, Subtype::FalseGroupLlm, Subtype::FalseGroupSeeded];

// Script for `subtype` with a transient failure injected before each
// reply index in `fail_before`.
fn with_failures(subtype: Subtype, fail_before: &[usize]) -> Vec<ScriptedReply> {
    let mut out = Vec::new();
    for (i, text) in script(subtype).into_iter().enumerate() {
        if fail_before.contains(&i) {
            out.push(ScriptedReply::Fail { fail: "HTTP 503".into() });
        }
        out.push(ScriptedReply::Text(text));
    }
    out
}

fn run(replies: Vec<ScriptedReply>, subtype: Subtype) -> GenerationRun {
    generator(ScriptedProvider::new(replies)).run(&cfg(subtype), "prop").unwrap()
}

fn color_word() -> impl Strategy<Value = String> {
    prop_oneof![
        prop::sample::select(vec!["yellow", "green", "blue", "purple", "Yellow", "PURPLE"]).prop_map(String::from),
        "[a-z]{0,6}",
    ]
}

fn ranker_reply() -> impl Strategy<Value = String> {
    prop::collection::vec(color_word(), 4).prop_map(|cs| {
        cs.iter().enumerate().map(|(i, c)| format!("GROUP {}: {c}", i + 1)).collect::<Vec<_>>().join("\n")
    })
}

fn editor_reply() -> impl Strategy<Value = String> {
    (
        prop::collection::vec("[A-Z ]{0,20}", 4),
        prop::collection::vec(prop::option::of("[a-z]{3,8}(, [a-z]{3,8}){0,4}"), 4),
    )
        .prop_map(|(names, words)| {
            let mut lines = Vec::new();
            for (i, (n, w)) in names.iter().zip(&words).enumerate() {
                lines.push(format!("THEME {}: something", i + 1));
                lines.push(format!("CATEGORY {}: {n}", i + 1));
                if let Some(w) = w {
                    lines.push(format!("WORDS {}: {w}", i + 1));
                }
            }
            lines.join("\n")
        })
}

// Replies cover the full retry budget of each stage so a script never runs dry.
proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn editor_only_renames(replies in prop::collection::vec(editor_reply(), 3)) {
        let p = deserialize_puzzle(HAWK).unwrap();
        let g = generator(ScriptedProvider::new(replies));
        let mut log = g.new_log("e");
        let out = g.edit_puzzle(&p, &cfg(Subtype::Overlap), &mut log).unwrap();
        for (a, b) in out.groups.iter().zip(&p.groups) {
            prop_assert_eq!(&a.words, &b.words);
            prop_assert_eq!(a.color, b.color);
        }
        prop_assert!(validate_puzzle(&out).is_valid());
    }

    #[test]
    fn ranker_always_assigns_a_permutation(replies in prop::collection::vec(ranker_reply(), 4)) {
        let p = deserialize_puzzle(HAWK).unwrap();
        let store = EmbeddingStore::from_fixture_json(EMBEDDINGS).unwrap();
        let g = generator(ScriptedProvider::new(replies));
        let mut log = g.new_log("r");
        let out = g.rank_difficulty(&p, &cfg(Subtype::Overlap), Some(&store), &mut log).unwrap();
        let mut colors = out.colors().unwrap().to_vec();
        colors.sort();
        prop_assert_eq!(colors, Color::ALL.to_vec());
    }

    #[test]
    fn failures_are_recorded_and_replay(
        subtype in prop::sample::select(SUBTYPES.to_vec()),
        fail_before in prop::collection::vec(0usize..12, 0..4),
    ) {
        let clean = run(with_failures(subtype, &[]), subtype);
        let replies = with_failures(subtype, &fail_before);
        let injected = replies.iter().filter(|r| matches!(r, ScriptedReply::Fail { .. })).count();
        let flaky = run(replies, subtype);

        // transient failures change the transcript, never the puzzle
        prop_assert_eq!(serialize_puzzle(&flaky.puzzle), serialize_puzzle(&clean.puzzle));
        let failed = flaky.transcript.exchanges().iter().filter(|e| e.error.is_some()).count();
        prop_assert_eq!(failed, injected);
        prop_assert_eq!(flaky.transcript.len(), clean.transcript.len() + injected);

        // the transcript alone reproduces the run
        let again = run_from(&flaky, subtype);
        prop_assert_eq!(serialize_puzzle(&again.puzzle), serialize_puzzle(&flaky.puzzle));
        prop_assert_eq!(again.transcript.to_jsonl(), flaky.transcript.to_jsonl());
    }
}

fn run_from(prev: &GenerationRun, subtype: Subtype) -> GenerationRun {
    let g = generator(ScriptedProvider::from_transcript(&prev.transcript));
    g.run(&cfg(subtype), "prop").unwrap()
}

#[test]
fn every_subtype_replays_from_its_transcript() {
    for subtype in SUBTYPES {
        let first = run(with_failures(subtype, &[]), subtype);
        let second = run_from(&first, subtype);
        assert_eq!(serialize_puzzle(&first.puzzle), serialize_puzzle(&second.puzzle), "{subtype}");
        assert_eq!(first.transcript.to_jsonl(), second.transcript.to_jsonl(), "{subtype}");
    }
}
