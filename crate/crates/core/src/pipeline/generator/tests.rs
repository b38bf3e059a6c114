use super::*;
use crate::difficulty::FixtureEmbeddings;
use crate::llm::{ScriptedProvider, ScriptedReply};
use crate::puzzle::serialize_puzzle;

const EMBEDDINGS: &str = include_str!("../../../fixtures/embeddings.json");

fn store() -> EmbeddingStore {
    EmbeddingStore::from_fixture_json(EMBEDDINGS).unwrap()
}

fn generator(replies: Vec<&str>) -> (Generator, Arc<ScriptedProvider>) {
    let provider = Arc::new(ScriptedProvider::new(replies.into_iter().map(ScriptedReply::from)));
    let gateway = Gateway::deterministic(provider.clone());
    (Generator::new(gateway, Arc::new(FixtureEmbeddings::new(store()))), provider)
}

fn script(name: &str) -> Vec<String> {
    let text = match name {
        "overlap" => include_str!("../../../fixtures/scripts/overlap.json"),
        "false_group_llm" => include_str!("../../../fixtures/scripts/false_group_llm.json"),
        "false_group_seeded" => include_str!("../../../fixtures/scripts/false_group_seeded.json"),
        "one_step" => include_str!("../../../fixtures/scripts/one_step.json"),
        _ => unreachable!(),
    };
    serde_json::from_str(text).unwrap()
}

fn scripted(name: &str) -> (Generator, Arc<ScriptedProvider>) {
    let replies = script(name);
    generator(replies.iter().map(String::as_str).collect())
}

fn road() -> WordGroup {
    WordGroup::from_strs("___ ROAD", ["abbey", "high", "rocky", "silk"], None).unwrap()
}

fn cfg(subtype: Subtype) -> GenerationConfig {
    let c = GenerationConfig::new(subtype, 7);
    if subtype == Subtype::FalseGroupSeeded {
        c.with_seeded_false_group(road())
    } else {
        c
    }
}

const FIRE: &str = "STORY: The alarm rang as the fire spread.\nSTYLE: Fill in the blank\nCATEGORY: WORDS THAT CAN FOLLOW \"FIRE\"\nWORDS: alarm, place, work, fly, cracker, arm, side, drill";

#[test]
fn root_group_from_story_prompt() {
    let (g, _) = generator(vec![FIRE]);
    let c = cfg(Subtype::Overlap);
    let mut log = g.new_log("t");
    let root = g.propose_root_group(&c, &mut log).unwrap();
    assert_eq!(root.category, "WORDS THAT CAN FOLLOW \"FIRE\"");
    assert_eq!(root.style, "Fill in the blank");
    assert_eq!(root.pool.words().len(), 8);
    let req = &log.transcript.exchanges()[0].request;
    assert!(req.messages[0].content.contains("short story"));
    assert!(req.messages[0].content.contains("Wordplay"));
    for w in &c.seed_words {
        assert!(req.messages[1].content.contains(w.display()));
    }
}

#[test]
fn short_pool_is_retried() {
    let seven = "STORY: s\nSTYLE: Wordplay\nCATEGORY: X\nWORDS: a, b, c, d, e, f, g";
    let (g, provider) = generator(vec![seven, FIRE]);
    let mut log = g.new_log("t");
    let root = g.propose_root_group(&cfg(Subtype::Overlap), &mut log).unwrap();
    assert_eq!(root.pool.words().len(), 8);
    assert_eq!(provider.remaining(), 0);
    assert_eq!(log.transcript.len(), 2);
    let retry = &log.transcript.exchanges()[1].request.messages;
    assert!(retry.last().unwrap().content.contains("Follow the requested format exactly"));
}

#[test]
fn retry_budget_exhausts_to_parse_failure() {
    let seven = "STORY: s\nSTYLE: Wordplay\nCATEGORY: X\nWORDS: a, b, c, d, e, f, g";
    let (g, _) = generator(vec![seven; 3]);
    let mut log = g.new_log("t");
    let err = g.propose_root_group(&cfg(Subtype::Overlap), &mut log).unwrap_err();
    assert!(matches!(err, PipelineError::ParseFailure { stage: Stage::Root, attempts: 3, .. }), "{err}");
}

#[test]
fn unknown_style_is_a_violation() {
    let (g, _) = generator(vec!["STORY: s\nSTYLE: Rhymes\nCATEGORY: X\nWORDS: a, b, c, d, e, f, g, h"]);
    let mut log = g.new_log("t");
    assert!(matches!(
        g.propose_root_group(&cfg(Subtype::Overlap), &mut log),
        Err(PipelineError::StyleViolation(s)) if s == "Rhymes"
    ));
}

#[test]
fn overlap_expansion_links_source_word() {
    let music = WordGroup::from_strs("MUSIC GENRES", ["jazz", "blues", "rock", "punk"], None).unwrap();
    let nba = "ALTERNATES:\njazz -> NBA TEAMS\nSOURCE: jazz\nSTYLE: Members of a set\nCATEGORY: NBA TEAMS\nWORDS: heat, bucks, nets, magic, suns, kings, bulls, spurs";
    let (g, _) = generator(vec![nba]);
    let mut log = g.new_log("t");
    let next = g.expand_overlap(std::slice::from_ref(&music), &cfg(Subtype::Overlap), &mut log).unwrap();
    assert_eq!(next.category, "NBA TEAMS");
    assert_eq!(next.source_word.unwrap().as_str(), "jazz");
    assert!(log.transcript.exchanges()[0].request.messages[1].content.contains("MUSIC GENRES: jazz, blues, rock, punk"));

    let reuse = nba.replace("spurs", "blues");
    let (g, _) = generator(vec![reuse.as_str()]);
    let mut log = g.new_log("t");
    assert!(matches!(
        g.expand_overlap(std::slice::from_ref(&music), &cfg(Subtype::Overlap), &mut log),
        Err(PipelineError::OverlapViolation(_))
    ));

    let stray = nba.replace("SOURCE: jazz", "SOURCE: salsa");
    let (g, _) = generator(vec![stray.as_str()]);
    assert!(matches!(
        g.expand_overlap(&[music], &cfg(Subtype::Overlap), &mut g.new_log("t")),
        Err(PipelineError::OverlapViolation(_))
    ));
}

#[test]
fn false_group_followups_need_their_anchor() {
    let nba = WordGroup::from_strs("NBA TEAMS", ["bucks", "heat", "jazz", "nets"], None).unwrap();
    let s = script("false_group_llm");
    let (g, _) = generator(s[1..5].iter().map(String::as_str).collect());
    let mut log = g.new_log("t");
    let groups = g.expand_false_group(&nba, &cfg(Subtype::FalseGroupLlm), &mut log).unwrap();
    let anchors: Vec<&str> = groups.iter().map(|p| p.source_word.as_ref().unwrap().as_str()).collect();
    assert_eq!(anchors, ["bucks", "heat", "jazz", "nets"]);

    let missing = "STYLE: Synonyms or Slang\nCATEGORY: SLANG FOR MONEY\nWORDS: cash, bread, dough, cheddar, clams, moolah, loot, dosh";
    let (g, _) = generator(vec![missing]);
    let mut log = g.new_log("t");
    assert!(matches!(
        g.expand_false_group(&nba, &cfg(Subtype::FalseGroupLlm), &mut log),
        Err(PipelineError::MissingAnchor { anchor, .. }) if anchor == "bucks"
    ));
}

#[test]
fn editor_renames_misnamed_group() {
    let p = Puzzle {
        id: "e".into(),
        source: Source::Ai,
        subtype: Subtype::Overlap,
        groups: [
            WordGroup::from_strs("HAWK THE WARES", ["wares", "items", "goods", "merchandise"], None).unwrap(),
            WordGroup::from_strs("FISH", ["bass", "flounder", "salmon", "trout"], None).unwrap(),
            WordGroup::from_strs("___ ROAD", ["abbey", "high", "rocky", "silk"], None).unwrap(),
            WordGroup::from_strs("SLANG FOR TOILET", ["can", "head", "john", "throne"], None).unwrap(),
        ],
        false_group: None,
        seed_words: None,
        provenance: None,
    };
    let reply = "THEME 1: things offered to buyers\nCATEGORY 1: THINGS FOR SALE\nWORDS 1: wares, items, goods, stock\nTHEME 2: fish\nCATEGORY 2: FISH\nTHEME 3: roads\nCATEGORY 3: ___ ROAD\nTHEME 4: toilet\nCATEGORY 4: SLANG FOR TOILET";
    let (g, _) = generator(vec![reply]);
    let mut log = g.new_log("t");
    let out = g.edit_puzzle(&p, &cfg(Subtype::Overlap), &mut log).unwrap();
    assert_eq!(out.groups[0].category, "THINGS FOR SALE");
    assert_eq!(out.groups[0].words, p.groups[0].words);
    assert!(log.warnings.iter().any(|w| w.contains("change the words")));

    let (g, _) = generator(vec!["nothing useful"; 3]);
    let mut log = g.new_log("t");
    let out = g.edit_puzzle(&p, &cfg(Subtype::Overlap), &mut log).unwrap();
    assert_eq!(out, p);
    assert!(log.warnings.iter().any(|w| w.contains("unedited")));
}

#[test]
fn ranker_retries_then_falls_back() {
    let s = store();
    let p = Puzzle {
        id: "r".into(),
        source: Source::Ai,
        subtype: Subtype::FalseGroupSeeded,
        groups: [
            WordGroup::from_strs("A", ["abbey", "chapel", "temple", "mosque"], Some(Color::Purple)).unwrap(),
            WordGroup::from_strs("B", ["high", "old", "boarding", "summer"], Some(Color::Blue)).unwrap(),
            WordGroup::from_strs("C", ["rocky", "rambo", "cobra", "cliffhanger"], Some(Color::Green)).unwrap(),
            WordGroup::from_strs("D", ["silk", "cotton", "wool", "linen"], Some(Color::Yellow)).unwrap(),
        ],
        false_group: None,
        seed_words: None,
        provenance: None,
    };
    let dup = "GROUP 1: yellow\nGROUP 2: yellow\nGROUP 3: blue\nGROUP 4: purple";
    let good = "GROUP 1: green\nGROUP 2: yellow\nGROUP 3: purple\nGROUP 4: blue";
    let c = cfg(Subtype::FalseGroupSeeded);

    let (g, _) = generator(vec![good]);
    let out = g.rank_difficulty(&p, &c, Some(&s), &mut g.new_log("t")).unwrap();
    assert_eq!(out.colors().unwrap(), [Color::Green, Color::Yellow, Color::Purple, Color::Blue]);

    let (g, _) = generator(vec![dup, good]);
    let out = g.rank_difficulty(&p, &c, Some(&s), &mut g.new_log("t")).unwrap();
    assert_eq!(out.colors().unwrap(), [Color::Green, Color::Yellow, Color::Purple, Color::Blue]);

    let (g, _) = generator(vec![dup, dup]);
    let mut log = g.new_log("t");
    let out = g.rank_difficulty(&p, &c, Some(&s), &mut log).unwrap();
    let sims: Vec<f64> = p.groups.iter().map(|g| group_similarity(&g.words, &s).unwrap()).collect();
    let top = (0..4).reduce(|a, b| if sims[b] > sims[a] { b } else { a }).unwrap();
    assert_eq!(out.groups[top].color, Some(Color::Yellow));
    assert!(is_permutation(&out.colors().unwrap()));
    assert!(log.warnings.iter().any(|w| w.contains("fall back")));
}

#[test]
fn one_step_parses_and_validates() {
    let (g, _) = scripted("one_step");
    let c = cfg(Subtype::OneStep);
    let mut log = g.new_log("os");
    let p = g.generate_one_step(&c, "os", &mut log).unwrap();
    assert_eq!(p.subtype, Subtype::OneStep);
    assert!(validate_puzzle(&p).is_valid());
    let system = &log.transcript.exchanges()[0].request.messages[0].content;
    assert!(system.contains("KITCHEN UTENSILS"), "few-shot examples are in the prompt");

    let fifteen = script("one_step")[0].replace("candy, crow, space, chocolate", "candy, crow, space");
    let (g, _) = generator(vec![fifteen.as_str()]);
    let err = g.generate_one_step(&c, "os", &mut g.new_log("os")).unwrap_err();
    match err {
        PipelineError::ValidationFailure(r) => assert!(r.violates(1)),
        other => panic!("{other}"),
    }
}

#[test]
fn one_step_rejects_copied_example() {
    let leak = script("one_step")[0].replace("alpha, delta, sigma, omega", "maple, birch, cedar, willow");
    let (g, _) = generator(vec![leak.as_str()]);
    assert!(matches!(
        g.generate_one_step(&cfg(Subtype::OneStep), "os", &mut g.new_log("os")),
        Err(PipelineError::FewShotLeak(_))
    ));
}

fn run(name: &str, subtype: Subtype) -> GenerationRun {
    let (g, provider) = scripted(name);
    let out = g.run(&cfg(subtype), "run-1").unwrap();
    assert_eq!(provider.remaining(), 0, "every scripted reply consumed");
    out
}

#[test]
fn overlap_run_links_three_groups() {
    let r = run("overlap", Subtype::Overlap);
    let p = &r.puzzle;
    assert_eq!(p.id, "run-1");
    assert_eq!(p.provenance.as_deref(), Some("run-1"));
    assert!(validate_puzzle(p).is_valid());
    let links: Vec<&ProposedGroup> = r.proposed.iter().filter(|g| g.source_word.is_some()).collect();
    assert_eq!(links.len(), 3);
    for g in links {
        let src = g.source_word.as_ref().unwrap();
        let home = p.group_of(src).expect("source word stays on the board");
        assert_ne!(p.groups[home].category, g.category);
    }
    assert_eq!(r.candidate_count, 24);
}

#[test]
fn false_group_runs_place_one_decoy_word_per_group() {
    for (name, subtype) in [("false_group_llm", Subtype::FalseGroupLlm), ("false_group_seeded", Subtype::FalseGroupSeeded)] {
        let r = run(name, subtype);
        let p = &r.puzzle;
        let fg = p.false_group.as_ref().unwrap();
        for g in &p.groups {
            assert_eq!(g.overlap(fg.words.iter()), 1, "{name}: {}", g.category);
        }
        assert!(validate_puzzle(p).is_valid());
        assert!(is_permutation(&p.colors().unwrap()));
    }
}

#[test]
fn llm_false_group_is_root_yellow_quartet() {
    let r = run("false_group_llm", Subtype::FalseGroupLlm);
    let s = store();
    let root = &r.proposed[0];
    let best = crate::difficulty::score_quartets(&root.pool, &s, &[])
        .unwrap()
        .into_iter()
        .map(|q| q.similarity)
        .fold(f64::MIN, f64::max);
    let fg = r.false_group.unwrap();
    assert!((group_similarity(&fg.words, &s).unwrap() - best).abs() < 1e-12);
}

#[test]
fn seeded_run_applies_editor_and_ranker_retry() {
    let r = run("false_group_seeded", Subtype::FalseGroupSeeded);
    assert!(r.puzzle.groups.iter().any(|g| g.category == "SYLVESTER STALLONE FILMS"));
    assert_eq!(
        r.puzzle.colors().unwrap(),
        [Color::Yellow, Color::Green, Color::Purple, Color::Blue]
    );
    assert!(r.puzzle.seed_words.is_none());
}

#[test]
fn runs_are_byte_identical() {
    for (name, subtype) in [
        ("overlap", Subtype::Overlap),
        ("false_group_llm", Subtype::FalseGroupLlm),
        ("false_group_seeded", Subtype::FalseGroupSeeded),
        ("one_step", Subtype::OneStep),
    ] {
        let a = run(name, subtype);
        let b = run(name, subtype);
        assert_eq!(serialize_puzzle(&a.puzzle), serialize_puzzle(&b.puzzle), "{name}");
        assert_eq!(a.transcript.to_jsonl(), b.transcript.to_jsonl(), "{name}");
    }
}

#[test]
fn anchors_follow_links() {
    let r = run("overlap", Subtype::Overlap);
    let a = anchors_for(Subtype::Overlap, &r.proposed);
    let names = |v: &Vec<Word>| v.iter().map(|w| w.as_str().to_owned()).collect::<Vec<_>>();
    assert_eq!(names(&a[0]), ["crane", "swallow"]);
    assert_eq!(names(&a[2]), ["bolt"]);
    assert!(a[1].is_empty() && a[3].is_empty());
}
