//! Drives one participant through a study in-process: issue a pair, play
//! both boards, submit the survey, then list the files written.

use std::sync::Arc;

use connections_core::analysis::{Choice, EnglishProficiency, PlayFrequency, SurveyResponse};
use connections_core::llm::SystemClock;
use connections_core::puzzle::load_puzzle_dir;
use connections_server::Study;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let puzzles = load_puzzle_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/puzzles"))?;
    let data = tempfile::tempdir()?;
    let mut study = Study::open(puzzles.clone(), data.path(), 1, Arc::new(SystemClock))?;

    let issued = study.issue_pair()?;
    println!("issued {} to {}", issued.pair_id, issued.token);
    for board in &issued.boards {
        // a participant would work this out; here we look it up
        let shown: Vec<&str> = board.words.iter().map(String::as_str).collect();
        let p = puzzles
            .iter()
            .find(|p| p.words().all(|w| shown.contains(&w.as_str())))
            .expect("board comes from the loaded set");
        for g in &p.groups {
            let words: Vec<String> = g.words.iter().map(|w| w.as_str().to_owned()).collect();
            let reply = study.guess(&issued.token, board.slot, &words)?;
            println!("slot {} {:?} -> {:?}", board.slot, words, reply.verdict);
        }
    }

    let ack = study.submit_survey(
        &issued.token,
        SurveyResponse {
            session_pair_id: issued.pair_id.clone(),
            username: "example".into(),
            english_proficiency: EnglishProficiency::Fluent,
            play_frequency: PlayFrequency::Weekly,
            seen_before: false,
            q_creative: Choice::Puzzle1,
            q_harder: Choice::Puzzle2,
            q_liked: Choice::TieNeither,
            free_text: Default::default(),
            submitted_at: None,
        },
    )?;
    for s in &ack.sources {
        println!("slot {} was {} ({:?})", s.slot, s.puzzle_id, s.source);
    }
    for entry in std::fs::read_dir(data.path())? {
        let entry = entry?;
        println!("{} {} bytes", entry.file_name().to_string_lossy(), entry.metadata()?.len());
    }
    Ok(())
}
