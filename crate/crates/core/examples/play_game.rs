//! Plays one board: a near miss, a repeat, then every group.

use chrono::Utc;
use connections_core::analysis::synthetic::fixture_puzzle;
use connections_core::game::GameSession;
use connections_core::{Source, Subtype};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = fixture_puzzle("demo", Source::Ai, Subtype::FalseGroupSeeded);
    let mut s = GameSession::new("demo-session", p.clone(), 42)?;
    let board: Vec<&str> = s.board().remaining().iter().map(|w| w.display()).collect();
    println!("board: {}", board.join(" "));

    let word = |g: usize, k: usize| p.groups[g].words[k].as_str().to_owned();
    let near = [word(0, 0), word(0, 1), word(0, 2), word(1, 0)];
    let mut guesses = vec![near.to_vec(), near.to_vec()];
    guesses.extend(p.groups.iter().map(|g| g.words.iter().map(|w| w.as_str().to_owned()).collect()));
    for guess in guesses {
        let r = s.guess(&guess, Utc::now())?;
        let label = r.revealed.map(|g| g.category).unwrap_or_default();
        println!("{:?} -> {:?} {label} (mistakes {})", guess, r.verdict, r.mistakes_after);
    }
    println!("status: {:?}", s.board().status());
    println!("{}", serde_json::to_string_pretty(s.log())?);
    Ok(())
}
