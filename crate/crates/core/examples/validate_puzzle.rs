//! Validates the bundled published samples, then a deliberately broken copy.

use connections_core::puzzle::{load_puzzles, validate_puzzle};
use connections_core::Word;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/puzzles/published_samples.json");
    let puzzles = load_puzzles(path)?;
    for p in &puzzles {
        let r = validate_puzzle(p);
        println!("{}: valid={} warnings={}", p.id, r.is_valid(), r.principle_warnings.len());
    }

    let mut broken = puzzles[0].clone();
    broken.groups[1].words[0] = broken.groups[0].words[0].clone();
    broken.groups[2].category = "NOUNS".into();
    broken.groups[3].words[3] = Word::parse(&format!("{}s", broken.groups[3].words[2].as_str()))?;
    let r = validate_puzzle(&broken);
    for v in &r.hard_violations {
        println!("constraint {}: {}", v.constraint, v.message);
    }
    for w in &r.principle_warnings {
        println!("{}: {}", w.principle, w.message);
    }
    Ok(())
}
