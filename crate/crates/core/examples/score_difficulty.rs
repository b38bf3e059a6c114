//! Picks per-color quartets from a word pool and summarizes a corpus by color.

use connections_core::difficulty::{corpus_color_stats, select_color_quartets, EmbeddingStore, WordPool};
use connections_core::puzzle::load_puzzles;
use connections_core::{Color, Word};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = env!("CARGO_MANIFEST_DIR");
    let store = EmbeddingStore::load(format!("{dir}/fixtures/embeddings.json"))?;
    let puzzles = load_puzzles(format!("{dir}/fixtures/puzzles/published_samples.json"))?;

    // pool: one group plus four words borrowed from the others
    let p = &puzzles[0];
    let mut words: Vec<Word> = p.groups[0].words.to_vec();
    words.extend(p.groups[1..].iter().flat_map(|g| g.words[..2].to_vec()).take(4));
    let pool = WordPool::new(p.groups[0].category.clone(), words)?;
    let q = select_color_quartets(&pool, &store)?;
    for color in Color::ALL {
        let pick = q.get(color);
        let ws: Vec<&str> = pick.words.iter().map(Word::as_str).collect();
        println!("{:<7} {:.4}  {}", color.as_str(), pick.similarity, ws.join(", "));
    }

    println!();
    for (color, s) in corpus_color_stats(&puzzles, &store)? {
        println!("{:<7} mean={:.4} var={:.4} n={}", color.as_str(), s.mean, s.variance, s.groups);
    }
    Ok(())
}
