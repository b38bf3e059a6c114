//! Runs the overlap pipeline against canned model replies and prints the result.

use std::sync::Arc;

use connections_core::difficulty::{EmbeddingStore, FixtureEmbeddings};
use connections_core::llm::{Gateway, ScriptedProvider};
use connections_core::pipeline::{GenerationConfig, Generator};
use connections_core::puzzle::serialize_puzzle;
use connections_core::Subtype;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = env!("CARGO_MANIFEST_DIR");
    let script = std::fs::read_to_string(format!("{dir}/fixtures/scripts/overlap.json"))?;
    let provider = Arc::new(ScriptedProvider::from_json(&script)?);
    let store = EmbeddingStore::load(format!("{dir}/fixtures/embeddings.json"))?;
    let generator = Generator::new(Gateway::deterministic(provider), Arc::new(FixtureEmbeddings::new(store)));

    let run = generator.run(&GenerationConfig::new(Subtype::Overlap, 7), "example-overlap")?;
    println!("{}", serialize_puzzle(&run.puzzle));
    for g in &run.proposed {
        match &g.source_word {
            Some(w) => println!("{} (from {:?})", g.category, w.as_str()),
            None => println!("{}", g.category),
        }
    }
    println!("{} variants, {} model calls", run.candidate_count, run.transcript.len());
    for w in &run.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
