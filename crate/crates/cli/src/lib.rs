//! Subcommands of the `connections` binary.

use std::fmt::Write as _;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use connections_core::analysis::{analyze, read_jsonl, render_markdown, PuzzlePair, SurveyResponse};
use connections_core::difficulty::{
    corpus_color_stats, group_similarity, EmbeddingProvider, EmbeddingStore, FixtureEmbeddings, RemoteEmbeddings,
};
use connections_core::game::PlaySession;
use connections_core::llm::{ChatProvider, Gateway, GatewayConfig, RemoteProvider, ScriptedProvider, SystemClock};
use connections_core::pipeline::{parse_group_json, GenerationConfig, Generator};
use connections_core::puzzle::{load_puzzle_dir, load_puzzles, serialize_puzzle};
use connections_core::{Puzzle, Subtype};

#[derive(Debug, Parser)]
#[command(name = "connections", version, about = "Generate, score, serve and analyze word-grouping puzzles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate puzzles; writes `<id>.json` and `<id>.transcript.jsonl` per run.
    Generate {
        #[arg(long, value_parser = parse_subtype)]
        subtype: Subtype,
        #[arg(long, default_value_t = 1)]
        count: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `{"category", "words"}` file, required for false_group_seeded.
        #[arg(long)]
        seeded_false_group: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Scripted replies instead of the remote provider (LLM_ENDPOINT).
        #[arg(long)]
        script: Option<PathBuf>,
        /// Embedding fixture instead of the remote service (EMBEDDING_ENDPOINT).
        #[arg(long)]
        embeddings: Option<PathBuf>,
    },
    /// Run the category editor on existing puzzles.
    Edit {
        #[arg(long)]
        puzzle: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        script: Option<PathBuf>,
    },
    /// Assign difficulty colors to existing puzzles.
    Rank {
        #[arg(long)]
        puzzle: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        script: Option<PathBuf>,
        /// Used when the ranker's answer is unusable.
        #[arg(long)]
        embeddings: Option<PathBuf>,
    },
    /// Print per-group similarity and per-color stats as TSV.
    Score {
        /// A puzzle file or a directory of them.
        #[arg(long)]
        puzzles: PathBuf,
        #[arg(long)]
        embeddings: PathBuf,
    },
    /// Write the study report.
    Analyze {
        #[arg(long)]
        sessions: PathBuf,
        #[arg(long)]
        surveys: Option<PathBuf>,
        #[arg(long)]
        puzzles: PathBuf,
        #[arg(long)]
        report: PathBuf,
        /// Pair log; defaults to `pairs.jsonl` next to the surveys file.
        #[arg(long)]
        pairs: Option<PathBuf>,
    },
    /// Run the study server.
    Serve {
        #[arg(long)]
        puzzles: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
    },
}

fn parse_subtype(s: &str) -> Result<Subtype, String> {
    Subtype::parse(s).ok_or_else(|| format!("unknown subtype {s:?}"))
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate {
            subtype,
            count,
            seed,
            seeded_false_group,
            out,
            script,
            embeddings,
        } => {
            let gen = Generator::new(gateway(script.as_deref())?, embedder(embeddings.as_deref())?);
            let seeded = seeded_false_group
                .map(|p| -> Result<_> { Ok(parse_group_json(&read(&p)?)?) })
                .transpose()?;
            std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            for i in 0..count {
                let run_seed = seed.wrapping_add(i as u64);
                let mut cfg = GenerationConfig::new(subtype, run_seed);
                if let Some(g) = &seeded {
                    cfg = cfg.with_seeded_false_group(g.clone());
                }
                let run_id = format!("{subtype}-s{run_seed}");
                let run = gen.run(&cfg, &run_id).with_context(|| format!("run {run_id}"))?;
                for w in &run.warnings {
                    log::warn!("{run_id}: {w}");
                }
                write(&out.join(format!("{run_id}.json")), &serialize_puzzle(&run.puzzle))?;
                write(&out.join(format!("{run_id}.transcript.jsonl")), &run.transcript.to_jsonl())?;
                println!("{run_id}\t{} candidates\t{} exchanges", run.candidate_count, run.transcript.len());
            }
            Ok(())
        }
        Command::Edit { puzzle, out, seed, script } => {
            let gen = Generator::new(gateway(script.as_deref())?, no_embeddings());
            stage_each(&puzzle, &out, seed, |p, cfg, log| Ok(gen.edit_puzzle(p, cfg, log)?), &gen)
        }
        Command::Rank {
            puzzle,
            out,
            seed,
            script,
            embeddings,
        } => {
            let fixture = embeddings.as_deref().map(EmbeddingStore::load).transpose()?;
            let gen = Generator::new(gateway(script.as_deref())?, no_embeddings());
            stage_each(
                &puzzle,
                &out,
                seed,
                |p, cfg, log| Ok(gen.rank_difficulty(p, cfg, fixture.as_ref(), log)?),
                &gen,
            )
        }
        Command::Score { puzzles, embeddings } => {
            let puzzles = puzzles_at(&puzzles)?;
            let store = EmbeddingStore::load(&embeddings)?;
            print!("{}", score_tsv(&puzzles, &store)?);
            Ok(())
        }
        Command::Analyze {
            sessions,
            surveys,
            puzzles,
            report,
            pairs,
        } => {
            let sessions: Vec<PlaySession> = read_jsonl(&sessions)?;
            let pairs_path = pairs.or_else(|| {
                let sibling = surveys.as_ref()?.parent()?.join("pairs.jsonl");
                sibling.exists().then_some(sibling)
            });
            let surveys: Vec<SurveyResponse> = match &surveys {
                Some(p) => read_jsonl(p)?,
                None => Vec::new(),
            };
            let pairs: Option<Vec<PuzzlePair>> = pairs_path.as_deref().map(read_jsonl).transpose()?;
            let puzzles = puzzles_at(&puzzles)?;
            let r = analyze(&sessions, &surveys, pairs.as_deref(), &puzzles)?;
            write(&report, &render_markdown(&r))?;
            if let Some(x) = &r.chi_squared {
                println!("X^2({}, N={}) = {:.2}, {} (p = {:.6})", x.df, x.n, x.statistic, x.p_band(), x.p_value);
            }
            println!("report written to {}", report.display());
            Ok(())
        }
        Command::Serve {
            puzzles,
            data,
            port,
            seed,
            host,
        } => {
            let cfg = connections_server::ServeConfig {
                puzzles,
                data,
                addr: SocketAddr::new(host, port),
                seed,
            };
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(connections_server::serve(cfg))?;
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn puzzles_at(path: &Path) -> Result<Vec<Puzzle>> {
    Ok(if path.is_dir() { load_puzzle_dir(path)? } else { load_puzzles(path)? })
}

fn gateway(script: Option<&Path>) -> Result<Gateway> {
    if let Some(path) = script {
        let provider: Arc<dyn ChatProvider> = Arc::new(ScriptedProvider::from_json(&read(path)?)?);
        return Ok(Gateway::deterministic(provider));
    }
    let Some(remote) = RemoteProvider::from_env() else {
        bail!("no chat provider: pass --script or set LLM_ENDPOINT");
    };
    let mut config = GatewayConfig::default();
    if let Ok(model) = std::env::var("LLM_MODEL") {
        config.model = model;
    }
    Ok(Gateway::new(Arc::new(remote), config, Arc::new(SystemClock)))
}

fn embedder(fixture: Option<&Path>) -> Result<Arc<dyn EmbeddingProvider>> {
    if let Some(path) = fixture {
        return Ok(Arc::new(FixtureEmbeddings::new(EmbeddingStore::load(path)?)));
    }
    match RemoteEmbeddings::from_env() {
        Some(r) => Ok(Arc::new(r)),
        None => bail!("no embeddings: pass --embeddings or set EMBEDDING_ENDPOINT"),
    }
}

fn no_embeddings() -> Arc<dyn EmbeddingProvider> {
    Arc::new(FixtureEmbeddings::new(EmbeddingStore::new(1).expect("dimension 1 is valid")))
}

fn stage_each(
    input: &Path,
    out: &Path,
    seed: u64,
    mut stage: impl FnMut(&Puzzle, &GenerationConfig, &mut connections_core::pipeline::RunLog) -> Result<Puzzle>,
    gen: &Generator,
) -> Result<()> {
    let puzzles = puzzles_at(input)?;
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    for p in &puzzles {
        let subtype = if p.subtype == Subtype::Published { Subtype::OneStep } else { p.subtype };
        let cfg = GenerationConfig::new(subtype, seed);
        let mut log = gen.new_log(&p.id);
        let done = stage(p, &cfg, &mut log)?;
        for w in &log.warnings {
            log::warn!("{}: {w}", p.id);
        }
        write(&out.join(format!("{}.json", p.id)), &serialize_puzzle(&done))?;
        write(&out.join(format!("{}.transcript.jsonl", p.id)), &log.transcript.to_jsonl())?;
        println!("{}\t{} exchanges", p.id, log.transcript.len());
    }
    Ok(())
}

/// Per-group rows followed by per-color rows.
pub fn score_tsv(puzzles: &[Puzzle], store: &EmbeddingStore) -> Result<String> {
    let mut out = String::from("category\twords\tsimilarity\tcolor\n");
    for p in puzzles {
        for g in &p.groups {
            let words: Vec<&str> = g.words.iter().map(|w| w.as_str()).collect();
            let sim = group_similarity(&g.words, store)?;
            let color = g.color.map_or("", |c| c.as_str());
            let _ = writeln!(out, "{}\t{}\t{sim:.4}\t{color}", g.category, words.join(", "));
        }
    }
    if puzzles.iter().all(|p| p.colors().is_some()) {
        out.push_str("\ncolor\tmean\tvariance\tgroups\n");
        for (c, s) in corpus_color_stats(puzzles, store)? {
            let _ = writeln!(out, "{c}\t{:.4}\t{:.4}\t{}", s.mean, s.variance, s.groups);
        }
    }
    Ok(out)
}
