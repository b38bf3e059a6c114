#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use connections_core::llm::SystemClock;
use connections_core::puzzle::load_puzzle_dir;
use connections_core::Puzzle;
use connections_server::{router, SharedStudy, Study, TOKEN_HEADER};
use serde_json::Value;
use tokio::task::JoinHandle;

// Also compiled into the acceptance crate, which sits beside this one.
pub fn puzzle_dir() -> PathBuf {
    let here = Path::new(env!("CARGO_MANIFEST_DIR"));
    [here.join("fixtures/puzzles"), here.join("../server/fixtures/puzzles")]
        .into_iter()
        .find(|p| p.is_dir())
        .expect("study puzzle fixtures")
}

pub fn puzzles() -> Vec<Puzzle> {
    load_puzzle_dir(puzzle_dir()).unwrap()
}

pub struct Running {
    pub base: String,
    pub study: SharedStudy,
    task: JoinHandle<()>,
}

impl Running {
    /// Stops serving and drops all in-memory state.
    pub async fn kill(self) {
        self.task.abort();
        let _ = self.task.await;
    }
}

pub async fn start(data: &Path, seed: u64) -> Running {
    let study = Study::open(puzzles(), data, seed, Arc::new(SystemClock)).unwrap();
    let study = Arc::new(Mutex::new(study));
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let base = format!("http://{}", listener.local_addr().unwrap());
    let app = router(study.clone());
    let task = tokio::spawn(async move {
        axum::serve(listener, app).await.unwrap();
    });
    Running { base, study, task }
}

pub struct Client {
    pub http: reqwest::Client,
    pub base: String,
    pub token: Option<String>,
    /// Every response body seen, with the leaks found in it.
    pub seen: Vec<(String, Value, Vec<String>)>,
    pub puzzles: Vec<Puzzle>,
    /// Categories the player is entitled to know at this point.
    pub revealed: BTreeSet<String>,
    pub sources_revealed: bool,
}

impl Client {
    pub fn new(base: &str) -> Self {
        Client {
            http: reqwest::Client::new(),
            base: base.to_owned(),
            token: None,
            seen: Vec::new(),
            puzzles: puzzles(),
            revealed: BTreeSet::new(),
            sources_revealed: false,
        }
    }

    async fn finish(&mut self, what: &str, req: reqwest::RequestBuilder) -> (u16, Value) {
        let req = match &self.token {
            Some(t) => req.header(TOKEN_HEADER, t),
            None => req,
        };
        let resp = req.send().await.unwrap();
        let status = resp.status().as_u16();
        let body: Value = resp.json().await.unwrap();
        let found = if self.sources_revealed {
            Vec::new()
        } else {
            leaks(&body, &self.puzzles, &self.revealed)
        };
        self.seen.push((what.to_owned(), body.clone(), found));
        (status, body)
    }

    pub async fn get(&mut self, path: &str) -> (u16, Value) {
        let req = self.http.get(format!("{}{path}", self.base));
        self.finish(path, req).await
    }

    pub async fn post(&mut self, path: &str, body: Value) -> (u16, Value) {
        let req = self.http.post(format!("{}{path}", self.base)).json(&body);
        self.finish(path, req).await
    }

    pub async fn issue(&mut self) -> Value {
        let (status, body) = self.post("/api/pair", Value::Null).await;
        assert_eq!(status, 200, "{body}");
        self.token = Some(body["token"].as_str().unwrap().to_owned());
        body
    }

    pub async fn guess(&mut self, slot: u8, words: &[&str]) -> (u16, Value) {
        self.post("/api/guess", serde_json::json!({"slot": slot, "words": words})).await
    }
}

/// The puzzle whose 16 words are exactly `words`.
pub fn identify<'a>(puzzles: &'a [Puzzle], words: &Value) -> &'a Puzzle {
    let shown: BTreeSet<&str> = words.as_array().unwrap().iter().map(|w| w.as_str().unwrap()).collect();
    puzzles
        .iter()
        .find(|p| p.words().map(|w| w.as_str()).collect::<BTreeSet<_>>() == shown)
        .expect("board matches a loaded puzzle")
}

impl Client {
    /// Marks a puzzle's categories as known, e.g. before a guess that
    /// will finish it.
    pub fn reveal_all(&mut self, p: &Puzzle) {
        self.revealed.extend(p.groups.iter().map(|g| g.category.clone()));
    }

    pub fn leak_report(&self) -> Vec<String> {
        self.seen
            .iter()
            .filter(|(_, _, l)| !l.is_empty())
            .map(|(what, _, l)| format!("{what}: {l:?}"))
            .collect()
    }
}

pub fn group_words(p: &Puzzle, i: usize) -> Vec<&str> {
    p.groups[i].words.iter().map(|w| w.as_str()).collect()
}

/// Strings that must not appear in a payload while `solved` categories
/// are the only ones revealed: unrevealed category names, puzzle ids and
/// source labels.
pub fn leaks(body: &Value, puzzles: &[Puzzle], revealed: &BTreeSet<String>) -> Vec<String> {
    let text = body.to_string();
    let mut out = Vec::new();
    for p in puzzles {
        for g in &p.groups {
            if !revealed.contains(&g.category) && text.contains(&serde_json::to_string(&g.category).unwrap()) {
                out.push(g.category.clone());
            }
        }
        if let Some(fg) = &p.false_group {
            if text.contains(&fg.category) {
                out.push(fg.category.clone());
            }
        }
        if text.contains(&format!("\"{}\"", p.id)) {
            out.push(p.id.clone());
        }
    }
    for key in ["\"source\"", "\"subtype\"", "\"ai_puzzle_id\"", "\"nyt_puzzle_id\"", "\"slot_order\""] {
        if text.contains(key) {
            out.push(key.to_owned());
        }
    }
    out
}

pub fn survey(pair_id: &str) -> Value {
    serde_json::json!({
        "session_pair_id": pair_id,
        "username": "tester",
        "english_proficiency": "native",
        "play_frequency": "weekly",
        "seen_before": false,
        "q_creative": "puzzle_1",
        "q_harder": "puzzle_2",
        "q_liked": "tie_neither",
        "free_text": {"comments": "fun"}
    })
}
