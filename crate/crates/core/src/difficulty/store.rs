//! Word embedding storage and sources.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::DifficultyError;
use crate::puzzle::Word;

/// Unit-normalized word vectors of one fixed dimension.
///
/// Vectors are L2-normalized on insert, so a dot product is the cosine
/// similarity. Zero and non-finite vectors are rejected.
#[derive(Clone, Debug)]
pub struct EmbeddingStore {
    dimension: usize,
    vectors: HashMap<String, Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct FixtureDoc {
    dimension: usize,
    vectors: BTreeMap<String, Vec<f64>>,
}

impl EmbeddingStore {
    pub fn new(dimension: usize) -> Result<Self, DifficultyError> {
        if dimension == 0 {
            return Err(DifficultyError::InvalidVector {
                word: String::new(),
                reason: "dimension must be positive".into(),
            });
        }
        Ok(EmbeddingStore {
            dimension,
            vectors: HashMap::new(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn insert(&mut self, word: &Word, vector: Vec<f64>) -> Result<(), DifficultyError> {
        let invalid = |reason: String| DifficultyError::InvalidVector {
            word: word.as_str().to_owned(),
            reason,
        };
        if vector.len() != self.dimension {
            return Err(invalid(format!(
                "expected dimension {}, got {}",
                self.dimension,
                vector.len()
            )));
        }
        if vector.iter().any(|x| !x.is_finite()) {
            return Err(invalid("vector has non-finite entries".into()));
        }
        let norm = vector.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(invalid("zero vector".into()));
        }
        self.vectors
            .insert(word.as_str().to_owned(), vector.into_iter().map(|x| x / norm).collect());
        Ok(())
    }

    pub fn contains(&self, word: &Word) -> bool {
        self.vectors.contains_key(word.as_str())
    }

    /// The unit vector for `word`.
    pub fn get(&self, word: &Word) -> Result<&[f64], DifficultyError> {
        self.vectors
            .get(word.as_str())
            .map(Vec::as_slice)
            .ok_or_else(|| DifficultyError::MissingEmbedding(word.as_str().to_owned()))
    }

    pub fn cosine(&self, a: &Word, b: &Word) -> Result<f64, DifficultyError> {
        let (va, vb) = (self.get(a)?, self.get(b)?);
        let dot: f64 = va.iter().zip(vb).map(|(x, y)| x * y).sum();
        Ok(dot.clamp(-1.0, 1.0))
    }

    /// Copy restricted to `words`; errors on the first absent word.
    pub fn subset<'a>(
        &self,
        words: impl IntoIterator<Item = &'a Word>,
    ) -> Result<EmbeddingStore, DifficultyError> {
        let mut out = EmbeddingStore::new(self.dimension)?;
        for w in words {
            let v = self.get(w)?.to_vec();
            out.vectors.insert(w.as_str().to_owned(), v);
        }
        Ok(out)
    }

    /// Parses the fixture format `{"dimension": n, "vectors": {word: [..]}}`.
    pub fn from_fixture_json(text: &str) -> Result<Self, DifficultyError> {
        let doc: FixtureDoc =
            serde_json::from_str(text).map_err(|e| DifficultyError::Fixture(e.to_string()))?;
        let mut store = EmbeddingStore::new(doc.dimension)?;
        for (raw, v) in doc.vectors {
            let word = Word::parse(&raw).map_err(|e| DifficultyError::Fixture(e.to_string()))?;
            store.insert(&word, v)?;
        }
        Ok(store)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, DifficultyError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| DifficultyError::Fixture(format!("{}: {e}", path.display())))?;
        Self::from_fixture_json(&text)
    }

    /// Fixture JSON with words in sorted order (vectors as stored, i.e. unit length).
    pub fn to_fixture_json(&self) -> String {
        let doc = FixtureDoc {
            dimension: self.dimension,
            vectors: self
                .vectors
                .iter()
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        };
        serde_json::to_string(&doc).expect("fixture serialization is infallible")
    }
}

/// Something that can produce embeddings for a list of words.
pub trait EmbeddingProvider: Send + Sync {
    fn embed(&self, words: &[Word]) -> Result<EmbeddingStore, DifficultyError>;
}

/// Serves embeddings from a preloaded store (e.g. a fixture file).
pub struct FixtureEmbeddings {
    store: EmbeddingStore,
}

impl FixtureEmbeddings {
    pub fn new(store: EmbeddingStore) -> Self {
        FixtureEmbeddings { store }
    }

    pub fn store(&self) -> &EmbeddingStore {
        &self.store
    }
}

impl EmbeddingProvider for FixtureEmbeddings {
    fn embed(&self, words: &[Word]) -> Result<EmbeddingStore, DifficultyError> {
        self.store.subset(words)
    }
}

/// Client for an OpenAI-compatible `/embeddings` endpoint.
///
/// Request: `{"model": m, "input": [words]}`; response: `{"data": [{"embedding": [..], "index": i}]}`.
pub struct RemoteEmbeddings {
    endpoint: String,
    api_key: Option<String>,
    model: String,
    agent: ureq::Agent,
}

#[derive(Deserialize)]
struct EmbeddingResponse {
    data: Vec<EmbeddingDatum>,
}

#[derive(Deserialize)]
struct EmbeddingDatum {
    embedding: Vec<f64>,
    #[serde(default)]
    index: Option<usize>,
}

impl RemoteEmbeddings {
    pub fn new(endpoint: impl Into<String>, api_key: Option<String>, model: impl Into<String>) -> Self {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(60)))
            .build()
            .into();
        RemoteEmbeddings {
            endpoint: endpoint.into(),
            api_key,
            model: model.into(),
            agent,
        }
    }

    /// Reads `EMBEDDING_ENDPOINT`, `EMBEDDING_API_KEY` (falls back to
    /// `LLM_API_KEY`) and `EMBEDDING_MODEL`.
    pub fn from_env() -> Option<Self> {
        let endpoint = std::env::var("EMBEDDING_ENDPOINT").ok()?;
        let key = std::env::var("EMBEDDING_API_KEY")
            .or_else(|_| std::env::var("LLM_API_KEY"))
            .ok();
        let model = std::env::var("EMBEDDING_MODEL")
            .unwrap_or_else(|_| "sentence-transformers/all-mpnet-base-v2".into());
        Some(Self::new(endpoint, key, model))
    }
}

impl EmbeddingProvider for RemoteEmbeddings {
    fn embed(&self, words: &[Word]) -> Result<EmbeddingStore, DifficultyError> {
        let input: Vec<&str> = words.iter().map(Word::as_str).collect();
        let body = serde_json::json!({ "model": self.model, "input": input });
        let mut req = self.agent.post(&self.endpoint);
        if let Some(key) = &self.api_key {
            req = req.header("Authorization", &format!("Bearer {key}"));
        }
        let mut resp = req
            .send_json(&body)
            .map_err(|e| DifficultyError::Provider(e.to_string()))?;
        let parsed: EmbeddingResponse = resp
            .body_mut()
            .read_json()
            .map_err(|e| DifficultyError::Provider(e.to_string()))?;
        if parsed.data.len() != words.len() {
            return Err(DifficultyError::Provider(format!(
                "asked for {} embeddings, got {}",
                words.len(),
                parsed.data.len()
            )));
        }
        let dim = parsed.data[0].embedding.len();
        let mut store = EmbeddingStore::new(dim)?;
        for (pos, d) in parsed.data.into_iter().enumerate() {
            let i = d.index.unwrap_or(pos);
            let word = words
                .get(i)
                .ok_or_else(|| DifficultyError::Provider(format!("embedding index {i} out of range")))?;
            store.insert(word, d.embedding)?;
        }
        Ok(store)
    }
}
