use std::collections::BTreeMap;
use std::sync::Arc;

use chrono::{DateTime, Utc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GenerationConfig, PipelineError, PromptSet, ProposedGroup, Stage, StyleRegistry};
use crate::difficulty::{
    enumerate_variants, group_similarity, select_color_quartets_anchored, EmbeddingProvider, EmbeddingStore,
    ScoredPool, VariantTemplate, WordPool, POOL_SIZE,
};
use crate::llm::{extract_labeled_block, split_list, ChatMessage, Gateway, LlmError, PipelineTranscript};
use crate::puzzle::{
    check_structure, deserialize_puzzle_set, validate_groups, validate_puzzle, Color, Puzzle, Source, Subtype,
    Word, WordGroup,
};

const FEW_SHOT: &str = include_str!("../../data/few_shot.json");

/// The bundled example puzzles shown to the one-step prompt.
pub fn builtin_few_shot() -> Vec<Puzzle> {
    deserialize_puzzle_set(FEW_SHOT).expect("bundled few-shot puzzles parse")
}

/// Transcript and warnings accumulated over one run.
#[derive(Debug)]
pub struct RunLog {
    pub transcript: PipelineTranscript,
    pub warnings: Vec<String>,
}

impl RunLog {
    pub fn new(id: impl Into<String>, created_at: DateTime<Utc>) -> Self {
        RunLog {
            transcript: PipelineTranscript::new(id, created_at),
            warnings: Vec::new(),
        }
    }
}

/// Everything produced by [`Generator::run`].
#[derive(Debug)]
pub struct GenerationRun {
    pub puzzle: Puzzle,
    pub proposed: Vec<ProposedGroup>,
    pub false_group: Option<WordGroup>,
    pub candidate_count: usize,
    pub chosen_variant: Option<String>,
    pub template_versions: BTreeMap<Stage, u32>,
    pub transcript: PipelineTranscript,
    pub warnings: Vec<String>,
}

enum Reject {
    /// The reply did not follow the layout; worth asking again.
    Format(String),
    /// The reply was well formed but unusable.
    Fatal(PipelineError),
}

impl From<PipelineError> for Reject {
    fn from(e: PipelineError) -> Self {
        Reject::Fatal(e)
    }
}

fn block(text: &str, label: &str, warnings: &mut Vec<String>) -> Result<String, Reject> {
    match extract_labeled_block(text, label) {
        Ok(b) => {
            warnings.extend(b.warnings);
            if b.content.is_empty() {
                Err(Reject::Format(format!("{label} is empty")))
            } else {
                Ok(b.content)
            }
        }
        Err(_) => Err(Reject::Format(format!("missing {label}:"))),
    }
}

fn words_of(list: &str) -> Result<Vec<Word>, Reject> {
    split_list(list)
        .iter()
        .map(|w| Word::parse(w).map_err(|_| Reject::Format(format!("unusable word {w:?}"))))
        .collect()
}

fn pool_of(category: &str, list: &str) -> Result<WordPool, Reject> {
    let words = words_of(list)?;
    WordPool::new(category, words)
        .map_err(|_| Reject::Format(format!("WORDS must list exactly {POOL_SIZE} different words")))
}

fn color_of(text: &str) -> Option<Color> {
    let token: String = text
        .trim()
        .trim_start_matches(|c: char| !c.is_alphabetic())
        .chars()
        .take_while(|c| c.is_alphabetic())
        .collect();
    Color::parse(&token)
}

fn is_permutation(colors: &[Color; 4]) -> bool {
    Color::ALL.iter().all(|c| colors.contains(c))
}

fn list_display(words: &[Word]) -> String {
    words.iter().map(|w| w.display()).collect::<Vec<_>>().join(", ")
}

fn render_group(g: &WordGroup) -> String {
    format!("{}: {}", g.category, list_display(&g.words))
}

fn render_groups(groups: &[WordGroup]) -> String {
    groups
        .iter()
        .enumerate()
        .map(|(i, g)| format!("{}. {}", i + 1, render_group(g)))
        .collect::<Vec<_>>()
        .join("\n")
}

fn render_example(p: &Puzzle) -> String {
    p.groups
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let n = i + 1;
            let color = g.color.map_or("", |c| c.as_str());
            format!("CATEGORY {n}: {}\nWORDS {n}: {}\nCOLOR {n}: {color}", g.category, list_display(&g.words))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Runs the staged generation prompts.
pub struct Generator {
    gateway: Gateway,
    embeddings: Arc<dyn EmbeddingProvider>,
    prompts: PromptSet,
    styles: StyleRegistry,
    few_shot: Vec<Puzzle>,
}

impl Generator {
    pub fn new(gateway: Gateway, embeddings: Arc<dyn EmbeddingProvider>) -> Self {
        Generator {
            gateway,
            embeddings,
            prompts: PromptSet::builtin(),
            styles: StyleRegistry::builtin(),
            few_shot: builtin_few_shot(),
        }
    }

    pub fn with_prompts(mut self, prompts: PromptSet) -> Self {
        self.prompts = prompts;
        self
    }

    pub fn with_styles(mut self, styles: StyleRegistry) -> Self {
        self.styles = styles;
        self
    }

    pub fn with_few_shot(mut self, puzzles: Vec<Puzzle>) -> Self {
        self.few_shot = puzzles;
        self
    }

    pub fn gateway(&self) -> &Gateway {
        &self.gateway
    }

    pub fn styles(&self) -> &StyleRegistry {
        &self.styles
    }

    pub fn few_shot(&self) -> &[Puzzle] {
        &self.few_shot
    }

    /// Starts an empty log stamped with the gateway clock.
    pub fn new_log(&self, id: impl Into<String>) -> RunLog {
        RunLog::new(id, self.gateway.now())
    }

    /// Asks, parses, and re-asks on layout errors up to the stage budget.
    fn ask<T>(
        &self,
        stage: Stage,
        values: BTreeMap<&str, String>,
        cfg: &GenerationConfig,
        log: &mut RunLog,
        parse: impl Fn(&str, &mut Vec<String>) -> Result<T, Reject>,
    ) -> Result<(T, Vec<ChatMessage>, String), PipelineError> {
        let messages = self.prompts.get(stage).render(&values)?;
        self.ask_messages(stage, messages, cfg, log, parse)
    }

    fn ask_messages<T>(
        &self,
        stage: Stage,
        mut messages: Vec<ChatMessage>,
        cfg: &GenerationConfig,
        log: &mut RunLog,
        parse: impl Fn(&str, &mut Vec<String>) -> Result<T, Reject>,
    ) -> Result<(T, Vec<ChatMessage>, String), PipelineError> {
        let attempts = cfg.max_stage_retries + 1;
        let mut reason = String::new();
        for attempt in 1..=attempts {
            let request = self.gateway.request(messages.clone(), Some(cfg.rng_seed));
            let text = match self.gateway.complete(request, &mut log.transcript) {
                Ok(ex) => ex.response_text,
                Err(LlmError::MalformedResponse(m)) => {
                    reason = m;
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            match parse(&text, &mut log.warnings) {
                Ok(v) => return Ok((v, messages, text)),
                Err(Reject::Fatal(e)) => return Err(e),
                Err(Reject::Format(why)) => {
                    log::debug!("{stage:?} attempt {attempt}: {why}");
                    messages.push(ChatMessage::assistant(text));
                    messages.push(ChatMessage::user(format!(
                        "Your answer could not be used: {why}. Follow the requested format exactly."
                    )));
                    reason = why;
                }
            }
        }
        Err(PipelineError::ParseFailure { stage, attempts, reason })
    }

    fn parse_style(&self, text: &str, warnings: &mut Vec<String>) -> Result<String, Reject> {
        let declared = block(text, "STYLE", warnings)?;
        match self.styles.find(&declared) {
            Some(s) => Ok(s.name.clone()),
            None => Err(Reject::Fatal(PipelineError::StyleViolation(declared))),
        }
    }

    /// Story-seeded proposal of the first category and its pool.
    pub fn propose_root_group(&self, cfg: &GenerationConfig, log: &mut RunLog) -> Result<ProposedGroup, PipelineError> {
        let values = BTreeMap::from([
            ("styles", self.styles.render()),
            ("seed_words", list_display(&cfg.seed_words)),
        ]);
        let (group, _, _) = self.ask(Stage::Root, values, cfg, log, |text, warns| {
            let story = block(text, "STORY", warns)?;
            let style = self.parse_style(text, warns)?;
            let category = block(text, "CATEGORY", warns)?;
            let pool = pool_of(&category, &block(text, "WORDS", warns)?)?;
            Ok(ProposedGroup {
                category,
                pool,
                style,
                source_word: None,
                story: Some(story),
            })
        })?;
        Ok(group)
    }

    /// Proposes a group built on another meaning of a word already used.
    pub fn expand_overlap(
        &self,
        previous: &[WordGroup],
        cfg: &GenerationConfig,
        log: &mut RunLog,
    ) -> Result<ProposedGroup, PipelineError> {
        if previous.is_empty() {
            return Err(PipelineError::Config("overlap expansion needs a previous group".into()));
        }
        let values = BTreeMap::from([
            ("styles", self.styles.render()),
            ("previous_groups", render_groups(previous)),
        ]);
        let (group, _, _) = self.ask(Stage::Overlap, values, cfg, log, |text, warns| {
            let source = Word::parse(&block(text, "SOURCE", warns)?)
                .map_err(|_| Reject::Format("SOURCE is not a word".into()))?;
            if !previous.iter().any(|g| g.contains(&source)) {
                return Err(Reject::Fatal(PipelineError::OverlapViolation(format!(
                    "source word {source} is not in any previous group"
                ))));
            }
            let style = self.parse_style(text, warns)?;
            let category = block(text, "CATEGORY", warns)?;
            let pool = pool_of(&category, &block(text, "WORDS", warns)?)?;
            let reused: Vec<&str> = pool
                .words()
                .iter()
                .filter(|w| previous.iter().any(|g| g.contains(w)))
                .map(|w| w.as_str())
                .collect();
            if !reused.is_empty() {
                return Err(Reject::Fatal(PipelineError::OverlapViolation(format!(
                    "pool for {category} reuses {}",
                    reused.join(", ")
                ))));
            }
            Ok(ProposedGroup {
                category,
                pool,
                style,
                source_word: Some(source),
                story: None,
            })
        })?;
        Ok(group)
    }

    /// One followup per root word, each built on another meaning of it.
    pub fn expand_false_group(
        &self,
        root: &WordGroup,
        cfg: &GenerationConfig,
        log: &mut RunLog,
    ) -> Result<Vec<ProposedGroup>, PipelineError> {
        let mut out = Vec::with_capacity(4);
        for anchor in &root.words {
            let values = BTreeMap::from([
                ("styles", self.styles.render()),
                ("root_group", render_group(root)),
                ("anchor", anchor.display().to_owned()),
            ]);
            let (group, _, _) = self.ask(Stage::FalseFollowup, values, cfg, log, |text, warns| {
                let style = self.parse_style(text, warns)?;
                let category = block(text, "CATEGORY", warns)?;
                let pool = pool_of(&category, &block(text, "WORDS", warns)?)?;
                if !pool.contains(anchor) {
                    return Err(Reject::Fatal(PipelineError::MissingAnchor {
                        anchor: anchor.as_str().to_owned(),
                        category,
                    }));
                }
                let others: Vec<&str> = root
                    .words
                    .iter()
                    .filter(|w| *w != anchor && pool.contains(w))
                    .map(|w| w.as_str())
                    .collect();
                if !others.is_empty() {
                    return Err(Reject::Fatal(PipelineError::OverlapViolation(format!(
                        "pool for {category} also holds decoy words {}",
                        others.join(", ")
                    ))));
                }
                Ok(ProposedGroup {
                    category,
                    pool,
                    style,
                    source_word: Some(anchor.clone()),
                    story: None,
                })
            })?;
            out.push(group);
        }
        Ok(out)
    }

    /// Embeddings for every word in the given pools.
    pub fn embed_pools<'a>(&self, pools: impl IntoIterator<Item = &'a WordPool>) -> Result<EmbeddingStore, PipelineError> {
        let mut words: Vec<Word> = pools.into_iter().flat_map(|p| p.words().iter().cloned()).collect();
        words.sort();
        words.dedup();
        Ok(self.embeddings.embed(&words)?)
    }

    /// Selects quartets for each pool and returns every valid variant, in
    /// variant order.
    pub fn assemble_puzzle(
        &self,
        groups: &[ProposedGroup; 4],
        cfg: &GenerationConfig,
        false_group: Option<&WordGroup>,
        store: &EmbeddingStore,
        id_prefix: &str,
    ) -> Result<Vec<Puzzle>, PipelineError> {
        let anchors = anchors_for(cfg.subtype, groups);
        let mut scored = Vec::with_capacity(4);
        for (g, a) in groups.iter().zip(&anchors) {
            scored.push(ScoredPool {
                category: g.category.clone(),
                quartets: select_color_quartets_anchored(&g.pool, store, a)?,
            });
        }
        let scored: [ScoredPool; 4] = scored.try_into().expect("four pools");
        let story = matches!(cfg.subtype, Subtype::Overlap | Subtype::FalseGroupLlm);
        let template = VariantTemplate {
            id_prefix: id_prefix.to_owned(),
            source: Source::Ai,
            subtype: cfg.subtype,
            false_group: false_group.cloned(),
            seed_words: story.then(|| cfg.seed_words.clone()),
            provenance: Some(id_prefix.to_owned()),
        };
        let variants = enumerate_variants(&scored, &template);
        if variants.is_empty() {
            return Err(PipelineError::NoValidVariant);
        }
        Ok(variants)
    }

    /// Asks the editor to check each category name. Only names change.
    pub fn edit_puzzle(&self, p: &Puzzle, cfg: &GenerationConfig, log: &mut RunLog) -> Result<Puzzle, PipelineError> {
        let values = BTreeMap::from([("puzzle", render_groups(&p.groups))]);
        let parsed = self.ask(Stage::Editor, values, cfg, log, |text, warns| {
            let mut names = Vec::with_capacity(4);
            for n in 1..=4 {
                let name = block(text, &format!("CATEGORY {n}"), warns)?;
                names.push(name.lines().next().unwrap_or_default().trim().to_owned());
                if let Ok(b) = extract_labeled_block(text, &format!("WORDS {n}")) {
                    let words = words_of(&b.content).unwrap_or_default();
                    let g = &p.groups[n - 1];
                    if words.len() != 4 || g.overlap(words.iter()) != 4 {
                        warns.push(format!("editor tried to change the words of group {n}; ignored"));
                    }
                }
            }
            Ok(names)
        });
        let names = match parsed {
            Ok((names, _, _)) => names,
            Err(PipelineError::ParseFailure { reason, .. }) => {
                log.warnings.push(format!("editor reply unusable ({reason}); puzzle left unedited"));
                return Ok(p.clone());
            }
            Err(e) => return Err(e),
        };
        let mut out = p.clone();
        for (i, name) in names.into_iter().enumerate() {
            if name.is_empty() || name == out.groups[i].category {
                continue;
            }
            let before = std::mem::replace(&mut out.groups[i].category, name.clone());
            if !validate_puzzle(&out).is_valid() {
                log.warnings.push(format!("editor rename {before:?} -> {name:?} breaks the puzzle; kept {before:?}"));
                out.groups[i].category = before;
            } else {
                log::info!("editor renamed {before:?} to {name:?}");
            }
        }
        Ok(out)
    }

    /// Asks for a difficulty color per group. A reply that repeats a color
    /// gets one re-ask; after that colors fall back to similarity order.
    pub fn rank_difficulty(
        &self,
        p: &Puzzle,
        cfg: &GenerationConfig,
        store: Option<&EmbeddingStore>,
        log: &mut RunLog,
    ) -> Result<Puzzle, PipelineError> {
        let parse = |text: &str, warns: &mut Vec<String>| -> Result<[Color; 4], Reject> {
            let mut colors = [Color::Yellow; 4];
            for (n, slot) in colors.iter_mut().enumerate() {
                let label = format!("GROUP {}", n + 1);
                let raw = block(text, &label, warns)?;
                *slot = color_of(&raw).ok_or_else(|| Reject::Format(format!("{label} is not a color")))?;
            }
            Ok(colors)
        };
        let values = BTreeMap::from([("puzzle", render_groups(&p.groups))]);
        let mut colors = match self.ask(Stage::Ranker, values, cfg, log, parse) {
            Ok((c, _, _)) if is_permutation(&c) => Some(c),
            Ok((_, mut messages, text)) => {
                messages.push(ChatMessage::assistant(text));
                messages.push(ChatMessage::user("Each color must be used exactly once. Try again."));
                match self.ask_messages(Stage::Ranker, messages, &GenerationConfig { max_stage_retries: 0, ..cfg.clone() }, log, parse) {
                    Ok((c, _, _)) if is_permutation(&c) => Some(c),
                    Ok(_) => {
                        log.warnings.push("ranker repeated a color twice".into());
                        None
                    }
                    Err(PipelineError::ParseFailure { reason, .. }) => {
                        log.warnings.push(format!("ranker reply unusable ({reason})"));
                        None
                    }
                    Err(e) => return Err(e),
                }
            }
            Err(PipelineError::ParseFailure { reason, .. }) => {
                log.warnings.push(format!("ranker reply unusable ({reason})"));
                None
            }
            Err(e) => return Err(e),
        };
        if colors.is_none() {
            colors = Some(fallback_colors(p, store));
            log.warnings.push("difficulty colors fall back to embedding similarity".into());
        }
        let colors = colors.expect("set above");
        let mut out = p.clone();
        for (g, c) in out.groups.iter_mut().zip(colors) {
            g.color = Some(c);
        }
        Ok(out)
    }

    /// Baseline: a whole puzzle from one prompt.
    pub fn generate_one_step(
        &self,
        cfg: &GenerationConfig,
        id: &str,
        log: &mut RunLog,
    ) -> Result<Puzzle, PipelineError> {
        if cfg.subtype != Subtype::OneStep {
            return Err(PipelineError::Config("generate_one_step needs subtype one_step".into()));
        }
        let few_shot = self
            .few_shot
            .iter()
            .enumerate()
            .map(|(i, p)| format!("Example {}:\n{}", i + 1, render_example(p)))
            .collect::<Vec<_>>()
            .join("\n\n");
        let values = BTreeMap::from([("few_shot", few_shot)]);
        let (drafts, _, _) = self.ask(Stage::OneStep, values, cfg, log, |text, warns| {
            let mut drafts = Vec::with_capacity(4);
            for n in 1..=4 {
                let category = block(text, &format!("CATEGORY {n}"), warns)?;
                let words = words_of(&block(text, &format!("WORDS {n}"), warns)?)?;
                let raw = block(text, &format!("COLOR {n}"), warns)?;
                let color = color_of(&raw).ok_or_else(|| Reject::Format(format!("COLOR {n} is not a color")))?;
                drafts.push((category, words, color));
            }
            let colors: Vec<Color> = drafts.iter().map(|d| d.2).collect();
            if !is_permutation(&[colors[0], colors[1], colors[2], colors[3]]) {
                return Err(Reject::Format("each color must be used exactly once".into()));
            }
            Ok(drafts)
        })?;

        let report = validate_groups(
            &drafts
                .iter()
                .map(|(c, w, _)| (c.clone(), w.clone()))
                .collect::<Vec<_>>(),
        );
        if !report.is_valid() {
            return Err(PipelineError::ValidationFailure(report));
        }
        let groups: Vec<WordGroup> = drafts
            .into_iter()
            .map(|(c, w, color)| {
                let words: [Word; 4] = w.try_into().expect("validated arity");
                WordGroup::new(c, words, Some(color))
            })
            .collect();
        let puzzle = Puzzle {
            id: id.to_owned(),
            source: Source::Ai,
            subtype: Subtype::OneStep,
            groups: groups.try_into().expect("validated group count"),
            false_group: None,
            seed_words: None,
            provenance: Some(log.transcript.id.clone()),
        };
        let report = validate_puzzle(&puzzle);
        if !report.is_valid() {
            return Err(PipelineError::ValidationFailure(report));
        }
        check_structure(&puzzle).map_err(|e| PipelineError::Config(e.to_string()))?;
        for g in &puzzle.groups {
            let leaked = self
                .few_shot
                .iter()
                .flat_map(|p| p.groups.iter())
                .any(|ex| ex.same_words(g));
            if leaked {
                return Err(PipelineError::FewShotLeak(g.category.clone()));
            }
        }
        Ok(puzzle)
    }

    /// Runs every stage for `cfg`. The puzzle id and transcript id are both
    /// `run_id`.
    pub fn run(&self, cfg: &GenerationConfig, run_id: &str) -> Result<GenerationRun, PipelineError> {
        cfg.validate()?;
        let mut log = self.new_log(run_id);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
        rng.set_stream(1);

        if cfg.subtype == Subtype::OneStep {
            let puzzle = self.generate_one_step(cfg, run_id, &mut log)?;
            return Ok(GenerationRun {
                puzzle,
                proposed: Vec::new(),
                false_group: None,
                candidate_count: 1,
                chosen_variant: None,
                template_versions: self.prompts.versions(),
                transcript: log.transcript,
                warnings: log.warnings,
            });
        }

        let (proposed, false_group) = match cfg.subtype {
            Subtype::Overlap => (self.overlap_tree(cfg, &mut log)?, None),
            Subtype::FalseGroupLlm => {
                let root = self.propose_root_group(cfg, &mut log)?;
                let store = self.embed_pools([&root.pool])?;
                let fg = false_group_from_pool(&root, &store)?;
                let mut all = vec![root];
                all.extend(self.expand_false_group(&fg, cfg, &mut log)?);
                (all, Some(fg))
            }
            Subtype::FalseGroupSeeded => {
                let fg = cfg.seeded_false_group.clone().expect("validated");
                (self.expand_false_group(&fg, cfg, &mut log)?, Some(fg))
            }
            Subtype::OneStep | Subtype::Published => unreachable!("handled above"),
        };

        // the LLM root of a false-group tree is the decoy, not a solution group
        let solution: &[ProposedGroup] = &proposed[proposed.len() - 4..];
        let solution: [ProposedGroup; 4] = solution.to_vec().try_into().expect("four groups");
        let store = self.embed_pools(solution.iter().map(|g| &g.pool))?;
        let candidates = self.assemble_puzzle(&solution, cfg, false_group.as_ref(), &store, run_id)?;
        let pick = rng.random_range(0..candidates.len());
        let chosen = candidates[pick].clone();
        let chosen_variant = chosen.id.clone();
        let mut puzzle = chosen;
        puzzle.id = run_id.to_owned();

        let puzzle = self.edit_puzzle(&puzzle, cfg, &mut log)?;
        let puzzle = self.rank_difficulty(&puzzle, cfg, Some(&store), &mut log)?;
        Ok(GenerationRun {
            puzzle,
            proposed,
            false_group,
            candidate_count: candidates.len(),
            chosen_variant: Some(chosen_variant),
            template_versions: self.prompts.versions(),
            transcript: log.transcript,
            warnings: log.warnings,
        })
    }

    /// Root group plus three overlap expansions. Each expansion sees the
    /// groups so far as their most cohesive quartets, keeping every word
    /// that a later group was built on.
    fn overlap_tree(&self, cfg: &GenerationConfig, log: &mut RunLog) -> Result<Vec<ProposedGroup>, PipelineError> {
        let mut groups = vec![self.propose_root_group(cfg, log)?];
        while groups.len() < 4 {
            let store = self.embed_pools(groups.iter().map(|g| &g.pool))?;
            let anchors = anchors_for(Subtype::Overlap, &groups);
            let mut shown = Vec::with_capacity(groups.len());
            for (g, a) in groups.iter().zip(&anchors) {
                let q = select_color_quartets_anchored(&g.pool, &store, a)?;
                shown.push(WordGroup::new(g.category.clone(), q.yellow.words.clone(), None));
            }
            groups.push(self.expand_overlap(&shown, cfg, log)?);
        }
        Ok(groups)
    }
}

/// Words each pool's quartets must keep.
///
/// False-group followups keep their own decoy word. In an overlap tree a
/// group keeps every word that a later group was built on.
pub fn anchors_for(subtype: Subtype, groups: &[ProposedGroup]) -> Vec<Vec<Word>> {
    let mut anchors = vec![Vec::new(); groups.len()];
    match subtype {
        Subtype::FalseGroupLlm | Subtype::FalseGroupSeeded => {
            for (i, g) in groups.iter().enumerate() {
                anchors[i].extend(g.source_word.clone());
            }
        }
        Subtype::Overlap => {
            for (j, g) in groups.iter().enumerate() {
                let Some(src) = &g.source_word else { continue };
                if let Some(i) = groups[..j].iter().position(|h| h.pool.contains(src)) {
                    if !anchors[i].contains(src) {
                        anchors[i].push(src.clone());
                    }
                }
            }
        }
        Subtype::OneStep | Subtype::Published => {}
    }
    anchors
}

/// The decoy group of an LLM false-group tree: the root pool's most
/// cohesive quartet.
pub fn false_group_from_pool(root: &ProposedGroup, store: &EmbeddingStore) -> Result<WordGroup, PipelineError> {
    let q = select_color_quartets_anchored(&root.pool, store, &[])?;
    Ok(WordGroup::new(root.category.clone(), q.yellow.words.clone(), None))
}

/// Colors by descending group similarity, or the existing colors when
/// similarity is unavailable.
fn fallback_colors(p: &Puzzle, store: Option<&EmbeddingStore>) -> [Color; 4] {
    let sims: Option<Vec<f64>> = store.and_then(|s| p.groups.iter().map(|g| group_similarity(&g.words, s).ok()).collect());
    match sims {
        Some(sims) => {
            let mut order: Vec<usize> = (0..4).collect();
            order.sort_by(|&a, &b| sims[b].total_cmp(&sims[a]).then(a.cmp(&b)));
            let mut colors = [Color::Yellow; 4];
            for (rank, &i) in order.iter().enumerate() {
                colors[i] = Color::ALL[rank];
            }
            colors
        }
        None => match p.colors() {
            Some(c) if is_permutation(&c) => c,
            _ => Color::ALL,
        },
    }
}

#[cfg(test)]
mod tests;
