//! Prompt templates.
//!
//! Each stage has one text file:
//!
//! ```text
//! version: 3
//! [system]
//! ...system prompt with {{placeholders}}...
//! [user]
//! ...user prompt...
//! ```

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::llm::ChatMessage;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Root,
    Overlap,
    FalseFollowup,
    OneStep,
    Editor,
    Ranker,
}

impl Stage {
    pub const ALL: [Stage; 6] = [
        Stage::Root,
        Stage::Overlap,
        Stage::FalseFollowup,
        Stage::OneStep,
        Stage::Editor,
        Stage::Ranker,
    ];

    pub fn file_name(self) -> &'static str {
        match self {
            Stage::Root => "root.txt",
            Stage::Overlap => "overlap.txt",
            Stage::FalseFollowup => "false_followup.txt",
            Stage::OneStep => "one_step.txt",
            Stage::Editor => "editor.txt",
            Stage::Ranker => "ranker.txt",
        }
    }

    fn builtin(self) -> &'static str {
        match self {
            Stage::Root => include_str!("../../templates/root.txt"),
            Stage::Overlap => include_str!("../../templates/overlap.txt"),
            Stage::FalseFollowup => include_str!("../../templates/false_followup.txt"),
            Stage::OneStep => include_str!("../../templates/one_step.txt"),
            Stage::Editor => include_str!("../../templates/editor.txt"),
            Stage::Ranker => include_str!("../../templates/ranker.txt"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PromptTemplate {
    pub version: u32,
    pub system: String,
    pub user: String,
}

fn placeholder() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\{\{\s*([a-z_]+)\s*\}\}").unwrap())
}

impl PromptTemplate {
    pub fn parse(text: &str) -> Result<Self, PipelineError> {
        let bad = |m: &str| PipelineError::Template(m.to_owned());
        let text = text.replace("\r\n", "\n");
        let (head, rest) = text.split_once('\n').ok_or_else(|| bad("empty template"))?;
        let version = head
            .strip_prefix("version:")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| bad("first line must be `version: N`"))?;
        let rest = rest.strip_prefix("[system]\n").ok_or_else(|| bad("missing [system] section"))?;
        let (system, user) = rest.split_once("\n[user]\n").ok_or_else(|| bad("missing [user] section"))?;
        Ok(PromptTemplate {
            version,
            system: system.trim().to_owned(),
            user: user.trim().to_owned(),
        })
    }

    /// Names of every placeholder in either section.
    pub fn placeholders(&self) -> Vec<String> {
        let mut names: Vec<String> = placeholder()
            .captures_iter(&self.system)
            .chain(placeholder().captures_iter(&self.user))
            .map(|c| c[1].to_owned())
            .collect();
        names.sort();
        names.dedup();
        names
    }

    /// Fills placeholders; every placeholder must have a value.
    pub fn render(&self, values: &BTreeMap<&str, String>) -> Result<Vec<ChatMessage>, PipelineError> {
        let fill = |body: &str| -> Result<String, PipelineError> {
            let mut missing = None;
            let out = placeholder().replace_all(body, |c: &regex::Captures| match values.get(&c[1]) {
                Some(v) => v.clone(),
                None => {
                    missing.get_or_insert_with(|| c[1].to_owned());
                    String::new()
                }
            });
            match missing {
                Some(name) => Err(PipelineError::Template(format!("no value for {{{{{name}}}}}"))),
                None => Ok(out.into_owned()),
            }
        };
        Ok(vec![
            ChatMessage::system(fill(&self.system)?),
            ChatMessage::user(fill(&self.user)?),
        ])
    }
}

/// One template per stage.
#[derive(Clone, Debug)]
pub struct PromptSet {
    templates: BTreeMap<Stage, PromptTemplate>,
}

impl PromptSet {
    pub fn builtin() -> Self {
        let templates = Stage::ALL
            .iter()
            .map(|&s| (s, PromptTemplate::parse(s.builtin()).expect("bundled template parses")))
            .collect();
        PromptSet { templates }
    }

    /// Built-in templates, overridden by any stage file found in `dir`.
    pub fn with_overrides(dir: impl AsRef<Path>) -> Result<Self, PipelineError> {
        let mut set = Self::builtin();
        for stage in Stage::ALL {
            let path = dir.as_ref().join(stage.file_name());
            if path.exists() {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| PipelineError::Template(format!("{}: {e}", path.display())))?;
                let t = PromptTemplate::parse(&text)
                    .map_err(|e| PipelineError::Template(format!("{}: {e}", path.display())))?;
                set.templates.insert(stage, t);
            }
        }
        Ok(set)
    }

    pub fn get(&self, stage: Stage) -> &PromptTemplate {
        &self.templates[&stage]
    }

    /// `stage -> version`, recorded alongside generated puzzles.
    pub fn versions(&self) -> BTreeMap<Stage, u32> {
        self.templates.iter().map(|(s, t)| (*s, t.version)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_templates_parse_with_expected_placeholders() {
        let set = PromptSet::builtin();
        assert_eq!(set.get(Stage::Root).placeholders(), vec!["seed_words", "styles"]);
        assert_eq!(set.get(Stage::Overlap).placeholders(), vec!["previous_groups", "styles"]);
        assert_eq!(
            set.get(Stage::FalseFollowup).placeholders(),
            vec!["anchor", "root_group", "styles"]
        );
        assert_eq!(set.get(Stage::OneStep).placeholders(), vec!["few_shot"]);
        assert_eq!(set.get(Stage::Editor).placeholders(), vec!["puzzle"]);
        assert_eq!(set.get(Stage::Ranker).placeholders(), vec!["puzzle"]);
        assert!(set.versions().values().all(|&v| v >= 1));
    }

    #[test]
    fn render_fills_and_reports_missing() {
        let t = PromptTemplate::parse("version: 2\n[system]\nhi {{name}}\n[user]\n{{ name }}!").unwrap();
        assert_eq!(t.version, 2);
        let mut v = BTreeMap::new();
        assert!(matches!(t.render(&v), Err(PipelineError::Template(_))));
        v.insert("name", "bo".to_owned());
        let m = t.render(&v).unwrap();
        assert_eq!(m[0].content, "hi bo");
        assert_eq!(m[1].content, "bo!");
    }

    #[test]
    fn malformed_templates_rejected() {
        assert!(PromptTemplate::parse("[system]\nx\n[user]\ny").is_err());
        assert!(PromptTemplate::parse("version: 1\n[system]\nx").is_err());
    }

    #[test]
    fn directory_overrides() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("ranker.txt"), "version: 7\n[system]\nrank\n[user]\n{{puzzle}}").unwrap();
        let set = PromptSet::with_overrides(dir.path()).unwrap();
        assert_eq!(set.get(Stage::Ranker).version, 7);
        assert_eq!(set.get(Stage::Root).version, 1);
    }
}
