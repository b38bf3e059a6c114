use serde::{Deserialize, Serialize};

use super::PipelineError;

/// A family of category names that proposal prompts may draw from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryStyle {
    pub name: String,
    pub description: String,
    pub examples: [String; 3],
    /// Styles observed in published puzzles; the rest are editorial additions.
    #[serde(default)]
    pub canonical: bool,
}

#[derive(Clone, Debug)]
pub struct StyleRegistry {
    styles: Vec<CategoryStyle>,
}

const BUILTIN: &str = include_str!("../../data/styles.json");

impl StyleRegistry {
    pub fn builtin() -> Self {
        Self::from_json(BUILTIN).expect("bundled styles parse")
    }

    pub fn from_json(text: &str) -> Result<Self, PipelineError> {
        let styles: Vec<CategoryStyle> =
            serde_json::from_str(text).map_err(|e| PipelineError::Config(format!("styles: {e}")))?;
        if styles.is_empty() {
            return Err(PipelineError::Config("style registry is empty".into()));
        }
        Ok(StyleRegistry { styles })
    }

    pub fn styles(&self) -> &[CategoryStyle] {
        &self.styles
    }

    /// Finds a style by name, ignoring case, punctuation and spacing.
    pub fn find(&self, name: &str) -> Option<&CategoryStyle> {
        let key = squash(name);
        self.styles.iter().find(|s| squash(&s.name) == key)
    }

    /// Renders the registry as a bulleted list for prompts.
    pub fn render(&self) -> String {
        self.styles
            .iter()
            .map(|s| {
                format!(
                    "- {}: {} Examples: {}",
                    s.name,
                    s.description,
                    s.examples.join("; ")
                )
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

fn squash(s: &str) -> String {
    s.chars()
        .filter(|c| c.is_alphanumeric())
        .flat_map(char::to_lowercase)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_has_six_styles_three_canonical() {
        let r = StyleRegistry::builtin();
        assert_eq!(r.styles().len(), 6);
        assert_eq!(r.styles().iter().filter(|s| s.canonical).count(), 3);
        for name in ["Synonyms or Slang", "Wordplay", "Fill in the blank"] {
            assert!(r.find(name).unwrap().canonical, "{name}");
        }
    }

    #[test]
    fn lookup_is_loose() {
        let r = StyleRegistry::builtin();
        assert_eq!(r.find("fill-in-the-blank").unwrap().name, "Fill in the blank");
        assert!(r.find("Rhymes").is_none());
    }

    #[test]
    fn example_count_enforced() {
        let bad = r#"[{"name":"x","description":"d","examples":["a","b"]}]"#;
        assert!(StyleRegistry::from_json(bad).is_err());
    }
}
