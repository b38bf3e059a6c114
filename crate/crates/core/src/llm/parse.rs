//! Parsing of labeled sections in completions.
//!
//! Prompts ask for answers laid out as upper-case labels at line start:
//!
//! ```text
//! STORY: ...
//! CATEGORY: WORDS THAT CAN FOLLOW "FIRE"
//! WORDS: alarm, place, work, fly, cracker, arm, side, drill
//! ```

use std::sync::OnceLock;

use regex::Regex;

use super::LlmError;

fn label_line() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?m)^[ \t]*(?:\*\*)?([A-Z][A-Z0-9 _-]*?)(?:\*\*)?[ \t]*:(?:\*\*)?").unwrap())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledBlock {
    pub content: String,
    pub warnings: Vec<String>,
}

/// Returns the trimmed text between `LABEL:` and the next label line (or
/// end of text). Labels match case-sensitively on upper-case text at the
/// start of a line; when a label repeats, the first occurrence wins and a
/// warning is recorded.
pub fn extract_labeled_block(response_text: &str, label: &str) -> Result<LabeledBlock, LlmError> {
    let wanted = label.trim().to_uppercase();
    let marks: Vec<(String, usize, usize)> = label_line()
        .captures_iter(response_text)
        .map(|c| {
            let whole = c.get(0).unwrap();
            (c[1].trim().to_owned(), whole.start(), whole.end())
        })
        .collect();
    let hits: Vec<usize> = marks
        .iter()
        .enumerate()
        .filter(|(_, (l, _, _))| *l == wanted)
        .map(|(i, _)| i)
        .collect();
    let Some(&first) = hits.first() else {
        return Err(LlmError::LabelMissing(wanted));
    };
    let start = marks[first].2;
    let end = marks.get(first + 1).map_or(response_text.len(), |m| m.1);
    let mut warnings = Vec::new();
    if hits.len() > 1 {
        warnings.push(format!(
            "label {wanted} appears {} times; using the first",
            hits.len()
        ));
    }
    Ok(LabeledBlock {
        content: response_text[start..end].trim().to_owned(),
        warnings,
    })
}

/// Convenience wrapper returning only the content.
pub fn labeled(response_text: &str, label: &str) -> Result<String, LlmError> {
    extract_labeled_block(response_text, label).map(|b| b.content)
}

/// Splits a comma- or newline-separated list, stripping list markers and
/// surrounding quotes.
pub fn split_list(block: &str) -> Vec<String> {
    block
        .split([',', '\n', ';'])
        .map(|s| {
            s.trim()
                .trim_start_matches(['-', '*', '•'])
                .trim()
                .trim_matches(['"', '\'', '`'])
                .trim()
                .to_owned()
        })
        .filter(|s| !s.is_empty())
        .collect()
}
