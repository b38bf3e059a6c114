use std::fmt::Write as _;

use serde::Serialize;

use super::{
    chi_squared, false_group_guess_rate, index_puzzles, mistake_distribution, percent, preference_tally,
    solve_rates, solve_table, AnalysisError, Axis, ChiSquared, ContingencyTable, FalseGroupRate, MistakeHistogram,
    PreferenceTally, PuzzlePair, Slice, SolveRate, SurveyResponse,
};
use crate::game::{replay, PlaySession};
use crate::puzzle::Puzzle;

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub sessions_used: usize,
    pub solve_rates: Vec<SolveRate>,
    pub mistakes: Vec<MistakeHistogram>,
    pub false_group_rates: Vec<FalseGroupRate>,
    pub solve_table: ContingencyTable,
    pub chi_squared: Option<ChiSquared>,
    pub preferences: Option<PreferenceTally>,
    pub notes: Vec<String>,
}

/// Computes every statistic. Sessions that do not replay against their
/// puzzle are dropped with a note.
pub fn analyze(
    sessions: &[PlaySession],
    surveys: &[SurveyResponse],
    pairs: Option<&[PuzzlePair]>,
    puzzles: &[Puzzle],
) -> Result<AnalysisReport, AnalysisError> {
    let index = index_puzzles(puzzles);
    let mut notes = Vec::new();
    let mut kept = Vec::with_capacity(sessions.len());
    for s in sessions {
        let p = index
            .get(s.puzzle_id.as_str())
            .ok_or_else(|| AnalysisError::UnknownPuzzle(s.puzzle_id.clone()))?;
        match replay(s, p) {
            Ok(_) => kept.push(s.clone()),
            Err(e) => notes.push(format!("session {} dropped: {e}", s.session_id)),
        }
    }
    let table = solve_table(&kept, &index)?;
    let chi = match chi_squared(&table) {
        Ok(x) => Some(x),
        Err(e) => {
            notes.push(format!("chi-squared skipped: {e}"));
            None
        }
    };
    let preferences = match pairs {
        Some(pairs) => Some(preference_tally(surveys, pairs, &index)?),
        None => {
            if !surveys.is_empty() {
                notes.push("no pair log given; preference tallies skipped".into());
            }
            None
        }
    };
    Ok(AnalysisReport {
        sessions_used: kept.len(),
        solve_rates: solve_rates(&kept, &index)?,
        mistakes: mistake_distribution(&kept, &index)?,
        false_group_rates: false_group_guess_rate(&kept, &index)?,
        solve_table: table,
        chi_squared: chi,
        preferences,
        notes,
    })
}

/// Markdown with one TSV block per table.
pub fn render_markdown(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Study analysis\n\nSessions analyzed: {}\n", r.sessions_used);

    out.push_str("## Solve rates\n\n```tsv\ntype\tsolved\tsessions\tsolve_rate\n");
    for s in &r.solve_rates {
        let _ = writeln!(out, "{}\t{}\t{}\t{}", s.slice.label(), s.solved, s.sessions, percent(s.rate));
    }
    out.push_str("```\n\n");

    out.push_str("## Mistakes per play\n\n```tsv\ntype\t0\t1\t2\t3\t4\tsessions\n");
    for h in &r.mistakes {
        let cells: Vec<String> = h.fractions.iter().map(|&f| percent(f)).collect();
        let _ = writeln!(out, "{}\t{}\t{}", h.slice.label(), cells.join("\t"), h.sessions());
    }
    out.push_str("```\n\n");

    out.push_str("## False-group guesses\n\n```tsv\npuzzle\ttype\tsessions_with_false_group_guess\tsessions\trate\n");
    for f in &r.false_group_rates {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            f.puzzle_id,
            f.subtype.label(),
            f.tripped,
            f.sessions,
            percent(f.rate)
        );
    }
    out.push_str("```\n\n");

    out.push_str("## Solve rate by type (chi-squared)\n\n```tsv\ntype\tsolved\tfailed\n");
    for (label, row) in r.solve_table.row_labels.iter().zip(&r.solve_table.counts) {
        let _ = writeln!(out, "{label}\t{}\t{}", row[0], row[1]);
    }
    out.push_str("```\n\n");
    if let Some(x) = &r.chi_squared {
        let _ = writeln!(
            out,
            "X^2({}, N={}) = {:.2}, {} (p = {:.6})\n",
            x.df,
            x.n,
            x.statistic,
            x.p_band(),
            x.p_value
        );
    }

    if let Some(t) = &r.preferences {
        let _ = writeln!(
            out,
            "## Preferences\n\nResponses included: {} (excluded as seen before: {})\n",
            t.included, t.excluded_seen_before
        );
        out.push_str("```tsv\ntype\tquestion\tai\tnyt\ttie\tai_rate\ttie_rate\n");
        let mut slices: Vec<Slice> = t.counts.keys().map(|(s, _)| *s).collect();
        slices.dedup();
        for slice in Slice::table_order().into_iter().filter(|s| slices.contains(s)) {
            for axis in Axis::ALL {
                let c = t.get(slice, axis);
                let n = c.total().max(1) as f64;
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    slice.label(),
                    axis.question(),
                    c.ai,
                    c.nyt,
                    c.tie,
                    percent(c.ai as f64 / n),
                    percent(c.tie as f64 / n)
                );
            }
        }
        out.push_str("```\n\n");
    }

    if !r.notes.is_empty() {
        out.push_str("## Notes\n\n");
        for n in &r.notes {
            let _ = writeln!(out, "- {n}");
        }
    }
    out
}
