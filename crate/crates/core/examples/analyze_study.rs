//! Builds the constructed reference study and prints the report.

use connections_core::analysis::synthetic::{constructed_study, reference_study};
use connections_core::analysis::{analyze, render_markdown};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (puzzles, sessions) = constructed_study(&reference_study())?;
    let report = analyze(&sessions, &[], None, &puzzles)?;
    print!("{}", render_markdown(&report));
    Ok(())
}
