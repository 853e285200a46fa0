//! Theory text format: one formula per line, `#` comments, blank lines
//! ignored.

use thiserror::Error;

use super::{parse, ParseError, Theory};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("line {line}: {source}")]
pub struct TheoryTextError {
    pub line: usize,
    pub source: ParseError,
}

impl Theory {
    /// Parses a theory from text. The universe is the union of the member
    /// symbol sets.
    pub fn parse_text(text: &str) -> Result<Theory, TheoryTextError> {
        let mut formulas = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let content = line.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            let formula = parse(line).map_err(|mut e| {
                e.line = i + 1;
                TheoryTextError { line: i + 1, source: e }
            })?;
            formulas.push(formula);
        }
        Ok(Theory::new(formulas))
    }

    /// Renders the theory in the text format, one formula per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for f in self.formulas() {
            out.push_str(&f.to_string());
            out.push('\n');
        }
        out
    }
}
