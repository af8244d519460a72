//! The three line-oriented input files and their join into a [`Dataset`].
//!
//! * polygon file: `canvas <w> <h>` header, then `<RRGGBB> <x>,<y> ...`
//! * color map: `<RRGGBB> <name>`
//! * relocation file: `buildings <n1> ... <nN>`, then blocks of
//!   `period <label>` followed by N rows of N non-negative integers
//!
//! All three accept `#` comment lines and blank lines. Every rejection names
//! the 1-based line it came from.

mod color_map;
mod dataset;
mod polygon_file;
mod relocation;

use std::fmt;

use thiserror::Error;

pub use color_map::{parse_color_map, ColorEntry, ColorMap};
pub use dataset::{building_anchor, load_dataset, Building, Dataset, DatasetError, JoinProblem};
pub use polygon_file::{parse_polygon_file, PolygonEntry, PolygonSet};
pub use relocation::{parse_relocation_file, FlowMatrix, RelocationSeries, SeriesError};

/// One rejected input line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} (line {line})")]
pub struct LineError {
    pub line: usize,
    pub message: String,
}

impl LineError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

/// Every line-level problem found in one file, in line order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub errors: Vec<LineError>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.errors.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

impl ParseError {
    fn from_errors(mut errors: Vec<LineError>) -> Result<(), ParseError> {
        if errors.is_empty() {
            Ok(())
        } else {
            errors.sort_by_key(|e| e.line);
            Err(ParseError { errors })
        }
    }
}

/// Non-comment, non-blank lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.trim();
        (!line.is_empty() && !line.starts_with('#')).then_some((i + 1, line))
    })
}
