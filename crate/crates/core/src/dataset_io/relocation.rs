use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use super::{content_lines, LineError, ParseError};

/// Square matrix of relocation counts, row = origin, column = destination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowMatrix {
    n: usize,
    data: Vec<u64>,
}

impl FlowMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0; n * n],
        }
    }

    /// Panics if `rows` is not square.
    pub fn from_rows(rows: Vec<Vec<u64>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, from: usize, to: usize) -> u64 {
        self.data[from * self.n + to]
    }

    pub fn set(&mut self, from: usize, to: usize, value: u64) {
        self.data[from * self.n + to] = value;
    }

    pub fn row(&self, from: usize) -> &[u64] {
        &self.data[from * self.n..(from + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [u64] {
        &mut self.data
    }

    /// Sum of all entries off the diagonal.
    pub fn off_diagonal_total(&self) -> u64 {
        let diagonal: u64 = (0..self.n).map(|i| self.get(i, i)).sum();
        self.data.iter().sum::<u64>() - diagonal
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("relocation series needs at least one period")]
    NoPeriods,
    #[error("relocation series needs at least one building")]
    NoBuildings,
    #[error("duplicate period label {0}")]
    DuplicatePeriod(String),
    #[error("duplicate building name {0}")]
    DuplicateBuilding(String),
    #[error("period {label}: matrix is {got}×{got}, expected {expected}×{expected}")]
    Dimension {
        label: String,
        expected: usize,
        got: usize,
    },
    #[error("{0} period labels for {1} matrices")]
    LabelCount(usize, usize),
}

/// Per-period origin/destination matrices over a fixed building list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelocationSeries {
    period_labels: Vec<String>,
    building_names: Vec<String>,
    matrices: Vec<FlowMatrix>,
}

impl RelocationSeries {
    pub fn new(
        period_labels: Vec<String>,
        building_names: Vec<String>,
        matrices: Vec<FlowMatrix>,
    ) -> Result<Self, SeriesError> {
        if building_names.is_empty() {
            return Err(SeriesError::NoBuildings);
        }
        if matrices.is_empty() {
            return Err(SeriesError::NoPeriods);
        }
        if period_labels.len() != matrices.len() {
            return Err(SeriesError::LabelCount(period_labels.len(), matrices.len()));
        }
        if let Some(dup) = first_duplicate(&building_names) {
            return Err(SeriesError::DuplicateBuilding(dup.to_string()));
        }
        if let Some(dup) = first_duplicate(&period_labels) {
            return Err(SeriesError::DuplicatePeriod(dup.to_string()));
        }
        let n = building_names.len();
        for (label, m) in period_labels.iter().zip(&matrices) {
            if m.size() != n {
                return Err(SeriesError::Dimension {
                    label: label.clone(),
                    expected: n,
                    got: m.size(),
                });
            }
        }
        Ok(Self {
            period_labels,
            building_names,
            matrices,
        })
    }

    pub fn period_labels(&self) -> &[String] {
        &self.period_labels
    }

    pub fn building_names(&self) -> &[String] {
        &self.building_names
    }

    pub fn matrices(&self) -> &[FlowMatrix] {
        &self.matrices
    }

    /// Number of periods, `T`.
    pub fn periods(&self) -> usize {
        self.matrices.len()
    }

    /// Number of buildings, `N`.
    pub fn buildings(&self) -> usize {
        self.building_names.len()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("buildings {}\n", self.building_names.join(" "));
        for (label, m) in self.period_labels.iter().zip(&self.matrices) {
            writeln!(out, "period {label}").unwrap();
            for i in 0..m.size() {
                let row: Vec<String> = m.row(i).iter().map(u64::to_string).collect();
                writeln!(out, "{}", row.join(" ")).unwrap();
            }
        }
        out
    }
}

fn first_duplicate(items: &[String]) -> Option<&str> {
    let mut seen = HashSet::new();
    items
        .iter()
        .find(|s| !seen.insert(s.as_str()))
        .map(String::as_str)
}

struct OpenPeriod {
    label: String,
    line: usize,
    rows: Vec<Vec<u64>>,
}

pub fn parse_relocation_file(text: &str) -> Result<RelocationSeries, ParseError> {
    let mut errors = Vec::new();
    let mut lines = content_lines(text);

    let Some((header_no, header)) = lines.next() else {
        return Err(ParseError {
            errors: vec![LineError::new(1, "missing `buildings <name>...` header")],
        });
    };
    let mut header_tokens = header.split_whitespace();
    let names: Vec<String> = if header_tokens.next() == Some("buildings") {
        header_tokens.map(str::to_string).collect()
    } else {
        Vec::new()
    };
    if names.is_empty() {
        return Err(ParseError {
            errors: vec![LineError::new(
                header_no,
                format!("invalid header `{header}`, expected `buildings <name>...`"),
            )],
        });
    }
    if let Some(dup) = first_duplicate(&names) {
        errors.push(LineError::new(header_no, format!("duplicate building name {dup}")));
    }
    let n = names.len();

    let mut labels: Vec<String> = Vec::new();
    let mut matrices = Vec::new();
    let mut open: Option<OpenPeriod> = None;
    let mut last_line = header_no;

    let mut close = |period: OpenPeriod, errors: &mut Vec<LineError>| {
        if period.rows.len() != n {
            errors.push(LineError::new(
                period.line,
                format!(
                    "period {}: expected {n} rows, got {}",
                    period.label,
                    period.rows.len()
                ),
            ));
        } else if labels.contains(&period.label) {
            errors.push(LineError::new(
                period.line,
                format!("duplicate period label {}", period.label),
            ));
        } else {
            labels.push(period.label);
            matrices.push(FlowMatrix::from_rows(period.rows));
        }
    };

    for (no, line) in lines {
        last_line = no;
        let mut tokens = line.split_whitespace();
        if line.starts_with("period") && tokens.next() == Some("period") {
            if let Some(done) = open.take() {
                close(done, &mut errors);
            }
            let rest: Vec<&str> = tokens.collect();
            match rest.as_slice() {
                [label] => {
                    open = Some(OpenPeriod {
                        label: label.to_string(),
                        line: no,
                        rows: Vec::new(),
                    })
                }
                _ => errors.push(LineError::new(no, "expected `period <label>`")),
            }
            continue;
        }

        let Some(period) = open.as_mut() else {
            errors.push(LineError::new(no, "matrix row outside a `period` block"));
            continue;
        };
        if period.rows.len() == n {
            errors.push(LineError::new(
                no,
                format!("period {}: more than {n} rows", period.label),
            ));
            continue;
        }
        match parse_row(line, n, &period.label, period.rows.len() + 1) {
            Ok(row) => period.rows.push(row),
            Err(msg) => {
                errors.push(LineError::new(no, msg));
                // Keep the row count honest so one bad row is one error.
                period.rows.push(vec![0; n]);
            }
        }
    }
    if let Some(done) = open.take() {
        close(done, &mut errors);
    }
    if matrices.is_empty() && errors.is_empty() {
        errors.push(LineError::new(last_line, "no `period` blocks"));
    }

    ParseError::from_errors(errors)?;
    Ok(RelocationSeries::new(labels, names, matrices).expect("parser enforces series invariants"))
}

fn parse_row(line: &str, n: usize, label: &str, row_no: usize) -> Result<Vec<u64>, String> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.len() != n {
        return Err(format!(
            "period {label} row {row_no}: expected {n} entries, got {}",
            tokens.len()
        ));
    }
    tokens
        .iter()
        .map(|t| match t.parse::<i64>() {
            Ok(v) if v < 0 => Err(format!("negative entry {v}")),
            Ok(v) => Ok(v as u64),
            Err(_) => t.parse::<u64>().map_err(|_| format!("invalid entry `{t}`")),
        })
        .collect()
}
