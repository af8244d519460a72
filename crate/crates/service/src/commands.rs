//! The `vectorize`, `validate` and `render` commands. Each returns the line
//! to print on success, or a [`CliError`] carrying the exit status.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use relocviz_core::arc_geometry::ArcParams;
use relocviz_core::dataset_io::{
    load_dataset, parse_color_map, parse_polygon_file, parse_relocation_file, Dataset, JoinProblem,
    ParseError,
};
use relocviz_core::engine::{period_totals, TimeWindow};
use relocviz_core::scene::{compile_scene, scene_to_svg, ViewState};
use relocviz_core::styling::StyleParams;
use relocviz_core::vectorizer::{vectorize, RasterImage};
use relocviz_core::Color;
use thiserror::Error;

/// Invalid input data or arguments.
pub const EXIT_INVALID: u8 = 1;
/// Unreadable or unwritable files.
pub const EXIT_IO: u8 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message}")]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }

    fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_IO,
            message: format!("{}: {err}", path.display()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DatasetPaths {
    pub polygons: PathBuf,
    pub colors: PathBuf,
    pub relocations: PathBuf,
}

pub fn cmd_vectorize(
    input: &Path,
    output: &Path,
    snap: u8,
    min_area: usize,
) -> Result<String, CliError> {
    let bytes = std::fs::read(input).map_err(|e| CliError::io(input, e))?;
    let img = RasterImage::decode(&bytes)
        .map_err(|e| CliError::io(input, format!("not a readable PPM image ({e})")))?;
    let set = vectorize(&img, snap, min_area);
    std::fs::write(output, set.to_text()).map_err(|e| CliError::io(output, e))?;
    Ok(format!(
        "{} regions written to {}",
        set.entries.len(),
        output.display()
    ))
}

pub fn cmd_validate(paths: &DatasetPaths) -> Result<String, CliError> {
    let ds = load(paths)?;
    let total: u64 = period_totals(&ds.series).iter().sum();
    Ok(format!(
        "{} buildings, {} periods, {} relocations",
        ds.buildings.len(),
        ds.series.periods(),
        total
    ))
}

#[derive(Debug, Clone)]
pub struct RenderOptions {
    pub from: usize,
    /// Defaults to the last period.
    pub to: Option<usize>,
    pub threshold: u64,
    /// Building names or ids.
    pub selected: Vec<String>,
    pub armed: Option<String>,
}

pub fn cmd_render(
    paths: &DatasetPaths,
    opts: &RenderOptions,
    style: &StyleParams,
    arc: &ArcParams,
    output: &Path,
) -> Result<String, CliError> {
    let ds = load(paths)?;
    let periods = ds.series.periods();
    let window = TimeWindow::new(opts.from, opts.to.unwrap_or(periods - 1), periods)
        .map_err(|e| CliError::invalid(e.to_string()))?;
    let mut vs = ViewState::new(window);
    vs.threshold = opts.threshold;
    vs.selected = opts
        .selected
        .iter()
        .map(|b| resolve_building(&ds, b))
        .collect::<Result<BTreeSet<_>, _>>()?;
    vs.armed = opts
        .armed
        .as_deref()
        .map(|b| resolve_building(&ds, b))
        .transpose()?;
    let scene =
        compile_scene(&ds, &vs, style, arc).map_err(|e| CliError::invalid(e.to_string()))?;
    std::fs::write(output, scene_to_svg(&scene)).map_err(|e| CliError::io(output, e))?;
    Ok(format!("wrote {}", output.display()))
}

/// A building name, or failing that a numeric id.
pub fn resolve_building(ds: &Dataset, key: &str) -> Result<usize, CliError> {
    if let Some(b) = ds.building_by_name(key) {
        return Ok(b.id);
    }
    match key.parse::<usize>() {
        Ok(id) if id < ds.buildings.len() => Ok(id),
        _ => Err(CliError::invalid(format!("unknown building `{key}`"))),
    }
}

/// Reads and joins the three files. Every problem found is reported, one
/// per line, as `file:line: message`.
pub fn load(paths: &DatasetPaths) -> Result<Dataset, CliError> {
    let read = |p: &Path| std::fs::read_to_string(p).map_err(|e| CliError::io(p, e));
    let poly_text = read(&paths.polygons)?;
    let color_text = read(&paths.colors)?;
    let reloc_text = read(&paths.relocations)?;

    let mut report = Vec::new();
    let polys = located(&paths.polygons, parse_polygon_file(&poly_text), &mut report);
    let cmap = located(&paths.colors, parse_color_map(&color_text), &mut report);
    let series = located(&paths.relocations, parse_relocation_file(&reloc_text), &mut report);
    let (Some(polys), Some(cmap), Some(series)) = (polys, cmap, series) else {
        return Err(CliError::invalid(report.join("\n")));
    };

    load_dataset(polys, &cmap, series).map_err(|err| {
        let lines: Vec<String> = err
            .problems
            .iter()
            .map(|problem| {
                let (path, text) = match problem {
                    JoinProblem::NoColor(_) => (&paths.relocations, &reloc_text),
                    _ => (&paths.colors, &color_text),
                };
                match join_problem_line(problem, text) {
                    Some(line) => format!("{}:{line}: {problem}", path.display()),
                    None => format!("{}: {problem}", path.display()),
                }
            })
            .collect();
        CliError::invalid(lines.join("\n"))
    })
}

fn located<T>(path: &Path, parsed: Result<T, ParseError>, report: &mut Vec<String>) -> Option<T> {
    match parsed {
        Ok(v) => Some(v),
        Err(err) => {
            report.extend(
                err.errors
                    .iter()
                    .map(|e| format!("{}:{}: {}", path.display(), e.line, e.message)),
            );
            None
        }
    }
}

/// The line a join problem stems from: the color map entry, or the
/// relocation file's `buildings` header.
fn join_problem_line(problem: &JoinProblem, text: &str) -> Option<usize> {
    let matches = |tokens: &[&str]| match problem {
        JoinProblem::NoRelocationData(name) => tokens.get(1) == Some(&name.as_str()),
        JoinProblem::NoColor(_) => tokens.first() == Some(&"buildings"),
        JoinProblem::UnmatchedColor { color, .. } => {
            tokens.first().and_then(|t| t.parse::<Color>().ok()) == Some(*color)
        }
    };
    text.lines().enumerate().find_map(|(i, line)| {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        (!line.trim_start().starts_with('#') && matches(&tokens)).then_some(i + 1)
    })
}
