use std::fmt;

use thiserror::Error;

use crate::color::Color;
use crate::geom::{Point, Polygon};

use super::{ColorMap, PolygonEntry, PolygonSet, RelocationSeries};

#[derive(Debug, Clone, PartialEq)]
pub struct Building {
    /// Row/column index into the relocation matrices.
    pub id: usize,
    pub name: String,
    pub color: Color,
    pub polygons: Vec<Polygon>,
    /// Interior point of the largest polygon; arcs start and end here.
    pub anchor: Point,
}

/// The joined, immutable model the engine and scene compiler work from.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub width: u32,
    pub height: u32,
    pub buildings: Vec<Building>,
    pub context_polygons: Vec<PolygonEntry>,
    pub series: RelocationSeries,
}

impl Dataset {
    pub fn building_by_name(&self, name: &str) -> Option<&Building> {
        self.buildings.iter().find(|b| b.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JoinProblem {
    #[error("building {0} has no relocation data")]
    NoRelocationData(String),
    #[error("building {0} in the relocation file has no color")]
    NoColor(String),
    #[error("color {color} ({name}) matches no polygon")]
    UnmatchedColor { color: Color, name: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetError {
    pub problems: Vec<JoinProblem>,
}

impl fmt::Display for DatasetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msgs: Vec<String> = self.problems.iter().map(ToString::to_string).collect();
        f.write_str(&msgs.join("; "))
    }
}

impl std::error::Error for DatasetError {}

/// Joins the three inputs. Fails listing every inconsistency at once.
pub fn load_dataset(
    polys: PolygonSet,
    cmap: &ColorMap,
    series: RelocationSeries,
) -> Result<Dataset, DatasetError> {
    let mut problems = Vec::new();
    for entry in cmap.entries() {
        if !series.building_names().contains(&entry.name) {
            problems.push(JoinProblem::NoRelocationData(entry.name.clone()));
        }
    }
    for name in series.building_names() {
        if cmap.color_of(name).is_none() {
            problems.push(JoinProblem::NoColor(name.clone()));
        }
    }
    for entry in cmap.entries() {
        if !polys.entries.iter().any(|p| p.color == entry.color) {
            problems.push(JoinProblem::UnmatchedColor {
                color: entry.color,
                name: entry.name.clone(),
            });
        }
    }
    if !problems.is_empty() {
        return Err(DatasetError { problems });
    }

    let mut owned: Vec<Vec<Polygon>> = vec![Vec::new(); series.buildings()];
    let mut context_polygons = Vec::new();
    for entry in polys.entries {
        match cmap.name_of(entry.color) {
            Some(name) => {
                let id = series
                    .building_names()
                    .iter()
                    .position(|n| n == name)
                    .expect("bijection checked above");
                owned[id].push(entry.polygon);
            }
            None => context_polygons.push(entry),
        }
    }

    let buildings = owned
        .into_iter()
        .enumerate()
        .map(|(id, polygons)| {
            let name = series.building_names()[id].clone();
            Building {
                id,
                color: cmap.color_of(&name).expect("bijection checked above"),
                anchor: building_anchor(&polygons),
                name,
                polygons,
            }
        })
        .collect();

    Ok(Dataset {
        width: polys.width,
        height: polys.height,
        buildings,
        context_polygons,
        series,
    })
}

/// Centroid of the largest polygon, moved onto the nearest interior span of
/// its scanline when the shape is concave enough to put the centroid outside.
///
/// Panics on an empty slice.
pub fn building_anchor(polygons: &[Polygon]) -> Point {
    let largest = polygons
        .iter()
        .reduce(|best, p| if p.area() > best.area() { p } else { best })
        .expect("building has at least one polygon");
    let centroid = largest.centroid();
    if largest.contains_strictly(centroid) {
        return centroid;
    }

    // Lattice polygons always have interior spans at half-integer rows, so
    // stepping away from the centroid row terminates inside the bounds.
    let (lo, hi) = largest.bounds();
    let mut offsets = vec![0.0];
    let mut step = 0.5;
    while centroid.y - step > lo.y as f64 || centroid.y + step < hi.y as f64 {
        offsets.push(step);
        offsets.push(-step);
        step += 0.5;
    }
    for dy in offsets {
        if let Some(p) = nearest_span_midpoint(largest, Point::new(centroid.x, centroid.y + dy)) {
            return p;
        }
    }
    centroid
}

fn nearest_span_midpoint(poly: &Polygon, target: Point) -> Option<Point> {
    let xs = poly.scanline_crossings(target.y);
    xs.chunks_exact(2)
        .filter(|span| span[1] > span[0])
        .map(|span| {
            let dist = if target.x < span[0] {
                span[0] - target.x
            } else {
                (target.x - span[1]).max(0.0)
            };
            (dist, Point::new((span[0] + span[1]) / 2.0, target.y))
        })
        .filter(|(_, p)| poly.contains_strictly(*p))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, p)| p)
}
