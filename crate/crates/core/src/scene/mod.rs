//! Dataset + view state → layered, renderer-agnostic [`Scene`].
//!
//! The scene's JSON form ([`scene_json`]) is the wire format for renderers;
//! [`scene_to_svg`] is a static export of the same content.

mod svg;

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::arc_geometry::{spiral_arc, ArcError, ArcParams};
use crate::color::Hsl;
use crate::dataset_io::Dataset;
use crate::engine::{
    aggregate, building_summary, period_totals, visible_links, PartnerFlow, TimeWindow,
    WindowError,
};
use crate::geom::Point;
use crate::styling::{
    arc_fill, arc_thickness, attention_level, building_fill, context_color, histogram_height,
    layer_of, AttentionLevel, ElementKind, LayerId, StyleParams,
};

pub use svg::scene_to_svg;

/// Offset of a card from its building's anchor when it has no stored
/// position.
pub const CARD_OFFSET: Point = Point::new(16.0, -16.0);
/// Extra offset per further default-placed card.
pub const CARD_CASCADE: f64 = 12.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CardPlacement {
    pub building: usize,
    pub x: f64,
    pub y: f64,
    pub pinned: bool,
}

/// Everything the analyst controls.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewState {
    pub window: TimeWindow,
    pub threshold: u64,
    pub selected: BTreeSet<usize>,
    pub armed: Option<usize>,
    /// Stored card positions; selected buildings without one get a default.
    pub cards: Vec<CardPlacement>,
}

impl ViewState {
    /// Threshold 1, nothing selected or armed.
    pub fn new(window: TimeWindow) -> Self {
        Self {
            window,
            threshold: 1,
            selected: BTreeSet::new(),
            armed: None,
            cards: Vec::new(),
        }
    }

    pub fn level_of(&self, building: usize) -> AttentionLevel {
        attention_level(self.selected.contains(&building), self.armed == Some(building))
    }

    pub fn validate(&self, ds: &Dataset) -> Result<(), SceneError> {
        let n = ds.buildings.len();
        TimeWindow::new(self.window.lo(), self.window.hi(), ds.series.periods())?;
        if self.threshold == 0 {
            return Err(SceneError::ZeroThreshold);
        }
        if let Some(&id) = self.selected.iter().find(|&&id| id >= n) {
            return Err(SceneError::UnknownBuilding(id));
        }
        if let Some(id) = self.armed.filter(|&id| id >= n) {
            return Err(SceneError::UnknownBuilding(id));
        }
        let mut seen = HashSet::new();
        for card in &self.cards {
            if card.building >= n {
                return Err(SceneError::UnknownBuilding(card.building));
            }
            if !self.selected.contains(&card.building) {
                return Err(SceneError::CardNotSelected(card.building));
            }
            if !seen.insert(card.building) {
                return Err(SceneError::DuplicateCard(card.building));
            }
            if !(card.x.is_finite() && card.y.is_finite()) {
                return Err(SceneError::CardPosition(card.building));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SceneError {
    #[error(transparent)]
    Window(#[from] WindowError),
    #[error("threshold must be at least 1")]
    ZeroThreshold,
    #[error("unknown building id {0}")]
    UnknownBuilding(usize),
    #[error("card for building {0}, which is not selected")]
    CardNotSelected(usize),
    #[error("more than one card for building {0}")]
    DuplicateCard(usize),
    #[error("card position for building {0} is not finite")]
    CardPosition(usize),
    #[error(transparent)]
    Arc(#[from] ArcError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Canvas {
    pub w: u32,
    pub h: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolygonItem {
    pub points: Vec<Point>,
    pub fill: Hsl,
    /// Set on data buildings, absent on context polygons.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub building: Option<usize>,
}

impl PolygonItem {
    pub fn area(&self) -> f64 {
        let n = self.points.len();
        let twice: f64 = (0..n)
            .map(|i| self.points[i].cross(self.points[(i + 1) % n]))
            .sum();
        twice.abs() / 2.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArcItem {
    pub src: usize,
    pub dst: usize,
    pub count: u64,
    pub points: Vec<Point>,
    pub thickness: f64,
    pub fill: Hsl,
    pub arrow: [Point; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum DrawItem {
    #[serde(rename = "poly")]
    Polygon(PolygonItem),
    #[serde(rename = "arc")]
    Arc(ArcItem),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramBar {
    pub label: String,
    pub total: u64,
    pub height: f64,
    pub in_window: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliderState {
    pub lo: usize,
    pub hi: usize,
    /// Number of periods.
    pub t: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CardPayload {
    pub building: usize,
    pub name: String,
    pub x: f64,
    pub y: f64,
    pub pinned: bool,
    pub out: u64,
    #[serde(rename = "in")]
    pub inflow: u64,
    pub net: i64,
    pub internal: u64,
    pub partners: Vec<PartnerFlow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scene {
    pub canvas: Canvas,
    /// Indexed by [`LayerId`]; always five entries.
    pub layers: Vec<Vec<DrawItem>>,
    pub histogram: Vec<HistogramBar>,
    pub slider: SliderState,
    pub cards: Vec<CardPayload>,
}

impl Scene {
    pub fn layer(&self, id: LayerId) -> &[DrawItem] {
        &self.layers[id.index()]
    }

    pub fn arcs(&self, id: LayerId) -> impl Iterator<Item = &ArcItem> {
        self.layer(id).iter().filter_map(|item| match item {
            DrawItem::Arc(arc) => Some(arc),
            DrawItem::Polygon(_) => None,
        })
    }

    pub fn polygons(&self, id: LayerId) -> impl Iterator<Item = &PolygonItem> {
        self.layer(id).iter().filter_map(|item| match item {
            DrawItem::Polygon(poly) => Some(poly),
            DrawItem::Arc(_) => None,
        })
    }
}

/// Canonical wire form: compact JSON with fields in declaration order.
pub fn scene_json(scene: &Scene) -> String {
    serde_json::to_string(scene).expect("scene serializes")
}

/// Hex SHA-256 of [`scene_json`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SceneDigest(pub String);

impl SceneDigest {
    pub fn of(scene: &Scene) -> Self {
        SceneDigest(hex::encode(Sha256::digest(scene_json(scene).as_bytes())))
    }
}

pub fn compile_scene(
    ds: &Dataset,
    vs: &ViewState,
    style: &StyleParams,
    arcp: &ArcParams,
) -> Result<Scene, SceneError> {
    vs.validate(ds)?;
    let mut layers: Vec<Vec<DrawItem>> = vec![Vec::new(); LayerId::COUNT];

    let mut context: Vec<PolygonItem> = ds
        .context_polygons
        .iter()
        .map(|entry| PolygonItem {
            points: entry.polygon.vertices().iter().map(|v| v.to_point()).collect(),
            fill: context_color(entry.color, style),
            building: None,
        })
        .collect();
    sort_polygons(&mut context);
    layers[LayerId::CONTEXT.index()].extend(context.into_iter().map(DrawItem::Polygon));

    let mut buildings: [Vec<PolygonItem>; 2] = Default::default();
    for b in &ds.buildings {
        let level = vs.level_of(b.id);
        let slot = usize::from(layer_of(ElementKind::Building, level) == LayerId::FOCUS_BUILDINGS);
        buildings[slot].extend(b.polygons.iter().map(|poly| PolygonItem {
            points: poly.vertices().iter().map(|v| v.to_point()).collect(),
            fill: building_fill(level, style),
            building: Some(b.id),
        }));
    }
    for (slot, layer) in [LayerId::BUILDINGS, LayerId::FOCUS_BUILDINGS].into_iter().enumerate() {
        let mut items = std::mem::take(&mut buildings[slot]);
        sort_polygons(&mut items);
        layers[layer.index()].extend(items.into_iter().map(DrawItem::Polygon));
    }

    let agg = aggregate(&ds.series, vs.window)?;
    for link in visible_links(&agg, vs.threshold, &vs.selected, vs.armed) {
        let level = vs.level_of(link.src).max(vs.level_of(link.dst));
        let path = spiral_arc(
            ds.buildings[link.src].anchor,
            ds.buildings[link.dst].anchor,
            arcp,
        )?;
        layers[layer_of(ElementKind::Arc, level).index()].push(DrawItem::Arc(ArcItem {
            src: link.src,
            dst: link.dst,
            count: link.count,
            points: path.points,
            thickness: arc_thickness(link.count, style),
            fill: arc_fill(level, style),
            arrow: path.arrow,
        }));
    }

    let totals = period_totals(&ds.series);
    let max_total = totals.iter().copied().max().unwrap_or(0);
    let histogram = totals
        .iter()
        .zip(ds.series.period_labels())
        .enumerate()
        .map(|(t, (&total, label))| HistogramBar {
            label: label.clone(),
            total,
            height: histogram_height(total, max_total, style),
            in_window: vs.window.contains(t),
        })
        .collect();

    let mut defaults_placed = 0;
    let cards = vs
        .selected
        .iter()
        .map(|&id| {
            let summary = building_summary(&agg, id);
            let (x, y, pinned) = match vs.cards.iter().find(|c| c.building == id) {
                Some(c) => (c.x, c.y, c.pinned),
                None => {
                    let cascade = CARD_CASCADE * defaults_placed as f64;
                    defaults_placed += 1;
                    let at = ds.buildings[id].anchor + CARD_OFFSET + Point::new(cascade, cascade);
                    (at.x, at.y, false)
                }
            };
            CardPayload {
                building: id,
                name: ds.buildings[id].name.clone(),
                x,
                y,
                pinned,
                out: summary.out_total,
                inflow: summary.in_total,
                net: summary.net,
                internal: summary.internal,
                partners: summary.partners,
            }
        })
        .collect();

    Ok(Scene {
        canvas: Canvas {
            w: ds.width,
            h: ds.height,
        },
        layers,
        histogram,
        slider: SliderState {
            lo: vs.window.lo(),
            hi: vs.window.hi(),
            t: ds.series.periods(),
        },
        cards,
    })
}

/// Area descending, then first vertex.
pub(crate) fn sort_polygons(items: &mut [PolygonItem]) {
    items.sort_by(|a, b| {
        b.area().total_cmp(&a.area()).then_with(|| {
            let first = |p: &PolygonItem| p.points.first().map(|q| (q.x, q.y));
            let (fa, fb) = (first(a), first(b));
            match (fa, fb) {
                (Some(pa), Some(pb)) => pa.0.total_cmp(&pb.0).then(pa.1.total_cmp(&pb.1)),
                _ => fa.is_some().cmp(&fb.is_some()),
            }
        })
    });
}
