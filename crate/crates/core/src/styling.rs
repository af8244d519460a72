//! Numeric visual encodings: attention levels and their saturation, muted
//! context colors, arc thickness, histogram bar heights and paint layers.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::color::{Color, Hsl};

/// How much attention the viewer has given an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum AttentionLevel {
    Background = 0,
    Armed = 1,
    Selected = 2,
    SelectedArmed = 3,
}

impl AttentionLevel {
    pub const ALL: [AttentionLevel; 4] = [
        AttentionLevel::Background,
        AttentionLevel::Armed,
        AttentionLevel::Selected,
        AttentionLevel::SelectedArmed,
    ];

    pub fn value(self) -> u8 {
        self as u8
    }
}

pub fn attention_level(selected: bool, armed: bool) -> AttentionLevel {
    match (selected, armed) {
        (false, false) => AttentionLevel::Background,
        (false, true) => AttentionLevel::Armed,
        (true, false) => AttentionLevel::Selected,
        (true, true) => AttentionLevel::SelectedArmed,
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid style parameters: {0}")]
pub struct InvalidParams(pub String);

/// Every field can be overridden by name from a flat `key = value` config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StyleParams {
    /// Saturation at attention level 0.
    pub s0: f64,
    /// Saturation at attention level 3.
    pub s3: f64,
    /// Degrees.
    pub building_hue: f64,
    pub building_lightness: f64,
    /// Degrees.
    pub arc_hue: f64,
    pub arc_lightness: f64,
    pub context_saturation_cap: f64,
    pub context_lightness_min: f64,
    pub context_lightness_max: f64,
    pub w_min: f64,
    pub w_max: f64,
    /// Thickness gained per e-fold of count.
    pub thickness_gain: f64,
    pub histogram_height: f64,
}

impl Default for StyleParams {
    fn default() -> Self {
        Self {
            s0: 0.15,
            s3: 0.90,
            building_hue: 10.0,
            building_lightness: 0.5,
            arc_hue: 210.0,
            arc_lightness: 0.45,
            context_saturation_cap: 0.08,
            context_lightness_min: 0.65,
            context_lightness_max: 0.85,
            w_min: 1.0,
            w_max: 8.0,
            thickness_gain: 4.0 / 100f64.ln(),
            histogram_height: 40.0,
        }
    }
}

impl StyleParams {
    pub fn validate(&self) -> Result<(), InvalidParams> {
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        let fail = |msg: &str| Err(InvalidParams(msg.to_string()));
        if !(0.0 <= self.s0 && self.s0 < self.s3 && self.s3 <= 1.0) {
            return fail("need 0 <= s0 < s3 <= 1");
        }
        if self.s0 == 0.0 {
            return fail("s0 must be positive for geometric interpolation");
        }
        if self.w_min.is_nan() || self.w_max.is_nan() || self.w_min >= self.w_max {
            return fail("need w_min < w_max");
        }
        if self.thickness_gain.is_nan() || self.thickness_gain <= 0.0 {
            return fail("thickness_gain must be positive");
        }
        if self.histogram_height.is_nan() || self.histogram_height <= 0.0 {
            return fail("histogram_height must be positive");
        }
        if !(unit(self.context_saturation_cap)
            && unit(self.context_lightness_min)
            && unit(self.context_lightness_max)
            && self.context_lightness_min <= self.context_lightness_max)
        {
            return fail("context saturation cap and lightness range must lie in [0, 1]");
        }
        if !(unit(self.building_lightness) && unit(self.arc_lightness)) {
            return fail("lightness values must lie in [0, 1]");
        }
        if !(self.building_hue.is_finite() && self.arc_hue.is_finite()) {
            return fail("hues must be finite");
        }
        Ok(())
    }
}

/// Geometric interpolation from `s0` at level 0 to `s3` at level 3.
pub fn saturation(level: AttentionLevel, p: &StyleParams) -> f64 {
    match level {
        AttentionLevel::Background => p.s0,
        AttentionLevel::SelectedArmed => p.s3,
        _ => p.s0 * (p.s3 / p.s0).powf(f64::from(level.value()) / 3.0),
    }
}

/// Keeps the hue, caps saturation and squeezes lightness into the context
/// band so the map recedes behind the data.
pub fn context_color(source: Color, p: &StyleParams) -> Hsl {
    let hsl = source.to_hsl();
    let (lo, hi) = (p.context_lightness_min, p.context_lightness_max);
    Hsl::new(
        hsl.h,
        hsl.s.min(p.context_saturation_cap),
        lo + hsl.l * (hi - lo),
    )
}

pub fn building_fill(level: AttentionLevel, p: &StyleParams) -> Hsl {
    Hsl::new(p.building_hue, saturation(level, p), p.building_lightness)
}

pub fn arc_fill(level: AttentionLevel, p: &StyleParams) -> Hsl {
    Hsl::new(p.arc_hue, saturation(level, p), p.arc_lightness)
}

/// `w_min + k·ln(count)`, clamped to `[w_min, w_max]`. Panics on zero.
pub fn arc_thickness(count: u64, p: &StyleParams) -> f64 {
    assert!(count >= 1, "arcs carry at least one relocation");
    (p.w_min + p.thickness_gain * (count as f64).ln()).clamp(p.w_min, p.w_max)
}

pub fn histogram_height(count: u64, max_count: u64, p: &StyleParams) -> f64 {
    if max_count == 0 {
        return 0.0;
    }
    if count == max_count {
        return p.histogram_height;
    }
    p.histogram_height * (count as f64).ln_1p() / (max_count as f64).ln_1p()
}

/// Paint layer; larger paints later.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LayerId(pub u8);

impl LayerId {
    pub const CONTEXT: LayerId = LayerId(0);
    pub const BACKGROUND_ARCS: LayerId = LayerId(1);
    pub const BUILDINGS: LayerId = LayerId(2);
    pub const FOCUS_ARCS: LayerId = LayerId(3);
    pub const FOCUS_BUILDINGS: LayerId = LayerId(4);
    pub const COUNT: usize = 5;

    pub fn index(self) -> usize {
        usize::from(self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementKind {
    ContextPolygon,
    Arc,
    Building,
}

/// Arcs take the larger level of their two endpoints.
pub fn layer_of(kind: ElementKind, level: AttentionLevel) -> LayerId {
    let focused = level != AttentionLevel::Background;
    match (kind, focused) {
        (ElementKind::ContextPolygon, _) => LayerId::CONTEXT,
        (ElementKind::Arc, false) => LayerId::BACKGROUND_ARCS,
        (ElementKind::Arc, true) => LayerId::FOCUS_ARCS,
        (ElementKind::Building, false) => LayerId::BUILDINGS,
        (ElementKind::Building, true) => LayerId::FOCUS_BUILDINGS,
    }
}
