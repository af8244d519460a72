//! Clockwise spiral relocation arcs, sampled as polylines with an arrowhead
//! at the target.
//!
//! The arc is the chord plus a sine bulge along the clockwise normal:
//! `P(t) = S + t·d + β·L·sin(π·t^α)·n` with `d = T − S`, `L = |d|` and
//! `n = (d.y, −d.x) / L` in y-down screen coordinates. With `α > 1` the
//! bulge peaks past the middle and the curve hooks sharply into the target.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::Point;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ArcError {
    #[error("arc endpoints coincide at ({0}, {1})")]
    Degenerate(f64, f64),
    #[error("tangent must have nonzero length")]
    ZeroTangent,
    #[error("curvature needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("invalid arc parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ArcParams {
    /// Peak offset as a fraction of chord length.
    pub bulge: f64,
    /// Where along the chord the curvature concentrates; larger is later.
    pub exponent: f64,
    /// Segments per arc.
    pub samples: usize,
    pub arrow_length: f64,
    /// Degrees.
    pub arrow_half_angle: f64,
}

impl Default for ArcParams {
    fn default() -> Self {
        Self {
            bulge: 0.18,
            exponent: 2.5,
            samples: 64,
            arrow_length: 8.0,
            arrow_half_angle: 25.0,
        }
    }
}

impl ArcParams {
    pub fn validate(&self) -> Result<(), ArcError> {
        let fail = |msg: &str| Err(ArcError::InvalidParams(msg.to_string()));
        if !(self.bulge > 0.0 && self.bulge.is_finite()) {
            return fail("bulge must be positive");
        }
        if !(self.exponent > 1.0 && self.exponent.is_finite()) {
            return fail("exponent must exceed 1");
        }
        if self.samples < 16 {
            return fail("samples must be at least 16");
        }
        if !(self.arrow_length > 0.0 && self.arrow_length.is_finite()) {
            return fail("arrow_length must be positive");
        }
        if !(self.arrow_half_angle > 0.0 && self.arrow_half_angle < 90.0) {
            return fail("arrow_half_angle must lie strictly between 0 and 90 degrees");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArcPath {
    /// `samples + 1` points; the first is the source and the last the
    /// target, exactly.
    pub points: Vec<Point>,
    /// Apex at the target, then the two base corners.
    pub arrow: [Point; 3],
}

/// Offset of `P(t)` from the chord, along the clockwise normal.
pub fn bulge_offset(t: f64, length: f64, p: &ArcParams) -> f64 {
    p.bulge * length * (std::f64::consts::PI * t.powf(p.exponent)).sin()
}

pub fn spiral_arc(s: Point, t: Point, p: &ArcParams) -> Result<ArcPath, ArcError> {
    let d = t - s;
    let len = d.norm();
    if len == 0.0 {
        return Err(ArcError::Degenerate(s.x, s.y));
    }
    let n = Point::new(d.y, -d.x) * (1.0 / len);
    let m = p.samples;
    let mut points: Vec<Point> = (0..=m)
        .map(|i| {
            let u = i as f64 / m as f64;
            s + d * u + n * bulge_offset(u, len, p)
        })
        .collect();
    points[0] = s;
    points[m] = t;

    // P'(1) = d − β·L·π·α·n, since cos(π) = −1.
    let tangent = d - n * (p.bulge * len * std::f64::consts::PI * p.exponent);
    let arrow = arrowhead(t, tangent * (1.0 / tangent.norm()), p)?;
    Ok(ArcPath { points, arrow })
}

/// Isoceles triangle with its apex at `end`, pointing along `tangent`.
pub fn arrowhead(end: Point, tangent: Point, p: &ArcParams) -> Result<[Point; 3], ArcError> {
    let norm = tangent.norm();
    if norm.is_nan() || norm <= 0.0 {
        return Err(ArcError::ZeroTangent);
    }
    let dir = tangent * (1.0 / norm);
    let perp = Point::new(-dir.y, dir.x);
    let base = end - dir * p.arrow_length;
    let half_width = p.arrow_length * p.arrow_half_angle.to_radians().tan();
    Ok([end, base + perp * half_width, base - perp * half_width])
}

/// Menger curvature at every interior point: entry `i` belongs to
/// `points[i + 1]`. A repeated point gives 0.
pub fn discrete_curvature(points: &[Point]) -> Result<Vec<f64>, ArcError> {
    if points.len() < 3 {
        return Err(ArcError::TooFewPoints(points.len()));
    }
    Ok(points
        .windows(3)
        .map(|w| {
            let (a, b, c) = (w[0], w[1], w[2]);
            let denom = a.distance(b) * b.distance(c) * a.distance(c);
            if denom == 0.0 {
                return 0.0;
            }
            // 4·area = 2·|cross|.
            2.0 * (b - a).cross(c - a).abs() / denom
        })
        .collect())
}
