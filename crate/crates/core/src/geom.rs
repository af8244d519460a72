//! Planar geometry shared by the map, the vectorizer and the arc generator.
//!
//! Map polygons live on the integer pixel lattice (`GridPoint`, y grows
//! downward); everything derived from them (anchors, arc samples) is
//! continuous (`Point`).

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Continuous 2D point in screen coordinates. Serialized as `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// A pixel-lattice corner. Pixel `(x, y)` covers `[x, x+1] × [y, y+1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GridPoint {
    pub x: i64,
    pub y: i64,
}

impl GridPoint {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    pub fn to_point(self) -> Point {
        Point::new(self.x as f64, self.y as f64)
    }

    fn sub(self, o: GridPoint) -> GridPoint {
        GridPoint::new(self.x - o.x, self.y - o.y)
    }
}

fn cross(a: GridPoint, b: GridPoint) -> i128 {
    i128::from(a.x) * i128::from(b.y) - i128::from(a.y) * i128::from(b.x)
}

fn dot(a: GridPoint, b: GridPoint) -> i128 {
    i128::from(a.x) * i128::from(b.x) + i128::from(a.y) * i128::from(b.y)
}

fn orient(a: GridPoint, b: GridPoint, c: GridPoint) -> i128 {
    cross(b.sub(a), c.sub(a)).signum()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolygonError {
    #[error("polygon needs ≥3 vertices")]
    TooFewVertices,
    #[error("polygon has zero area")]
    ZeroArea,
    #[error("polygon has a zero-length edge at vertex {0}")]
    RepeatedVertex(usize),
    #[error("polygon self-intersects (edges {0} and {1})")]
    SelfIntersecting(usize, usize),
}

/// Closed polygon on the pixel lattice; the closing edge back to the first
/// vertex is implicit.
///
/// Simplicity is checked in the weak sense: edges may meet at a shared
/// vertex (a region pinched at a diagonal corner) as long as the boundary
/// touches without crossing there.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polygon {
    vertices: Vec<GridPoint>,
}

impl Polygon {
    pub fn new(vertices: Vec<GridPoint>) -> Result<Self, PolygonError> {
        if vertices.len() < 3 {
            return Err(PolygonError::TooFewVertices);
        }
        let poly = Polygon { vertices };
        poly.check_simple()?;
        if poly.twice_signed_area() == 0 {
            return Err(PolygonError::ZeroArea);
        }
        Ok(poly)
    }

    /// For callers that produce valid polygons by construction.
    pub(crate) fn new_unchecked(vertices: Vec<GridPoint>) -> Self {
        debug_assert!(vertices.len() >= 3);
        Polygon { vertices }
    }

    pub fn vertices(&self) -> &[GridPoint] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (GridPoint, GridPoint)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Twice the shoelace area. Positive for clockwise traversal on screen.
    pub fn twice_signed_area(&self) -> i128 {
        self.edges().map(|(a, b)| cross(a, b)).sum()
    }

    pub fn area(&self) -> f64 {
        self.twice_signed_area().abs() as f64 / 2.0
    }

    pub fn centroid(&self) -> Point {
        let a2 = self.twice_signed_area() as f64;
        let (mut cx, mut cy) = (0.0, 0.0);
        for (p, q) in self.edges() {
            let c = cross(p, q) as f64;
            cx += (p.x + q.x) as f64 * c;
            cy += (p.y + q.y) as f64 * c;
        }
        Point::new(cx / (3.0 * a2), cy / (3.0 * a2))
    }

    pub fn bounds(&self) -> (GridPoint, GridPoint) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for v in &self.vertices {
            lo.x = lo.x.min(v.x);
            lo.y = lo.y.min(v.y);
            hi.x = hi.x.max(v.x);
            hi.y = hi.y.max(v.y);
        }
        (lo, hi)
    }

    /// Even-odd point-in-polygon test. Points exactly on the boundary may go
    /// either way; see [`Polygon::on_boundary`].
    pub fn contains(&self, p: Point) -> bool {
        let mut inside = false;
        for (a, b) in self.edges() {
            let (a, b) = (a.to_point(), b.to_point());
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub fn on_boundary(&self, p: Point) -> bool {
        self.edges().any(|(a, b)| {
            let (a, b) = (a.to_point(), b.to_point());
            let ab = b - a;
            let t = ((p - a).dot(ab) / ab.dot(ab)).clamp(0.0, 1.0);
            (a + ab * t).distance(p) < 1e-9
        })
    }

    /// Strictly interior: inside and not on an edge.
    pub fn contains_strictly(&self, p: Point) -> bool {
        self.contains(p) && !self.on_boundary(p)
    }

    /// Crossings of the horizontal line `y` with the boundary, sorted.
    /// Consecutive pairs bound the interior intervals.
    pub fn scanline_crossings(&self, y: f64) -> Vec<f64> {
        let mut xs: Vec<f64> = self
            .edges()
            .filter_map(|(a, b)| {
                let (a, b) = (a.to_point(), b.to_point());
                ((a.y > y) != (b.y > y)).then(|| a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y))
            })
            .collect();
        xs.sort_by(f64::total_cmp);
        xs
    }

    fn check_simple(&self) -> Result<(), PolygonError> {
        let v = &self.vertices;
        let n = v.len();
        for i in 0..n {
            if v[i] == v[(i + 1) % n] {
                return Err(PolygonError::RepeatedVertex(i));
            }
        }
        // Adjacent edges may only share their common vertex.
        for i in 0..n {
            let (a, b, c) = (v[i], v[(i + 1) % n], v[(i + 2) % n]);
            let (ab, bc) = (b.sub(a), c.sub(b));
            if cross(ab, bc) == 0 && dot(ab, bc) < 0 {
                return Err(PolygonError::SelfIntersecting(i, (i + 1) % n));
            }
        }
        // Sweep over edges ordered by their left end.
        let mut order: Vec<usize> = (0..n).collect();
        let min_x = |i: usize| v[i].x.min(v[(i + 1) % n].x);
        let max_x = |i: usize| v[i].x.max(v[(i + 1) % n].x);
        order.sort_by_key(|&i| (min_x(i), i));
        for (k, &i) in order.iter().enumerate() {
            for &j in &order[k + 1..] {
                if min_x(j) > max_x(i) {
                    break;
                }
                let (i, j) = (i.min(j), i.max(j));
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                let seg_a = (v[i], v[(i + 1) % n]);
                let seg_b = (v[j], v[(j + 1) % n]);
                if !touch_is_allowed(seg_a, seg_b) {
                    return Err(PolygonError::SelfIntersecting(i, j));
                }
            }
        }
        self.check_vertex_touches()
    }

    /// Where the boundary revisits a vertex, the two passages must not cross.
    fn check_vertex_touches(&self) -> Result<(), PolygonError> {
        let v = &self.vertices;
        let n = v.len();
        let mut by_value: Vec<usize> = (0..n).collect();
        by_value.sort_by_key(|&i| (v[i], i));
        for group in by_value.chunk_by(|&a, &b| v[a] == v[b]) {
            for (gi, &p) in group.iter().enumerate() {
                for &q in &group[gi + 1..] {
                    let center = v[p];
                    let dirs = [
                        (v[(p + n - 1) % n].sub(center), 0u8),
                        (v[(p + 1) % n].sub(center), 0),
                        (v[(q + n - 1) % n].sub(center), 1),
                        (v[(q + 1) % n].sub(center), 1),
                    ];
                    let mut sorted = dirs;
                    sorted.sort_by(|a, b| angle_cmp(a.0, b.0));
                    let alternating = sorted[0].1 != sorted[1].1
                        && sorted[1].1 != sorted[2].1
                        && sorted[2].1 != sorted[3].1;
                    if alternating {
                        return Err(PolygonError::SelfIntersecting(p.min(q), p.max(q)));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Orders direction vectors by angle in `[0, 2π)`.
fn angle_cmp(a: GridPoint, b: GridPoint) -> Ordering {
    let half = |p: GridPoint| p.y < 0 || (p.y == 0 && p.x < 0);
    half(a)
        .cmp(&half(b))
        .then_with(|| 0.cmp(&cross(a, b)))
}

/// Two non-adjacent edges may only meet in a single point that is an
/// endpoint of both.
fn touch_is_allowed(a: (GridPoint, GridPoint), b: (GridPoint, GridPoint)) -> bool {
    let (p1, p2) = a;
    let (q1, q2) = b;
    let o1 = orient(p1, p2, q1);
    let o2 = orient(p1, p2, q2);
    let o3 = orient(q1, q2, p1);
    let o4 = orient(q1, q2, p2);
    let shares_endpoint = p1 == q1 || p1 == q2 || p2 == q1 || p2 == q2;

    if o1 == 0 && o2 == 0 {
        // Collinear: project onto the dominant axis and measure the overlap.
        let key = |p: GridPoint| if p1.x != p2.x { p.x } else { p.y };
        let (alo, ahi) = (key(p1).min(key(p2)), key(p1).max(key(p2)));
        let (blo, bhi) = (key(q1).min(key(q2)), key(q1).max(key(q2)));
        let overlap = ahi.min(bhi) - alo.max(blo);
        return overlap < 0 || (overlap == 0 && shares_endpoint);
    }

    let on_segment = |p: GridPoint, a: GridPoint, b: GridPoint| {
        p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
    };
    let intersects = (o1 != o2 && o3 != o4)
        || (o1 == 0 && on_segment(q1, p1, p2))
        || (o2 == 0 && on_segment(q2, p1, p2))
        || (o3 == 0 && on_segment(p1, q1, q2))
        || (o4 == 0 && on_segment(p2, q1, q2));
    !intersects || shares_endpoint
}
