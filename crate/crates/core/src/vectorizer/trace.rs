use std::collections::HashSet;

use crate::geom::{GridPoint, Polygon};

use super::PixelRegion;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Heading {
    East,
    South,
    West,
    North,
}

impl Heading {
    fn step(self) -> (i64, i64) {
        match self {
            Heading::East => (1, 0),
            Heading::South => (0, 1),
            Heading::West => (-1, 0),
            Heading::North => (0, -1),
        }
    }

    fn right(self) -> Heading {
        match self {
            Heading::East => Heading::South,
            Heading::South => Heading::West,
            Heading::West => Heading::North,
            Heading::North => Heading::East,
        }
    }

    fn left(self) -> Heading {
        self.right().right().right()
    }

    /// Pixels ahead of lattice corner `(x, y)`: (right of travel, left of travel).
    fn ahead(self, x: i64, y: i64) -> ((i64, i64), (i64, i64)) {
        match self {
            Heading::East => ((x, y), (x, y - 1)),
            Heading::South => ((x - 1, y), (x, y)),
            Heading::West => ((x - 1, y - 1), (x - 1, y)),
            Heading::North => ((x, y - 1), (x - 1, y - 1)),
        }
    }
}

/// Outer boundary of a 4-connected region along pixel edges, one vertex per
/// lattice step, clockwise on screen from the top-left corner of the
/// region's first pixel. Run [`simplify_collinear`] for the minimal polygon.
///
/// Panics on an empty region.
pub fn trace_boundary(region: &PixelRegion) -> Polygon {
    let start = *region.pixels.first().expect("region is non-empty");
    let members: HashSet<(i64, i64)> = region
        .pixels
        .iter()
        .map(|&(x, y)| (i64::from(x), i64::from(y)))
        .collect();
    trace_outer(start, |x, y| members.contains(&(x, y)))
}

/// Walks with the region on the right. Where two region pixels meet only
/// at a corner, the walk turns right and stays with the current pixel, so
/// diagonal neighbours are never joined.
pub(crate) fn trace_outer(start: (u32, u32), inside: impl Fn(i64, i64) -> bool) -> Polygon {
    let origin = GridPoint::new(i64::from(start.0), i64::from(start.1));
    let mut vertices = vec![origin];
    let mut at = origin;
    let mut heading = Heading::East;
    loop {
        let (dx, dy) = heading.step();
        at = GridPoint::new(at.x + dx, at.y + dy);
        if at == origin {
            break;
        }
        vertices.push(at);
        let (ahead_right, ahead_left) = heading.ahead(at.x, at.y);
        heading = if !inside(ahead_right.0, ahead_right.1) {
            heading.right()
        } else if inside(ahead_left.0, ahead_left.1) {
            heading.left()
        } else {
            heading
        };
    }
    Polygon::new_unchecked(vertices)
}

/// Drops every vertex that sits on the straight segment between its
/// neighbours.
pub fn simplify_collinear(poly: &Polygon) -> Polygon {
    let v = poly.vertices();
    let n = v.len();
    let kept: Vec<GridPoint> = (0..n)
        .filter(|&i| {
            let (a, b, c) = (v[(i + n - 1) % n], v[i], v[(i + 1) % n]);
            let (ab, bc) = ((b.x - a.x, b.y - a.y), (c.x - b.x, c.y - b.y));
            let cross = i128::from(ab.0) * i128::from(bc.1) - i128::from(ab.1) * i128::from(bc.0);
            let dot = i128::from(ab.0) * i128::from(bc.0) + i128::from(ab.1) * i128::from(bc.1);
            !(cross == 0 && dot > 0)
        })
        .map(|i| v[i])
        .collect();
    Polygon::new_unchecked(kept)
}
