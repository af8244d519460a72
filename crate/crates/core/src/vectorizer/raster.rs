use crate::color::Color;
use crate::dataset_io::PolygonSet;

use super::RasterImage;

/// Paints entries in list order onto a black canvas. Pixel `(x, y)` takes a
/// polygon's color iff its center `(x + 0.5, y + 0.5)` is inside (even-odd).
pub fn rasterize_oracle(polys: &PolygonSet) -> RasterImage {
    let mut img = RasterImage::filled(polys.width, polys.height, Color::BLACK);
    let (w, h) = (i64::from(polys.width), i64::from(polys.height));
    for entry in &polys.entries {
        let (lo, hi) = entry.polygon.bounds();
        for y in lo.y.max(0)..hi.y.min(h) {
            let xs = entry.polygon.scanline_crossings(y as f64 + 0.5);
            for span in xs.chunks_exact(2) {
                // Centers c with span[0] <= c < span[1].
                let first = (span[0] - 0.5).ceil().max(0.0) as i64;
                let last = ((span[1] - 0.5).ceil() as i64).min(w);
                for x in first..last {
                    img.set(x as u32, y as u32, entry.color);
                }
            }
        }
    }
    img
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset_io::{parse_polygon_file, PolygonEntry};
    use crate::geom::{GridPoint, Polygon};

    #[test]
    fn empty_set_is_black() {
        let img = rasterize_oracle(&PolygonSet::new(2, 2));
        assert_eq!(img, RasterImage::filled(2, 2, Color::BLACK));
    }

    #[test]
    fn single_cell() {
        let red = Color::new(255, 0, 0);
        let mut set = PolygonSet::new(3, 3);
        set.entries.push(PolygonEntry {
            polygon: Polygon::new(vec![
                GridPoint::new(1, 1),
                GridPoint::new(2, 1),
                GridPoint::new(2, 2),
                GridPoint::new(1, 2),
            ])
            .unwrap(),
            color: red,
        });
        let img = rasterize_oracle(&set);
        for y in 0..3 {
            for x in 0..3 {
                let want = if (x, y) == (1, 1) { red } else { Color::BLACK };
                assert_eq!(img.get(x, y), want, "({x},{y})");
            }
        }
    }

    #[test]
    fn later_entries_paint_over_earlier() {
        let set = parse_polygon_file("canvas 4 4\n00FF00 0,0 4,0 4,4 0,4\n0000FF 1,1 3,1 3,3 1,3")
            .unwrap();
        let img = rasterize_oracle(&set);
        assert_eq!(img.get(0, 0), Color::new(0, 255, 0));
        assert_eq!(img.get(2, 2), Color::new(0, 0, 255));
        assert_eq!(img.get(3, 2), Color::new(0, 255, 0));
    }

    #[test]
    fn slanted_edges_use_centers() {
        // Hypotenuse x + y = 3 passes through the centers of (1,1), (2,0)
        // and (0,2); a center on a right-hand boundary stays unpainted.
        let set = parse_polygon_file("canvas 3 3\nFFFFFF 0,0 3,0 0,3").unwrap();
        let img = rasterize_oracle(&set);
        let white = Color::new(255, 255, 255);
        let painted: Vec<(u32, u32)> = (0..3)
            .flat_map(|y| (0..3).map(move |x| (x, y)))
            .filter(|&(x, y)| img.get(x, y) == white)
            .collect();
        assert_eq!(painted, [(0, 0), (1, 0), (0, 1)]);
    }
}
