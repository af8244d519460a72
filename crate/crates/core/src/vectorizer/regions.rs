use std::collections::HashSet;

use crate::color::Color;

use super::RasterImage;

/// A maximal 4-connected set of same-color pixels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PixelRegion {
    pub color: Color,
    /// Pixel coordinates in raster order (top-most, then left-most first).
    pub pixels: Vec<(u32, u32)>,
}

pub(crate) struct Labeled {
    width: u32,
    height: u32,
    labels: Vec<usize>,
    pub(crate) regions: Vec<PixelRegion>,
}

impl Labeled {
    pub(crate) fn label_at(&self, x: i64, y: i64) -> Option<usize> {
        if x < 0 || y < 0 || x >= i64::from(self.width) || y >= i64::from(self.height) {
            return None;
        }
        Some(self.labels[y as usize * self.width as usize + x as usize])
    }
}

/// Partitions the image into regions ordered by their first pixel in
/// raster order.
///
/// With `snap_tolerance > 0`, each pixel is first snapped to the nearest
/// color (largest per-channel difference) among the colors already opened
/// during a top-left to bottom-right scan, if one is within tolerance.
pub fn extract_regions(img: &RasterImage, snap_tolerance: u8) -> Vec<PixelRegion> {
    label(img, snap_tolerance).regions
}

pub(crate) fn label(img: &RasterImage, snap_tolerance: u8) -> Labeled {
    let colors = snap_colors(img.pixels(), snap_tolerance);
    let (w, h) = (img.width() as usize, img.height() as usize);
    let mut labels = vec![usize::MAX; w * h];
    let mut regions = Vec::new();
    let mut stack = Vec::new();

    for seed in 0..w * h {
        if labels[seed] != usize::MAX {
            continue;
        }
        let id = regions.len();
        let color = colors[seed];
        let mut pixels = Vec::new();
        labels[seed] = id;
        stack.push(seed);
        while let Some(i) = stack.pop() {
            pixels.push(i);
            let (x, y) = (i % w, i / w);
            let mut visit = |j: usize| {
                if labels[j] == usize::MAX && colors[j] == color {
                    labels[j] = id;
                    stack.push(j);
                }
            };
            if x > 0 {
                visit(i - 1);
            }
            if x + 1 < w {
                visit(i + 1);
            }
            if y > 0 {
                visit(i - w);
            }
            if y + 1 < h {
                visit(i + w);
            }
        }
        pixels.sort_unstable();
        regions.push(PixelRegion {
            color,
            pixels: pixels
                .into_iter()
                .map(|i| ((i % w) as u32, (i / w) as u32))
                .collect(),
        });
    }

    Labeled {
        width: img.width(),
        height: img.height(),
        labels,
        regions,
    }
}

fn snap_colors(pixels: &[Color], tolerance: u8) -> Vec<Color> {
    if tolerance == 0 {
        return pixels.to_vec();
    }
    let mut palette: Vec<Color> = Vec::new();
    let mut known: HashSet<Color> = HashSet::new();
    pixels
        .iter()
        .map(|&c| {
            if known.contains(&c) {
                return c;
            }
            let nearest = palette
                .iter()
                .map(|&p| (c.channel_distance(p), p))
                .filter(|&(d, _)| d <= tolerance)
                .min_by_key(|&(d, _)| d);
            match nearest {
                Some((_, p)) => p,
                None => {
                    palette.push(c);
                    known.insert(c);
                    c
                }
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const RED: Color = Color::new(255, 0, 0);
    const BLUE: Color = Color::new(0, 0, 255);

    #[test]
    fn uniform_image_is_one_region() {
        let regions = extract_regions(&RasterImage::filled(4, 4, RED), 0);
        assert_eq!(regions.len(), 1);
        assert_eq!(regions[0].pixels.len(), 16);
    }

    #[test]
    fn two_halves() {
        let mut img = RasterImage::filled(4, 4, RED);
        for y in 0..4 {
            for x in 2..4 {
                img.set(x, y, BLUE);
            }
        }
        let regions = extract_regions(&img, 0);
        assert_eq!(regions.len(), 2);
        assert_eq!((regions[0].color, regions[0].pixels.len()), (RED, 8));
        assert_eq!((regions[1].color, regions[1].pixels.len()), (BLUE, 8));
        assert_eq!(regions[1].pixels[0], (2, 0));
    }

    #[test]
    fn snapping_merges_near_colors() {
        let mut img = RasterImage::filled(3, 3, RED);
        img.set(1, 1, Color::new(254, 0, 0));
        assert_eq!(extract_regions(&img, 2).len(), 1);
        assert_eq!(extract_regions(&img, 2)[0].color, RED);
        assert_eq!(extract_regions(&img, 0).len(), 2);
    }

    #[test]
    fn snapping_prefers_nearest_opened_color() {
        // 100 opens, 111 is out of reach and opens too, 107 is within 10 of
        // both and nearer 111.
        let px = |v: u8| Color::new(v, 0, 0);
        let img = RasterImage::new(3, 1, vec![px(100), px(111), px(107)]).unwrap();
        let regions = extract_regions(&img, 10);
        assert_eq!(regions.len(), 2);
        assert_eq!(regions[0].pixels, [(0, 0)]);
        assert_eq!(regions[1].color, px(111));
        assert_eq!(regions[1].pixels, [(1, 0), (2, 0)]);
    }

    #[test]
    fn diagonal_pixels_are_separate_regions() {
        let mut img = RasterImage::filled(2, 2, RED);
        img.set(1, 0, BLUE);
        img.set(0, 1, BLUE);
        let regions = extract_regions(&img, 0);
        assert_eq!(regions.len(), 4);
    }
}
