//! Raster map → [`PolygonSet`].
//!
//! Pipeline: 4-connected flat-color regions (with optional color snapping),
//! outer boundary traced along pixel edges, collinear lattice steps merged.
//! Holes are not represented: a hole is some other region, and painting
//! entries from the largest enclosed area down restores it. That makes
//! [`rasterize_oracle`] an exact inverse for every input image.

mod raster;
mod regions;
mod trace;

use thiserror::Error;

use crate::color::Color;
use crate::dataset_io::{PolygonEntry, PolygonSet};

pub use raster::rasterize_oracle;
pub use regions::{extract_regions, PixelRegion};
pub use trace::{simplify_collinear, trace_boundary};

/// Row-major RGB raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    width: u32,
    height: u32,
    pixels: Vec<Color>,
}

#[derive(Debug, Error)]
pub enum RasterError {
    #[error("image must be at least 1×1, got {0}×{1}")]
    Empty(u32, u32),
    #[error("{got} pixels for a {width}×{height} image")]
    PixelCount { width: u32, height: u32, got: usize },
    #[error(transparent)]
    Decode(#[from] image::ImageError),
}

impl RasterImage {
    pub fn new(width: u32, height: u32, pixels: Vec<Color>) -> Result<Self, RasterError> {
        if width == 0 || height == 0 {
            return Err(RasterError::Empty(width, height));
        }
        if pixels.len() != width as usize * height as usize {
            return Err(RasterError::PixelCount {
                width,
                height,
                got: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Panics on a zero dimension.
    pub fn filled(width: u32, height: u32, color: Color) -> Self {
        Self::new(width, height, vec![color; width as usize * height as usize])
            .expect("non-empty image")
    }

    /// Decodes PPM (P6/P3) or PNG bytes.
    pub fn decode(bytes: &[u8]) -> Result<Self, RasterError> {
        let rgb = image::load_from_memory(bytes)?.to_rgb8();
        let (w, h) = rgb.dimensions();
        let pixels = rgb.pixels().map(|p| Color::new(p[0], p[1], p[2])).collect();
        Self::new(w, h, pixels)
    }

    /// Binary PPM (P6, maxval 255).
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        for c in &self.pixels {
            out.extend_from_slice(&[c.r, c.g, c.b]);
        }
        out
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[Color] {
        &self.pixels
    }

    pub fn get(&self, x: u32, y: u32) -> Color {
        self.pixels[self.index(x, y)]
    }

    pub fn set(&mut self, x: u32, y: u32, color: Color) {
        let i = self.index(x, y);
        self.pixels[i] = color;
    }

    fn index(&self, x: u32, y: u32) -> usize {
        assert!(x < self.width && y < self.height, "pixel ({x},{y}) out of bounds");
        y as usize * self.width as usize + x as usize
    }
}

/// Regions with fewer than `min_area` pixels are dropped. Entries come out
/// in painter's order: largest enclosed area first, ties in region order.
pub fn vectorize(img: &RasterImage, snap_tolerance: u8, min_area: usize) -> PolygonSet {
    let labeled = regions::label(img, snap_tolerance);
    let mut traced: Vec<(i128, PolygonEntry)> = labeled
        .regions
        .iter()
        .enumerate()
        .filter(|(_, r)| r.pixels.len() >= min_area)
        .map(|(id, region)| {
            let start = region.pixels[0];
            let raw = trace::trace_outer(start, |x, y| labeled.label_at(x, y) == Some(id));
            let polygon = simplify_collinear(&raw);
            (
                polygon.twice_signed_area(),
                PolygonEntry {
                    polygon,
                    color: region.color,
                },
            )
        })
        .collect();
    traced.sort_by_key(|&(area, _)| std::cmp::Reverse(area));

    PolygonSet {
        width: img.width,
        height: img.height,
        entries: traced.into_iter().map(|(_, e)| e).collect(),
    }
}
