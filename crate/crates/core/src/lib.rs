//! Engine for origin/destination flow maps of periodic relocations between
//! the buildings of a 2D map.
//!
//! Data flows one way: a raster map is [`vectorizer::vectorize`]d once into
//! a polygon file; polygons, a color-to-building map and per-period
//! relocation matrices are joined by [`dataset_io::load_dataset`]; each
//! analyst view is compiled by [`scene::compile_scene`] into a layered,
//! renderer-agnostic [`scene::Scene`].

pub mod arc_geometry;
pub mod color;
pub mod dataset_io;
pub mod engine;
pub mod geom;
pub mod scene;
pub mod styling;
pub mod vectorizer;

pub use color::{Color, Hsl};
pub use geom::{GridPoint, Point, Polygon};
