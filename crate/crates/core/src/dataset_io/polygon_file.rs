use std::fmt::Write as _;

use crate::color::Color;
use crate::geom::{GridPoint, Polygon};

use super::{content_lines, LineError, ParseError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonEntry {
    pub polygon: Polygon,
    pub color: Color,
}

/// The vectorized map: filled polygons in paint order on a pixel canvas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonSet {
    pub width: u32,
    pub height: u32,
    pub entries: Vec<PolygonEntry>,
}

impl PolygonSet {
    pub fn new(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            entries: Vec::new(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("canvas {} {}\n", self.width, self.height);
        for entry in &self.entries {
            write!(out, "{}", entry.color).unwrap();
            for v in entry.polygon.vertices() {
                write!(out, " {},{}", v.x, v.y).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

pub fn parse_polygon_file(text: &str) -> Result<PolygonSet, ParseError> {
    let mut errors = Vec::new();
    let mut lines = content_lines(text);

    let canvas = match lines.next() {
        None => {
            errors.push(LineError::new(1, "missing `canvas <width> <height>` header"));
            None
        }
        Some((no, line)) => match parse_header(line) {
            Ok(dims) => Some(dims),
            Err(msg) => {
                errors.push(LineError::new(no, msg));
                None
            }
        },
    };

    let mut entries = Vec::new();
    for (no, line) in lines {
        match parse_entry(line, canvas) {
            Ok(entry) => entries.push(entry),
            Err(msg) => errors.push(LineError::new(no, msg)),
        }
    }

    ParseError::from_errors(errors)?;
    let (width, height) = canvas.expect("header error was reported");
    Ok(PolygonSet {
        width,
        height,
        entries,
    })
}

fn parse_header(line: &str) -> Result<(u32, u32), String> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    let bad = || format!("invalid header `{line}`, expected `canvas <width> <height>`");
    if tokens.len() != 3 || tokens[0] != "canvas" {
        return Err(bad());
    }
    let w: u32 = tokens[1].parse().map_err(|_| bad())?;
    let h: u32 = tokens[2].parse().map_err(|_| bad())?;
    if w == 0 || h == 0 {
        return Err(format!("canvas must be at least 1×1, got {w}×{h}"));
    }
    Ok((w, h))
}

fn parse_entry(line: &str, canvas: Option<(u32, u32)>) -> Result<PolygonEntry, String> {
    let mut tokens = line.split_whitespace();
    let color: Color = tokens
        .next()
        .expect("content lines are non-empty")
        .parse()
        .map_err(|e| format!("{e}"))?;

    let mut vertices = Vec::new();
    for token in tokens {
        let coord = token
            .split_once(',')
            .and_then(|(x, y)| Some(GridPoint::new(x.parse().ok()?, y.parse().ok()?)))
            .ok_or_else(|| format!("invalid coordinate `{token}`"))?;
        vertices.push(coord);
    }

    if let Some((w, h)) = canvas {
        if let Some(v) = vertices
            .iter()
            .find(|v| v.x < 0 || v.y < 0 || v.x > i64::from(w) || v.y > i64::from(h))
        {
            return Err(format!("vertex {},{} outside canvas {w}×{h}", v.x, v.y));
        }
    }

    let polygon = Polygon::new(vertices).map_err(|e| e.to_string())?;
    Ok(PolygonEntry { polygon, color })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_square() {
        let set = parse_polygon_file("canvas 32 32\nFF0000 0,0 4,0 4,4 0,4").unwrap();
        assert_eq!((set.width, set.height), (32, 32));
        assert_eq!(set.entries.len(), 1);
        assert_eq!(set.entries[0].color, Color::new(255, 0, 0));
        assert_eq!(set.entries[0].polygon.area(), 16.0);
    }

    #[test]
    fn too_few_vertices_names_line() {
        let err = parse_polygon_file("canvas 32 32\nFF0000 0,0 4,0").unwrap_err();
        assert_eq!(err.to_string(), "polygon needs ≥3 vertices (line 2)");
    }

    #[test]
    fn comments_skipped_order_kept() {
        let text = "canvas 8 8\n# map\n00FF00 0,0 8,0 8,8 0,8\n0000FF 2,2 6,2 6,6 2,6";
        let set = parse_polygon_file(text).unwrap();
        let colors: Vec<String> = set.entries.iter().map(|e| e.color.to_string()).collect();
        assert_eq!(colors, ["00FF00", "0000FF"]);
    }

    #[test]
    fn rejects_bad_lines_with_numbers() {
        let text = "canvas 8 8\nXX0000 0,0 1,0 1,1\n\nFF0000 0,0 a,0 1,1\nFF0000 0,0 9,0 9,1";
        let err = parse_polygon_file(text).unwrap_err();
        let lines: Vec<usize> = err.errors.iter().map(|e| e.line).collect();
        assert_eq!(lines, [2, 4, 5]);
        assert!(err.errors[0].message.contains("malformed hex color"));
        assert!(err.errors[1].message.contains("invalid coordinate `a,0`"));
        assert!(err.errors[2].message.contains("outside canvas"));
    }

    #[test]
    fn header_errors() {
        assert_eq!(parse_polygon_file("").unwrap_err().errors[0].line, 1);
        let err = parse_polygon_file("# c\ncanvas 8\n").unwrap_err();
        assert_eq!(err.errors[0].line, 2);
        assert!(parse_polygon_file("canvas 0 4").is_err());
        assert!(parse_polygon_file("FF0000 0,0 1,0 1,1").is_err());
    }

    #[test]
    fn rejects_self_intersection() {
        let err = parse_polygon_file("canvas 8 8\nFF0000 0,0 4,4 4,0 0,4").unwrap_err();
        assert!(err.errors[0].message.contains("self-intersects"));
    }

    #[test]
    fn text_round_trip() {
        let text = "canvas 8 8\n00FF00 0,0 8,0 8,8 0,8\n0000FF 2,2 6,2 6,6 2,6\n";
        let set = parse_polygon_file(text).unwrap();
        assert_eq!(set.to_text(), text);
    }
}
