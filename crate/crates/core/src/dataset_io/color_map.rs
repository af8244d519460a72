use std::collections::HashMap;

use crate::color::Color;

use super::{content_lines, LineError, ParseError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorEntry {
    pub color: Color,
    pub name: String,
}

/// Fill color to building name. Colors not listed are map context.
#[derive(Debug, Clone, Default)]
pub struct ColorMap {
    entries: Vec<ColorEntry>,
    by_color: HashMap<Color, usize>,
}

impl PartialEq for ColorMap {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Eq for ColorMap {}

impl ColorMap {
    pub fn entries(&self) -> &[ColorEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn name_of(&self, color: Color) -> Option<&str> {
        self.by_color
            .get(&color)
            .map(|&i| self.entries[i].name.as_str())
    }

    pub fn color_of(&self, name: &str) -> Option<Color> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .map(|e| e.color)
    }

    pub fn to_text(&self) -> String {
        self.entries
            .iter()
            .map(|e| format!("{} {}\n", e.color, e.name))
            .collect()
    }

    /// Programmatic construction with the same checks as the parser.
    pub fn from_entries(entries: Vec<ColorEntry>) -> Result<Self, String> {
        let mut map = ColorMap::default();
        for entry in entries {
            map.insert(entry)?;
        }
        Ok(map)
    }

    fn insert(&mut self, entry: ColorEntry) -> Result<(), String> {
        if entry.name.is_empty() || entry.name.chars().any(char::is_whitespace) {
            return Err(format!("invalid building name `{}`", entry.name));
        }
        if self.by_color.contains_key(&entry.color) {
            return Err(format!("duplicate color {}", entry.color));
        }
        if self.entries.iter().any(|e| e.name == entry.name) {
            return Err(format!("duplicate name {}", entry.name));
        }
        self.by_color.insert(entry.color, self.entries.len());
        self.entries.push(entry);
        Ok(())
    }
}

pub fn parse_color_map(text: &str) -> Result<ColorMap, ParseError> {
    let mut map = ColorMap::default();
    let mut errors = Vec::new();
    for (no, line) in content_lines(text) {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let result = match tokens.as_slice() {
            [hex, name] => hex
                .parse::<Color>()
                .map_err(|e| e.to_string())
                .and_then(|color| {
                    map.insert(ColorEntry {
                        color,
                        name: name.to_string(),
                    })
                }),
            _ => Err(format!("expected `<RRGGBB> <name>`, got `{line}`")),
        };
        if let Err(msg) = result {
            errors.push(LineError::new(no, msg));
        }
    }
    ParseError::from_errors(errors)?;
    Ok(map)
}
