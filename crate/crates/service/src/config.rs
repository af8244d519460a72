//! Flat `key = value` configuration: dataset paths, listen port and
//! overrides for every style and arc parameter.
//!
//! ```text
//! polygons = "campus.poly"
//! port = 9000
//! s0 = 0.2
//! bulge = 0.25
//! ```

use std::path::{Path, PathBuf};

use relocviz_core::arc_geometry::ArcParams;
use relocviz_core::styling::StyleParams;
use serde::Deserialize;
use thiserror::Error;
use toml::{Table, Value};

pub const DEFAULT_PORT: u16 = 8080;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config {path}: {message}")]
    Syntax { path: PathBuf, message: String },
    #[error("expected `key=value`, got `{0}`")]
    Assignment(String),
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("config key `{key}`: {message}")]
    Value { key: String, message: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ServiceKeys {
    polygons: Option<PathBuf>,
    colors: Option<PathBuf>,
    relocations: Option<PathBuf>,
    port: Option<u16>,
    static_dir: Option<PathBuf>,
}

const SERVICE_KEYS: [&str; 5] = ["polygons", "colors", "relocations", "port", "static_dir"];
const ARC_KEYS: [&str; 5] = ["bulge", "exponent", "samples", "arrow_length", "arrow_half_angle"];
const STYLE_KEYS: [&str; 13] = [
    "s0",
    "s3",
    "building_hue",
    "building_lightness",
    "arc_hue",
    "arc_lightness",
    "context_saturation_cap",
    "context_lightness_min",
    "context_lightness_max",
    "w_min",
    "w_max",
    "thickness_gain",
    "histogram_height",
];

/// Merged settings; command-line flags are applied on top by the caller.
#[derive(Debug, Clone, Default)]
pub struct ServiceConfig {
    pub polygons: Option<PathBuf>,
    pub colors: Option<PathBuf>,
    pub relocations: Option<PathBuf>,
    pub port: Option<u16>,
    pub static_dir: Option<PathBuf>,
    pub style: StyleParams,
    pub arc: ArcParams,
}

impl ServiceConfig {
    /// Reads the optional config file, then applies `key=value` overrides
    /// in order.
    pub fn load(file: Option<&Path>, sets: &[String]) -> Result<Self, ConfigError> {
        let mut table = Table::new();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
                path: path.to_path_buf(),
                source,
            })?;
            let parsed: Table = text.parse().map_err(|e: toml::de::Error| ConfigError::Syntax {
                path: path.to_path_buf(),
                message: e.message().to_string(),
            })?;
            table.extend(parsed);
        }
        for set in sets {
            let (key, value) = set
                .split_once('=')
                .ok_or_else(|| ConfigError::Assignment(set.clone()))?;
            table.insert(key.trim().to_string(), parse_value(key.trim(), value.trim())?);
        }
        Self::from_table(table)
    }

    fn from_table(table: Table) -> Result<Self, ConfigError> {
        let mut service = Table::new();
        let mut style = Table::new();
        let mut arc = Table::new();
        for (key, value) in table {
            let k = key.as_str();
            if SERVICE_KEYS.contains(&k) {
                service.insert(key, value);
            } else if STYLE_KEYS.contains(&k) {
                style.insert(key.clone(), as_float(&key, value)?);
            } else if ARC_KEYS.contains(&k) {
                let value = if k == "samples" { value } else { as_float(&key, value)? };
                arc.insert(key, value);
            } else {
                return Err(ConfigError::UnknownKey(key));
            }
        }
        let service: ServiceKeys = deserialize(service)?;
        let style: StyleParams = deserialize(style)?;
        let arc: ArcParams = deserialize(arc)?;
        style.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        arc.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(Self {
            polygons: service.polygons,
            colors: service.colors,
            relocations: service.relocations,
            port: service.port,
            static_dir: service.static_dir,
            style,
            arc,
        })
    }
}

/// Bare words are taken as strings so paths need no quoting on the command
/// line.
fn parse_value(key: &str, raw: &str) -> Result<Value, ConfigError> {
    match format!("v = {raw}").parse::<Table>() {
        Ok(mut t) => Ok(t.remove("v").expect("key present")),
        Err(_) if !raw.is_empty() => Ok(Value::String(raw.to_string())),
        Err(e) => Err(ConfigError::Value {
            key: key.to_string(),
            message: e.message().to_string(),
        }),
    }
}

fn as_float(key: &str, value: Value) -> Result<Value, ConfigError> {
    match value {
        Value::Integer(i) => Ok(Value::Float(i as f64)),
        Value::Float(_) => Ok(value),
        other => Err(ConfigError::Value {
            key: key.to_string(),
            message: format!("expected a number, got {other}"),
        }),
    }
}

fn deserialize<T: for<'de> Deserialize<'de>>(table: Table) -> Result<T, ConfigError> {
    Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| ConfigError::Invalid(e.message().to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn defaults_without_input() {
        let cfg = ServiceConfig::load(None, &[]).unwrap();
        assert_eq!(cfg.style, StyleParams::default());
        assert_eq!(cfg.arc, ArcParams::default());
        assert_eq!(cfg.port, None);
    }

    #[test]
    fn file_then_flags() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "# overrides\ns0 = 0.2\nsamples = 32\nport = 9000\npolygons = \"a.poly\"").unwrap();
        let sets = ["s0=0.25".to_string(), "w_max = 10".to_string(), "colors=b.colors".to_string()];
        let cfg = ServiceConfig::load(Some(file.path()), &sets).unwrap();
        assert_eq!(cfg.style.s0, 0.25);
        assert_eq!(cfg.style.w_max, 10.0);
        assert_eq!(cfg.arc.samples, 32);
        assert_eq!(cfg.port, Some(9000));
        assert_eq!(cfg.polygons, Some(PathBuf::from("a.poly")));
        assert_eq!(cfg.colors, Some(PathBuf::from("b.colors")));
    }

    #[test]
    fn rejects_unknown_and_invalid() {
        let err = ServiceConfig::load(None, &["colour=1".into()]).unwrap_err();
        assert_eq!(err.to_string(), "unknown config key `colour`");
        assert!(ServiceConfig::load(None, &["s0".into()]).is_err());
        assert!(ServiceConfig::load(None, &["s0=0.95".into()]).is_err());
        assert!(ServiceConfig::load(None, &["samples=4".into()]).is_err());
        assert!(ServiceConfig::load(None, &["bulge=wide".into()]).is_err());
        assert!(ServiceConfig::load(Some(Path::new("/nonexistent/cfg")), &[]).is_err());
    }
}
