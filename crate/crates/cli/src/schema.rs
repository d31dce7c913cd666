//! The JSON measure schema.

use std::path::Path;

use zeno_core::{validate, SpectralMeasure};

use crate::{CliError, CliResult};

/// Strictly parses and validates a measure document. Unknown fields are
/// rejected. Syntax errors carry line and column, structural errors the path
/// of the offending field.
pub fn parse_measure_spec(document: &str) -> CliResult<SpectralMeasure> {
    let value: serde_json::Value = serde_json::from_str(document)
        .map_err(|e| CliError::Schema(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let raw: SpectralMeasure = serde_path_to_error::deserialize(&value).map_err(|e| {
        let mut path = e.path().to_string();
        let inner = e.into_inner().to_string();
        // tagged variants buffer their content and lose the path
        if path == "." {
            if let Some(key) = unknown_field(&inner) {
                path = locate_key(&value, key, ".").unwrap_or(path);
            }
        }
        if path == "." {
            CliError::Schema(inner)
        } else {
            CliError::Schema(format!("at {path}: {inner}"))
        }
    })?;
    Ok(validate(&raw)?)
}

fn unknown_field(msg: &str) -> Option<&str> {
    let rest = msg.strip_prefix("unknown field `")?;
    rest.split('`').next()
}

/// Path of the first object holding `key`, depth first.
fn locate_key(value: &serde_json::Value, key: &str, here: &str) -> Option<String> {
    let join = |seg: String| {
        if here == "." {
            seg
        } else {
            format!("{here}{seg}")
        }
    };
    match value {
        serde_json::Value::Object(map) => {
            if map.contains_key(key) {
                return Some(here.to_string());
            }
            map.iter().find_map(|(k, v)| {
                let sub = if here == "." {
                    k.clone()
                } else {
                    format!("{here}.{k}")
                };
                locate_key(v, key, &sub)
            })
        }
        serde_json::Value::Array(items) => items
            .iter()
            .enumerate()
            .find_map(|(i, v)| locate_key(v, key, &join(format!("[{i}]")))),
        _ => None,
    }
}

pub fn read_measure_file(path: &Path) -> CliResult<SpectralMeasure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Schema(format!("cannot read {}: {e}", path.display())))?;
    parse_measure_spec(&text)
}

/// Inverse of [`parse_measure_spec`] for validated measures.
pub fn emit_measure(measure: &SpectralMeasure) -> String {
    serde_json::to_string_pretty(measure).expect("measures always serialize")
}
