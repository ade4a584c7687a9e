use std::fs;
use std::io::Write;
use std::path::Path;

use abspec_core::format::round_sig12;
use serde::Serialize;
use serde_json::Value;

use crate::{CliError, Format};

/// Rounds every float in a JSON tree to 12 significant digits.
fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64().map(round_sig12).and_then(serde_json::Number::from_f64) {
                *n = x;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// One JSON line per record.
pub fn json_lines<T: Serialize>(records: &[T]) -> Result<String, CliError> {
    let mut out = String::new();
    for r in records {
        let mut v = serde_json::to_value(r).map_err(|e| CliError::Internal(e.to_string()))?;
        round_floats(&mut v);
        out.push_str(&serde_json::to_string(&v).map_err(|e| CliError::Internal(e.to_string()))?);
        out.push('\n');
    }
    Ok(out)
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Writes to `--out` or stdout.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write_file(p, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

/// Picks the rendering for the requested format.
pub fn render(
    format: Format,
    json: impl FnOnce() -> Result<String, CliError>,
    csv: impl FnOnce() -> String,
    svg: impl FnOnce() -> String,
) -> Result<String, CliError> {
    match format {
        Format::Json => json(),
        Format::Csv => Ok(csv()),
        Format::Svg => Ok(svg()),
    }
}
