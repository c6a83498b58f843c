//! JSON front end for `pfspace-core`: input specs, report builders and the
//! `pfspace` command line.

pub mod error;
pub mod report;
pub mod spec;
pub mod text;

use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::Value;

pub use error::CliError;
pub use report::{cmd_analyze, cmd_certify, cmd_classical, cmd_qec, cmd_structure, Settings};
pub use spec::{ChannelSpec, ClassicalSpec, MatrixSpec, ProjectionSpec};

/// Read and parse a JSON spec file.
pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.to_path_buf(), source })
}

/// Indented JSON with a trailing newline. Arrays nested at most two deep in
/// scalars (vectors, `[re, im]` pairs, matrix rows) stay on one line, so a
/// matrix prints one row per line.
pub fn to_json(report: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, report, 0);
    out.push('\n');
    out
}

fn is_scalar(v: &Value) -> bool {
    !v.is_array() && !v.is_object()
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| is_scalar(x) || x.as_array().is_some_and(|y| y.iter().all(is_scalar))),
        Value::Object(_) => false,
        _ => true,
    }
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth + 1);
    let end = "  ".repeat(depth);
    match v {
        Value::Object(m) if !m.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&serde_json::to_string(k).expect("keys serialise"));
                out.push_str(": ");
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&end);
            out.push('}');
        }
        Value::Array(a) if !a.is_empty() && !is_flat(v) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad);
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&end);
            out.push(']');
        }
        Value::Array(a) => {
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(out, x, depth + 1);
            }
            out.push(']');
        }
        other => out.push_str(&serde_json::to_string(other).expect("scalars serialise")),
    }
}
