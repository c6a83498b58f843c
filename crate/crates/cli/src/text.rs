//! Plain-text rendering of a JSON report.

use std::fmt::Write;

use serde_json::Value;

/// `[re, im]` rows, i.e. a complex matrix.
fn is_complex_matrix(v: &Value) -> bool {
    let Some(rows) = v.as_array() else { return false };
    !rows.is_empty()
        && rows.iter().all(|r| {
            r.as_array().is_some_and(|r| {
                !r.is_empty() && r.iter().all(|e| e.as_array().is_some_and(|p| p.len() == 2 && p.iter().all(Value::is_number)))
            })
        })
}

fn complex(p: &Value) -> String {
    let re = p[0].as_f64().unwrap_or(f64::NAN);
    let im = p[1].as_f64().unwrap_or(f64::NAN);
    if im == 0.0 {
        format!("{re}")
    } else if im < 0.0 {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(if *b { "yes".into() } else { "no".into() }),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
            Some(format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn render_into(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    if let Some(s) = scalar(v) {
        let _ = writeln!(out, "{pad}{key}: {s}");
        return;
    }
    let _ = writeln!(out, "{pad}{key}:");
    if is_complex_matrix(v) {
        for row in v.as_array().into_iter().flatten() {
            let cells: Vec<String> = row.as_array().into_iter().flatten().map(complex).collect();
            let _ = writeln!(out, "{pad}  [{}]", cells.join(", "));
        }
        return;
    }
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                render_into(out, k, x, depth + 1);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                render_into(out, &format!("[{i}]"), x, depth + 1);
            }
        }
        _ => {}
    }
}

/// One `key: value` line per scalar, nested sections indented, matrices
/// printed row by row.
pub fn render(report: &Value) -> String {
    let mut out = String::new();
    match report {
        Value::Object(m) => {
            for (k, v) in m {
                render_into(&mut out, k, v, 0);
            }
        }
        other => render_into(&mut out, "report", other, 0),
    }
    out
}
