//! JSON helpers and the plain-text table view of a report.

use std::collections::BTreeSet;
use std::fmt::Write;

use dirac_core::linalg::{fmt_q, SparseVec, Q};
use dirac_core::repmod::RRootData;
use serde_json::{json, Map, Value};

pub fn qj(x: &Q) -> Value {
    Value::String(fmt_q(x))
}

pub fn vj(v: &[Q]) -> Value {
    Value::Array(v.iter().map(qj).collect())
}

pub fn nj(n: impl ToString) -> Value {
    Value::String(n.to_string())
}

pub fn sparse_j(v: &SparseVec) -> Value {
    Value::Array(v.iter().map(|(i, x)| json!([nj(i), qj(x)])).collect())
}

/// Simple roots of r, read off its positive roots in their stored order.
fn r_simple_roots(rd: &RRootData) -> Vec<&Vec<Q>> {
    let pos: BTreeSet<&Vec<Q>> = rd.positive_roots.iter().collect();
    rd.positive_roots
        .iter()
        .filter(|b| {
            !rd.positive_roots.iter().any(|g| {
                let d: Vec<Q> = b.iter().zip(g.iter()).map(|(x, y)| x - y).collect();
                pos.contains(&d)
            })
        })
        .collect()
}

/// Coordinates of `mu` (values on `h_r`) along the fundamental weights of
/// the semisimple part of r: `2(μ,β)/(β,β)` over simple roots `β`.
pub fn r_fundamental(rd: &RRootData, mu: &[Q]) -> Vec<Q> {
    r_simple_roots(rd)
        .into_iter()
        .map(|b| Q::from_integer(2.into()) * rd.inner(mu, b) / rd.inner(b, b))
        .collect()
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => {
            let parts: Vec<String> = a.iter().map(scalar_text).collect();
            format!("[{}]", parts.join(", "))
        }
        Value::Null => "-".into(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        Value::Object(m) => {
            let parts: Vec<String> = m
                .iter()
                .map(|(k, v)| format!("{k}={}", scalar_text(v)))
                .collect();
            format!("{{{}}}", parts.join(", "))
        }
    }
}

fn rows_table(out: &mut String, indent: &str, rows: &[Value]) {
    let cols: Vec<String> = match &rows[0] {
        Value::Object(m) => m.keys().cloned().collect(),
        _ => unreachable!(),
    };
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| cols.iter().map(|c| scalar_text(&r[c])).collect())
        .collect();
    let widths: Vec<usize> = cols
        .iter()
        .enumerate()
        .map(|(j, c)| {
            cells
                .iter()
                .map(|r| r[j].chars().count())
                .chain([c.len()])
                .max()
                .unwrap()
        })
        .collect();
    let line = |vals: &[String]| {
        let padded: Vec<String> = vals
            .iter()
            .zip(&widths)
            .map(|(v, w)| format!("{v:<w$}"))
            .collect();
        format!("{indent}{}", padded.join("  ").trim_end())
    };
    let _ = writeln!(out, "{}", line(&cols));
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    let _ = writeln!(out, "{}", line(&rule));
    for r in &cells {
        let _ = writeln!(out, "{}", line(r));
    }
}

fn section(out: &mut String, indent: &str, m: &Map<String, Value>) {
    for (k, v) in m {
        match v {
            Value::Object(inner) => {
                let _ = writeln!(out, "{indent}{k}:");
                section(out, &format!("{indent}  "), inner);
            }
            Value::Array(a) if !a.is_empty() && a.iter().all(Value::is_object) => {
                let _ = writeln!(out, "{indent}{k}:");
                rows_table(out, &format!("{indent}  "), a);
            }
            _ => {
                let _ = writeln!(out, "{indent}{k}: {}", scalar_text(v));
            }
        }
    }
}

/// Plain-text rendering; the layout is a pure function of the report.
pub fn to_table(report: &Value) -> String {
    let mut out = String::new();
    let get = |k: &str| report.get(k).map(scalar_text).unwrap_or_default();
    let _ = writeln!(out, "check   {}", get("check"));
    let _ = writeln!(out, "status  {}", get("status"));
    let _ = writeln!(
        out,
        "lambda  {} (fundamental weights)",
        get("lambda_fundamental")
    );
    for part in ["pair", "witness"] {
        if let Some(Value::Object(m)) = report.get(part) {
            let _ = writeln!(out, "\n[{part}]");
            section(&mut out, "", m);
        }
    }
    out
}

pub fn to_json_text(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}
