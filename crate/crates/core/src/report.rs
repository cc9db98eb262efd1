//! Text and JSON renderings of a [`FibrationReport`].
//!
//! Numbers are exact: integers that fit in 64 bits are JSON numbers,
//! anything else (fractions, huge integers) is a string such as `"29/4"`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::fibration::{Base, FibrationReport, StepRecord};
use crate::linalg::Rational;

/// Exact integer as a JSON value.
pub fn int_value(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

/// Exact rational as a JSON value: an integer when whole, else `"p/q"`.
pub fn rational_value(x: &Rational) -> Value {
    if x.is_integer() {
        int_value(x.numer())
    } else {
        Value::String(format!("{}/{}", x.numer(), x.denom()))
    }
}

fn step_value(step: &StepRecord) -> Value {
    json!({
        "index": step.index,
        "label": step.label,
        "class": step.class.to_string(),
        "piece_genus": step.piece_genus,
        "inverse": step.inverse,
        "kernel": step.kernel.as_ref().map(|k| json!([int_value(&k.u), int_value(&k.v)])),
        "framed": step.framed.as_ref().map(|(p, q)| json!([int_value(p), int_value(q)])),
        "increment": step.increment,
        "sigma": step.running_sigma,
    })
}

/// The report as a JSON value. Object keys are sorted, so serializing the
/// same report twice gives identical bytes.
pub fn to_json_value(report: &FibrationReport) -> Value {
    let s_by_genus: Map<String, Value> = report
        .s_by_genus
        .iter()
        .map(|(h, c)| (h.to_string(), Value::from(*c)))
        .collect();
    let checks: Map<String, Value> = report
        .checks
        .iter()
        .map(|(name, r)| (name.clone(), json!({"status": r.status, "details": r.details})))
        .collect();
    json!({
        "genus": report.genus,
        "base": report.base.to_string(),
        "t": report.t,
        "n": report.n,
        "s": report.s,
        "s_by_genus": s_by_genus,
        "steps": report.steps.iter().map(step_value).collect::<Vec<_>>(),
        "sigma": report.sigma,
        "euler": report.euler,
        "c1_squared": report.c1_squared.as_ref().map(rational_value),
        "chi": report.chi.as_ref().map(rational_value),
        "closure": report.closure,
        "checks": checks,
        "experimental": report.experimental,
    })
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json(report: &FibrationReport) -> String {
    let mut s = serde_json::to_string_pretty(&to_json_value(report)).expect("JSON values serialize");
    s.push('\n');
    s
}

fn show_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Human-readable summary.
pub fn summary(report: &FibrationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "genus {} over {}, {} twists", report.genus, report.base, report.t);
    let sh: Vec<String> = report.s_by_genus.iter().map(|(h, c)| format!("s_{h} = {c}")).collect();
    let sh = if sh.is_empty() { "s = 0".to_string() } else { sh.join(", ") };
    let _ = writeln!(out, "n = {}, {sh}", report.n);
    let _ = writeln!(out, "sigma = {}", report.sigma);
    let _ = writeln!(out, "e = {}", report.euler);
    if report.base == Base::Sphere {
        if let (Some(c1), Some(chi)) = (&report.c1_squared, &report.chi) {
            let _ = writeln!(out, "c1^2 = {}", show_rational(c1));
            let _ = writeln!(out, "chi = {}", show_rational(chi));
        }
        let _ = writeln!(
            out,
            "closure: {}",
            if report.closure { "homologically closed" } else { "not closed" }
        );
    }
    if report.experimental {
        let _ = writeln!(out, "note: word has negative twists; results are experimental");
    }
    if !report.checks.is_empty() {
        let _ = writeln!(out, "checks:");
        let width = report.checks.keys().map(String::len).max().unwrap_or(0);
        for (name, r) in &report.checks {
            let _ = writeln!(out, "  {name:<width$}  {:<14}  {}", r.status.to_string(), r.details);
        }
    }
    out
}

/// Per-step table: step, twist, kernel generator, framed pair, increment, running σ.
pub fn trace_table(report: &FibrationReport) -> String {
    let header = ["step", "twist", "kernel C", "(p,q)", "incr", "sigma"];
    let rows: Vec<[String; 6]> = report
        .steps
        .iter()
        .map(|s| {
            let twist = match (s.piece_genus, s.inverse) {
                (Some(h), false) => format!("{} (sep {h})", s.label),
                (Some(h), true) => format!("{}^-1 (sep {h})", s.label),
                (None, false) => s.label.clone(),
                (None, true) => format!("{}^-1", s.label),
            };
            [
                s.index.to_string(),
                twist,
                s.kernel.as_ref().map_or("-".into(), |k| k.to_string()),
                s.framed.as_ref().map_or("-".into(), |(p, q)| format!("({p},{q})")),
                format!("{:+}", s.increment).replace("+0", "0"),
                s.running_sigma.to_string(),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = String::new();
    out.push_str(&line(&header.map(String::from)));
    out.push('\n');
    for row in &rows {
        out.push_str(&line(row));
        out.push('\n');
    }
    out
}
