//! Text, CSV, Markdown and JSON renderings of rules, error tables,
//! range averages and stability reports.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::error::QuadError;
use crate::rule::QuadratureRule;
use crate::testbed::{ErrorTable, FunctionId, ProbeOutcome, RangeAverage, StabilityReport, COLUMNS};

/// Significant digits used unless overridden.
pub const DEFAULT_DIGITS: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Csv,
    Markdown,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(OutputFormat::Text),
            "csv" => Ok(OutputFormat::Csv),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format '{other}' (expected text, csv, markdown or json)")),
        }
    }
}

/// `%g`-style rendering with `digits` significant digits. Integral values
/// keep a trailing `.0`; exponents are written without padding (`2.05e-7`).
pub fn fmt_num(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0.0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{exp}", trim_zeros(mantissa))
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}"))
    }
}

fn trim_zeros(s: &str) -> String {
    if !s.contains('.') {
        return format!("{s}.0");
    }
    let t = s.trim_end_matches('0');
    if t.ends_with('.') {
        format!("{t}0")
    } else {
        t.to_string()
    }
}

fn fail_marker(e: &QuadError) -> String {
    format!("FAIL({})", e.kind())
}

fn num_json(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

/// Plain rectangular table rendered in the three tabular formats.
#[derive(Debug, Clone, Default)]
pub struct Grid {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Grid {
    pub fn new(headers: &[&str]) -> Self {
        Grid {
            headers: headers.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.csv(),
            OutputFormat::Markdown => self.markdown(),
            _ => self.text(),
        }
    }

    fn widths(&self) -> Vec<usize> {
        (0..self.headers.len())
            .map(|c| {
                self.rows
                    .iter()
                    .map(|r| r[c].len())
                    .chain(std::iter::once(self.headers[c].len()))
                    .max()
                    .unwrap_or(0)
            })
            .collect()
    }

    fn text(&self) -> String {
        let w = self.widths();
        let mut out = String::new();
        let line = |cells: &[String]| {
            cells
                .iter()
                .zip(&w)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        writeln!(out, "{}", line(&self.headers)).unwrap();
        for r in &self.rows {
            writeln!(out, "{}", line(r)).unwrap();
        }
        out
    }

    fn csv(&self) -> String {
        let esc = |s: &String| {
            if s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.clone()
            }
        };
        let mut out = String::new();
        for r in std::iter::once(&self.headers).chain(&self.rows) {
            writeln!(out, "{}", r.iter().map(esc).collect::<Vec<_>>().join(",")).unwrap();
        }
        out
    }

    fn markdown(&self) -> String {
        let mut out = String::new();
        writeln!(out, "| {} |", self.headers.join(" | ")).unwrap();
        writeln!(out, "|{}", "---:|".repeat(self.headers.len())).unwrap();
        for r in &self.rows {
            writeln!(out, "| {} |", r.join(" | ")).unwrap();
        }
        out
    }
}

/// Node table with a trailing weight-sum row.
pub fn render_nodes(rule: &QuadratureRule, format: OutputFormat, digits: usize) -> String {
    if format == OutputFormat::Json {
        let v = json!({
            "meta": {"weight": rule.weight().as_str(), "kind": rule.kind().as_str(), "n": rule.free_nodes()},
            "nodes": rule.nodes().iter().map(|&x| num_json(x)).collect::<Vec<_>>(),
            "weights": rule.weights().iter().map(|&x| num_json(x)).collect::<Vec<_>>(),
        });
        return format!("{v:#}\n");
    }
    let mut g = Grid::new(&["i", "t_i", "v_i"]);
    for (i, (t, v)) in rule.iter().enumerate() {
        g.push(vec![(i + 1).to_string(), fmt_num(t, digits), fmt_num(v, digits)]);
    }
    let sum: f64 = rule.weights().iter().sum();
    g.push(vec!["sum".into(), String::new(), fmt_num(sum, digits)]);
    g.render(format)
}

/// Outcome of one `integrate` invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationSummary {
    pub approx: f64,
    pub exact: Option<f64>,
    pub percent: Option<f64>,
}

pub fn render_integration(s: &IntegrationSummary, format: OutputFormat, digits: usize) -> String {
    if format == OutputFormat::Json {
        let v = json!({
            "approx": num_json(s.approx),
            "exact": s.exact.map(num_json),
            "percent_error": s.percent.map(num_json),
        });
        return format!("{v:#}\n");
    }
    let mut g = Grid::new(&["approx"]);
    let mut row = vec![fmt_num(s.approx, digits)];
    if let Some(e) = s.exact {
        g.headers.push("exact".into());
        row.push(fmt_num(e, digits));
    }
    if let Some(p) = s.percent {
        g.headers.push("percent_error".into());
        row.push(fmt_num(p, digits));
    }
    g.push(row);
    if format == OutputFormat::Text {
        g.headers
            .iter()
            .zip(&g.rows[0])
            .map(|(h, v)| format!("{h} = {v}\n"))
            .collect()
    } else {
        g.render(format)
    }
}

/// Percentage-error table in the six-column layout.
pub fn render_table(t: &ErrorTable, format: OutputFormat, digits: usize) -> String {
    if format == OutputFormat::Json {
        let rows: Vec<Value> = t
            .rows
            .iter()
            .map(|r| {
                let cells: serde_json::Map<String, Value> = COLUMNS
                    .iter()
                    .zip(&r.cells)
                    .map(|((_, _, name), c)| {
                        let v = match c {
                            Ok(c) => json!({"approx": num_json(c.approx), "percent": num_json(c.percent)}),
                            Err(e) => json!({"error": e.kind(), "message": e.to_string()}),
                        };
                        (name.to_string(), v)
                    })
                    .collect();
                json!({"n": r.n, "cells": cells})
            })
            .collect();
        return format!("{:#}\n", json!({"function": t.function.as_str(), "rows": rows}));
    }
    let mut headers = vec!["n"];
    headers.extend(COLUMNS.iter().map(|c| c.2));
    let mut g = Grid::new(&headers);
    for r in &t.rows {
        let mut row = vec![r.n.to_string()];
        row.extend(r.cells.iter().map(|c| match c {
            Ok(c) => fmt_num(c.percent, digits),
            Err(e) => fail_marker(e),
        }));
        g.push(row);
    }
    g.render(format)
}

pub fn render_averages(id: FunctionId, avgs: &[RangeAverage], format: OutputFormat, digits: usize) -> String {
    if format == OutputFormat::Json {
        let rows: Vec<Value> = avgs
            .iter()
            .map(|a| {
                let means: serde_json::Map<String, Value> = COLUMNS
                    .iter()
                    .zip(&a.means)
                    .map(|((_, _, name), m)| {
                        let v = match m {
                            Ok(x) => num_json(*x),
                            Err(e) => json!({"error": e.kind()}),
                        };
                        (name.to_string(), v)
                    })
                    .collect();
                json!({"lo": a.lo, "hi": a.hi, "means": means})
            })
            .collect();
        return format!("{:#}\n", json!({"function": id.as_str(), "ranges": rows}));
    }
    let mut headers = vec!["range"];
    headers.extend(COLUMNS.iter().map(|c| c.2));
    let mut g = Grid::new(&headers);
    for a in avgs {
        let mut row = vec![format!("{}-{}", a.lo, a.hi)];
        row.extend(a.means.iter().map(|m| match m {
            Ok(x) => fmt_num(*x, digits),
            Err(e) => fail_marker(e),
        }));
        g.push(row);
    }
    g.render(format)
}

/// `all ok`, or `first failure: n=<k> (<Kind>)` for the onset of persistent
/// construction failure, preceded or replaced by `first degraded: ...` when
/// an earlier probe already broke a rule invariant.
pub fn stability_summary(r: &StabilityReport) -> String {
    let failure = r.first_failure();
    let degraded = r.first_degraded();
    let mut lines = Vec::new();
    if let Some((n, o)) = failure {
        lines.push(format!("first failure: n={n} ({})", o.label()));
    }
    match (degraded, failure) {
        (None, _) => lines.push("all ok".into()),
        (Some((d, o)), Some((f, _))) if d < f => lines.push(format!("first degraded: n={d} ({})", o.label())),
        (Some((d, o)), None) => lines.push(format!("first degraded: n={d} ({})", o.label())),
        _ => {}
    }
    lines.join("\n")
}

pub fn render_stability(r: &StabilityReport, format: OutputFormat, digits: usize) -> String {
    match format {
        OutputFormat::Text => format!("{}\n", stability_summary(r)),
        OutputFormat::Json => {
            let v = json!({
                "weight": r.weight.as_str(),
                "kind": r.kind.as_str(),
                "n_max": r.n_max,
                "stride": r.stride,
                "summary": stability_summary(r),
                "outcomes": r.outcomes.iter().map(|(n, o)| {
                    let mut v = serde_json::to_value(o).unwrap();
                    v["n"] = json!(n);
                    v
                }).collect::<Vec<_>>(),
            });
            format!("{v:#}\n")
        }
        _ => {
            let mut g = Grid::new(&["n", "status", "min_node", "max_node", "min_weight", "weight_sum"]);
            for (n, o) in &r.outcomes {
                let row = match o {
                    ProbeOutcome::Ok {
                        min_node,
                        max_node,
                        min_weight,
                        weight_sum,
                    } => vec![
                        n.to_string(),
                        "ok".into(),
                        fmt_num(*min_node, digits),
                        fmt_num(*max_node, digits),
                        fmt_num(*min_weight, digits),
                        fmt_num(*weight_sum, digits),
                    ],
                    other => {
                        let mut v = vec![n.to_string(), other.label().to_string()];
                        v.extend(std::iter::repeat_n(String::new(), 4));
                        v
                    }
                };
                g.push(row);
            }
            g.render(format)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recursion::WeightId;
    use crate::rule::{build_rule, RuleKind};

    #[test]
    fn number_formatting() {
        assert_eq!(fmt_num(1.0 / 3.0, 9), "0.333333333");
        assert_eq!(fmt_num(0.5, 9), "0.5");
        assert_eq!(fmt_num(1.0, 9), "1.0");
        assert_eq!(fmt_num(0.0555555555555, 9), "0.0555555556");
        assert_eq!(fmt_num(2.05e-7, 9), "2.05e-7");
        assert_eq!(fmt_num(-4.424, 4), "-4.424");
        assert_eq!(fmt_num(123456789012.0, 9), "1.23456789e11");
        assert_eq!(fmt_num(0.0, 9), "0.0");
    }

    #[test]
    fn formatted_values_parse_back() {
        for &v in &[1.0 / 7.0, 12345.678901234, 3.3e-12, -0.000123456789] {
            let back: f64 = fmt_num(v, 9).parse().unwrap();
            assert!(((back - v) / v).abs() < 5e-9);
        }
    }

    #[test]
    fn nodes_csv_layout() {
        let r = build_rule(WeightId::Linear, RuleKind::RadauRight, 1).unwrap();
        let out = render_nodes(&r, OutputFormat::Csv, 9);
        assert_eq!(out, "i,t_i,v_i\n1,0.25,0.444444444\n2,1.0,0.0555555556\nsum,,0.5\n");
    }

    #[test]
    fn nodes_json_layout() {
        let r = build_rule(WeightId::Linear, RuleKind::Gauss, 1).unwrap();
        let v: Value = serde_json::from_str(&render_nodes(&r, OutputFormat::Json, 9)).unwrap();
        assert_eq!(v["meta"]["kind"], "gauss");
        assert_eq!(v["meta"]["n"], 1);
        assert_eq!(v["weights"][0], 0.5);
    }

    #[test]
    fn markdown_has_separator_row() {
        let mut g = Grid::new(&["a", "b"]);
        g.push(vec!["1".into(), "2".into()]);
        assert_eq!(g.render(OutputFormat::Markdown), "| a | b |\n|---:|---:|\n| 1 | 2 |\n");
    }

    #[test]
    fn stability_summaries() {
        let ok = ProbeOutcome::Ok {
            min_node: 0.1,
            max_node: 0.9,
            min_weight: 0.01,
            weight_sum: 0.5,
        };
        let fail = |k| ProbeOutcome::Failed {
            kind: k,
            message: String::new(),
        };
        let bad = ProbeOutcome::Invalid { violations: vec!["x".into()] };
        let mk = |outcomes| StabilityReport {
            weight: WeightId::Constant,
            kind: RuleKind::RadauRight,
            n_max: 5,
            stride: 1,
            outcomes,
        };
        assert_eq!(stability_summary(&mk(vec![(1, ok.clone())])), "all ok");
        let r = mk(vec![
            (1, ok.clone()),
            (2, fail("NodeOutOfRange")),
            (3, bad.clone()),
            (4, fail("DivisionByZero")),
            (5, fail("DivisionByZero")),
        ]);
        assert_eq!(
            stability_summary(&r),
            "first failure: n=4 (DivisionByZero)\nfirst degraded: n=2 (NodeOutOfRange)"
        );
        assert!(r.fails_persistently("DivisionByZero"));
        assert_eq!(r.first_error("NodeOutOfRange"), Some(2));
        assert!(!r.fails_persistently("NodeOutOfRange"));
        let r = mk(vec![(1, ok), (2, bad)]);
        assert_eq!(stability_summary(&r), "first degraded: n=2 (Invalid)");
    }
}
