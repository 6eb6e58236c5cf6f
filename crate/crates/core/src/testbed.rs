//! Built-in test integrands, percentage-error tables, range averages and
//! stability probes comparing the `1 - t` rules against the `w = 1` rules.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{QuadError, Result};
use crate::quadrature::{integrate, DerivativeSource, Integrand};
use crate::recursion::WeightId;
use crate::rule::{build_rule, QuadratureRule, RuleKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionId {
    F1,
    F2,
    F3,
    F4,
}

impl FunctionId {
    pub const ALL: [FunctionId; 4] = [FunctionId::F1, FunctionId::F2, FunctionId::F3, FunctionId::F4];

    pub fn as_str(self) -> &'static str {
        match self {
            FunctionId::F1 => "f1",
            FunctionId::F2 => "f2",
            FunctionId::F3 => "f3",
            FunctionId::F4 => "f4",
        }
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FunctionId {
    type Err = QuadError;

    fn from_str(s: &str) -> Result<Self> {
        FunctionId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| QuadError::UnknownFunction(s.to_string()))
    }
}

fn f1(x: f64) -> f64 {
    x.powf(0.125)
}
fn df1(x: f64) -> f64 {
    0.125 * x.powf(-0.875)
}
fn f2(x: f64) -> f64 {
    (5.0 * (x - 0.5)).cosh().powi(2) / 5.0
}
fn df2(x: f64) -> f64 {
    (10.0 * (x - 0.5)).sinh()
}
fn f3(x: f64) -> f64 {
    2.0 / (2.0 + (10.0 * PI * x).sin())
}
fn df3(x: f64) -> f64 {
    let s = 2.0 + (10.0 * PI * x).sin();
    -20.0 * PI * (10.0 * PI * x).cos() / (s * s)
}
fn f4(x: f64) -> f64 {
    1.0 / ((x - 0.3).powi(2) + 0.01) + 1.0 / ((x - 0.9).powi(2) + 0.04)
}
fn df4(x: f64) -> f64 {
    let a = (x - 0.3).powi(2) + 0.01;
    let b = (x - 0.9).powi(2) + 0.04;
    -2.0 * (x - 0.3) / (a * a) - 2.0 * (x - 0.9) / (b * b)
}

/// One of the four built-in integrands with its reference data.
#[derive(Debug, Clone)]
pub struct TestFunction {
    pub id: FunctionId,
    pub formula: &'static str,
    pub value: fn(f64) -> f64,
    pub derivative: fn(f64) -> f64,
    pub exact_integral: f64,
    /// `None` where the derivative at 0 is unbounded.
    pub deriv_at_0: Option<f64>,
}

impl TestFunction {
    /// The function on `[0, 1]` with its exact `f'(1)`.
    pub fn integrand(&self) -> Integrand {
        Integrand::new(self.value, (self.derivative)(1.0), DerivativeSource::Exact)
    }

    /// Compares the closed-form integral with the adaptive oracle.
    pub fn verify(&self) -> Result<()> {
        let oracle = adaptive_integral(self.value, 0.0, 1.0, 1e-13);
        if ((oracle - self.exact_integral) / self.exact_integral).abs() <= 1e-11 {
            Ok(())
        } else {
            Err(QuadError::OracleMismatch {
                id: self.id.as_str(),
                exact: self.exact_integral,
                oracle,
            })
        }
    }
}

pub fn builtin(id: FunctionId) -> TestFunction {
    match id {
        FunctionId::F1 => TestFunction {
            id,
            formula: "x^(1/8)",
            value: f1,
            derivative: df1,
            exact_integral: 8.0 / 9.0,
            deriv_at_0: None,
        },
        FunctionId::F2 => TestFunction {
            id,
            formula: "cosh(5*(x-0.5))^2/5",
            value: f2,
            derivative: df2,
            exact_integral: 0.1 + 5.0f64.sinh() / 50.0,
            deriv_at_0: Some(df2(0.0)),
        },
        FunctionId::F3 => TestFunction {
            id,
            formula: "2/(2+sin(10*pi*x))",
            value: f3,
            derivative: df3,
            exact_integral: 2.0 / 3.0f64.sqrt(),
            deriv_at_0: Some(df3(0.0)),
        },
        FunctionId::F4 => TestFunction {
            id,
            formula: "1/((x-0.3)^2+0.01) + 1/((x-0.9)^2+0.04)",
            value: f4,
            derivative: df4,
            exact_integral: 10.0 * (7.0f64.atan() + 3.0f64.atan())
                + 5.0 * (0.5f64.atan() + 4.5f64.atan()),
            deriv_at_0: Some(df4(0.0)),
        },
    }
}

#[allow(clippy::excessive_precision)]
const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
#[allow(clippy::excessive_precision)]
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
// Gauss weights for GK_NODES[1], [3], [5], [7]
#[allow(clippy::excessive_precision)]
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = GK_WEIGHTS[7] * fc;
    let mut gauss = G7_WEIGHTS[3] * fc;
    for i in 0..7 {
        let s = f(c - h * GK_NODES[i]) + f(c + h * GK_NODES[i]);
        kronrod += GK_WEIGHTS[i] * s;
        if i % 2 == 1 {
            gauss += G7_WEIGHTS[i / 2] * s;
        }
    }
    (kronrod * h, (kronrod - gauss).abs() * h)
}

/// Adaptive Gauss-Kronrod (7, 15) with bisection, used only to check the
/// closed-form reference integrals.
pub fn adaptive_integral(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    let f = &f;
    let (whole, _) = gk15(f, a, b);
    let scale = whole.abs().max(f64::MIN_POSITIVE);
    let mut total = 0.0;
    let mut stack = vec![(a, b, 0u32)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let (val, err) = gk15(f, lo, hi);
        if err <= rel_tol * scale * (hi - lo) / (b - a) || depth >= 60 {
            total += val;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    total
}

pub fn percent_error(approx: f64, exact: f64) -> Result<f64> {
    if exact == 0.0 {
        return Err(QuadError::ZeroReference);
    }
    Ok(100.0 * (approx - exact).abs() / exact.abs())
}

/// Column order of the comparison tables.
pub const COLUMNS: [(WeightId, RuleKind, &str); 6] = [
    (WeightId::Constant, RuleKind::Gauss, "G(1)"),
    (WeightId::Linear, RuleKind::Gauss, "G(1-t)"),
    (WeightId::Constant, RuleKind::RadauRight, "G-R(1)"),
    (WeightId::Linear, RuleKind::RadauRight, "G-R(1-t)"),
    (WeightId::Constant, RuleKind::Lobatto, "G-L(1)"),
    (WeightId::Linear, RuleKind::Lobatto, "G-L(1-t)"),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellValue {
    pub approx: f64,
    pub percent: f64,
}

pub type Cell = std::result::Result<CellValue, QuadError>;

#[derive(Debug, Clone)]
pub struct ErrorRow {
    pub n: usize,
    pub cells: [Cell; 6],
}

#[derive(Debug, Clone)]
pub struct ErrorTable {
    pub function: FunctionId,
    pub rows: Vec<ErrorRow>,
}

impl ErrorTable {
    pub fn row(&self, n: usize) -> Option<&ErrorRow> {
        self.rows.iter().find(|r| r.n == n)
    }
}

/// Approximation of `integral_0^1 f` by one rule, using the applier that
/// matches its weight.
pub fn approximate(rule: &QuadratureRule, f: &TestFunction) -> Result<f64> {
    integrate(rule, &f.integrand())
}

fn cell(f: &TestFunction, weight: WeightId, kind: RuleKind, n: usize) -> Cell {
    let rule = build_rule(weight, kind, n)?;
    let approx = approximate(&rule, f)?;
    Ok(CellValue {
        approx,
        percent: percent_error(approx, f.exact_integral)?,
    })
}

/// Percentage errors of all six rule/weight combinations for `n_min..=n_max`.
pub fn error_table(id: FunctionId, n_min: usize, n_max: usize) -> Result<ErrorTable> {
    if n_min < 2 || n_max < n_min {
        return Err(QuadError::Domain(format!(
            "table range must satisfy 2 <= n_min <= n_max, got {n_min}..{n_max}"
        )));
    }
    let f = builtin(id);
    f.verify()?;
    let rows = (n_min..=n_max)
        .into_par_iter()
        .map(|n| ErrorRow {
            n,
            cells: COLUMNS.map(|(w, k, _)| cell(&f, w, k, n)),
        })
        .collect();
    Ok(ErrorTable { function: id, rows })
}

#[derive(Debug, Clone)]
pub struct RangeAverage {
    pub lo: usize,
    pub hi: usize,
    pub means: [std::result::Result<f64, QuadError>; 6],
}

/// Mean percentage error per column over each inclusive `n` range.
pub fn range_averages(id: FunctionId, ranges: &[(usize, usize)]) -> Result<Vec<RangeAverage>> {
    ranges
        .iter()
        .map(|&(lo, hi)| {
            let table = error_table(id, lo, hi)?;
            let means = std::array::from_fn(|c| {
                let mut sum = 0.0;
                for row in &table.rows {
                    sum += row.cells[c].as_ref().map_err(Clone::clone)?.percent;
                }
                Ok(sum / table.rows.len() as f64)
            });
            Ok(RangeAverage { lo, hi, means })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum ProbeOutcome {
    Ok {
        min_node: f64,
        max_node: f64,
        min_weight: f64,
        weight_sum: f64,
    },
    /// Built without error but violates rule invariants.
    Invalid { violations: Vec<String> },
    Failed { kind: &'static str, message: String },
}

impl ProbeOutcome {
    pub fn is_ok(&self) -> bool {
        matches!(self, ProbeOutcome::Ok { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            ProbeOutcome::Ok { .. } => "ok",
            ProbeOutcome::Invalid { .. } => "Invalid",
            ProbeOutcome::Failed { kind, .. } => kind,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub weight: WeightId,
    pub kind: RuleKind,
    pub n_max: usize,
    pub stride: usize,
    pub outcomes: Vec<(usize, ProbeOutcome)>,
}

impl StabilityReport {
    pub fn all_ok(&self) -> bool {
        self.outcomes.iter().all(|(_, o)| o.is_ok())
    }

    /// First probed `n` whose outcome is not ok.
    pub fn first_degraded(&self) -> Option<(usize, &ProbeOutcome)> {
        self.outcomes.iter().find(|(_, o)| !o.is_ok()).map(|(n, o)| (*n, o))
    }

    /// Start of the trailing run of probes that all fail to construct.
    pub fn first_failure(&self) -> Option<(usize, &ProbeOutcome)> {
        let failed = |o: &ProbeOutcome| matches!(o, ProbeOutcome::Failed { .. });
        let tail = self.outcomes.iter().rev().take_while(|(_, o)| failed(o)).count();
        if tail == 0 {
            return None;
        }
        let (n, o) = &self.outcomes[self.outcomes.len() - tail];
        Some((*n, o))
    }

    /// First probed `n` at which construction raised the error `kind`.
    pub fn first_error(&self, kind: &str) -> Option<usize> {
        self.outcomes
            .iter()
            .find(|(_, o)| matches!(o, ProbeOutcome::Failed { kind: k, .. } if *k == kind))
            .map(|(n, _)| *n)
    }

    /// True when every probe from the first `kind` error onwards raised `kind`.
    pub fn fails_persistently(&self, kind: &str) -> bool {
        let Some(start) = self.first_error(kind) else {
            return true;
        };
        self.outcomes
            .iter()
            .filter(|(n, _)| *n >= start)
            .all(|(_, o)| matches!(o, ProbeOutcome::Failed { kind: k, .. } if *k == kind))
    }
}

/// Tolerance on the weight sum used by the stability probe.
pub const PROBE_SUM_TOL: f64 = 1e-9;
/// Tolerance on the fixed nodes used by the stability probe.
pub const PROBE_FIXED_TOL: f64 = 1e-10;

fn probe_one(weight: WeightId, kind: RuleKind, n: usize) -> ProbeOutcome {
    match build_rule(weight, kind, n) {
        Err(e) => ProbeOutcome::Failed {
            kind: e.kind(),
            message: e.to_string(),
        },
        Ok(rule) => {
            let violations = rule.violations(PROBE_SUM_TOL, PROBE_FIXED_TOL);
            if violations.is_empty() {
                ProbeOutcome::Ok {
                    min_node: rule.nodes()[0],
                    max_node: *rule.nodes().last().unwrap(),
                    min_weight: rule.weights().iter().copied().fold(f64::INFINITY, f64::min),
                    weight_sum: rule.weights().iter().sum(),
                }
            } else {
                ProbeOutcome::Invalid { violations }
            }
        }
    }
}

/// Probes `n = stride, 2 stride, ...` up to and including `n_max`.
pub fn stability_probe(weight: WeightId, kind: RuleKind, n_max: usize, stride: usize) -> Result<StabilityReport> {
    if n_max < 2 || stride == 0 {
        return Err(QuadError::Domain(format!(
            "stability probe needs n_max >= 2 and stride >= 1, got {n_max} and {stride}"
        )));
    }
    let mut ns: Vec<usize> = (stride..=n_max).step_by(stride).collect();
    if ns.last() != Some(&n_max) {
        ns.push(n_max);
    }
    let outcomes = ns
        .into_par_iter()
        .map(|n| (n, probe_one(weight, kind, n)))
        .collect();
    Ok(StabilityReport {
        weight,
        kind,
        n_max,
        stride,
        outcomes,
    })
}
