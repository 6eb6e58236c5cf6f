use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use idquad::expr::{self, FD_STEP};
use idquad::identity_polys::kappa as kappa_exact;
use idquad::quadrature::{integrate as integrate_rule, DerivativeSource, Integrand};
use idquad::recursion::coeffs_for;
use idquad::testbed::{self, FunctionId, ProbeOutcome, COLUMNS};
use idquad::{QuadError, QuadratureRule, RuleKind, WeightId};

create_exception!(idquad_py, QuadratureError, PyValueError);

fn to_py(e: QuadError) -> PyErr {
    QuadratureError::new_err(format!("{}: {e}", e.kind()))
}

fn parse_arg<T: std::str::FromStr>(what: &str, s: &str) -> PyResult<T>
where
    T::Err: std::fmt::Display,
{
    s.parse::<T>()
        .map_err(|e| PyValueError::new_err(format!("invalid {what}: {e}")))
}

/// A quadrature rule on `[0, 1]`.
#[pyclass(module = "idquad_py", name = "Rule", frozen)]
struct PyRule {
    inner: QuadratureRule,
}

#[pymethods]
impl PyRule {
    #[new]
    #[pyo3(signature = (weight = "linear", kind = "gauss", n = 2))]
    fn new(weight: &str, kind: &str, n: usize) -> PyResult<Self> {
        let w: WeightId = parse_arg("weight", weight)?;
        let k: RuleKind = parse_arg("kind", kind)?;
        idquad::build_rule(w, k, n)
            .map(|inner| PyRule { inner })
            .map_err(to_py)
    }

    #[getter]
    fn weight(&self) -> &'static str {
        self.inner.weight().as_str()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind().as_str()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.free_nodes()
    }

    #[getter]
    fn nodes(&self) -> Vec<f64> {
        self.inner.nodes().to_vec()
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner.weights().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Integrates a Python callable over `[0, 1]`. Without `deriv_at_1` the
    /// derivative is taken by a one-sided difference.
    #[pyo3(signature = (f, deriv_at_1 = None))]
    fn integrate(&self, py: Python<'_>, f: Py<PyAny>, deriv_at_1: Option<f64>) -> PyResult<f64> {
        let call = {
            let f = f.clone_ref(py);
            move |x: f64| -> f64 {
                Python::attach(|py| f.call1(py, (x,)).and_then(|r| r.extract::<f64>(py)))
                    .unwrap_or(f64::NAN)
            }
        };
        let (d, source) = match deriv_at_1 {
            Some(d) => (d, DerivativeSource::Exact),
            None if self.inner.weight() == WeightId::Linear => {
                let check = |x: f64| {
                    let v = call(x);
                    if v.is_finite() {
                        Ok(v)
                    } else {
                        Err(QuadError::NonFiniteValue { x, value: v })
                    }
                };
                let d = expr::one_sided_right(check, 1.0, FD_STEP).map_err(to_py)?;
                (d, DerivativeSource::FiniteDifference)
            }
            None => (0.0, DerivativeSource::Exact),
        };
        integrate_rule(&self.inner, &Integrand::new(call, d, source)).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "Rule(weight='{}', kind='{}', n={}, nodes={})",
            self.weight(),
            self.kind(),
            self.n(),
            self.inner.len()
        )
    }
}

#[pyfunction]
#[pyo3(signature = (weight = "linear", kind = "gauss", n = 2))]
fn build_rule(weight: &str, kind: &str, n: usize) -> PyResult<PyRule> {
    PyRule::new(weight, kind, n)
}

/// Integrates an expression in `x` over `[a, b]`.
#[pyfunction]
#[pyo3(signature = (expression, weight = "linear", kind = "gauss", n = 2, dexpr = None, a = 0.0, b = 1.0, fixed_end = "right"))]
#[allow(clippy::too_many_arguments)]
fn integrate(
    expression: &str,
    weight: &str,
    kind: &str,
    n: usize,
    dexpr: Option<&str>,
    a: f64,
    b: f64,
    fixed_end: &str,
) -> PyResult<f64> {
    let rule = PyRule::new(weight, kind, n)?.inner;
    let left = match fixed_end {
        "right" => false,
        "left" => true,
        other => return Err(PyValueError::new_err(format!("fixed_end must be 'right' or 'left', got '{other}'"))),
    };
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(to_py(QuadError::InvalidInterval { a, b }));
    }
    let e = expr::parse(expression).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let d = dexpr
        .map(expr::parse)
        .transpose()
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    let h = b - a;
    let end = if left { a } else { b };
    let (dg, source) = if rule.weight() == WeightId::Constant {
        (0.0, DerivativeSource::Exact)
    } else if let Some(d) = &d {
        (d.eval(end).map_err(to_py)?, DerivativeSource::Exact)
    } else if left {
        (expr::one_sided_left(|x| e.eval(x), a, FD_STEP * h).map_err(to_py)?, DerivativeSource::FiniteDifference)
    } else {
        (expr::one_sided_right(|x| e.eval(x), b, FD_STEP * h).map_err(to_py)?, DerivativeSource::FiniteDifference)
    };
    let f = if left {
        Integrand::new(move |t| h * e.eval_or_nan(b - h * t), -h * h * dg, source)
    } else {
        Integrand::new(move |t| h * e.eval_or_nan(a + h * t), h * h * dg, source)
    };
    integrate_rule(&rule, &f).map_err(to_py)
}

/// Approximation, exact value and percent error of a built-in function on `[0, 1]`.
#[pyfunction]
#[pyo3(signature = (function, weight = "linear", kind = "gauss", n = 2))]
fn integrate_builtin(function: &str, weight: &str, kind: &str, n: usize) -> PyResult<(f64, f64, f64)> {
    let id: FunctionId = parse_arg("function", function)?;
    let rule = PyRule::new(weight, kind, n)?.inner;
    let f = testbed::builtin(id);
    let approx = testbed::approximate(&rule, &f).map_err(to_py)?;
    let pct = testbed::percent_error(approx, f.exact_integral).map_err(to_py)?;
    Ok((approx, f.exact_integral, pct))
}

/// Percentage-error table as a list of dicts keyed by `n` and column names;
/// failed cells hold the error kind as a string.
#[pyfunction]
#[pyo3(signature = (function, n_min = 2, n_max = 11))]
fn error_table<'py>(py: Python<'py>, function: &str, n_min: usize, n_max: usize) -> PyResult<Bound<'py, PyList>> {
    let id: FunctionId = parse_arg("function", function)?;
    let table = py.detach(|| testbed::error_table(id, n_min, n_max)).map_err(to_py)?;
    let rows = PyList::empty(py);
    for row in &table.rows {
        let d = PyDict::new(py);
        d.set_item("n", row.n)?;
        for ((_, _, name), cell) in COLUMNS.iter().zip(&row.cells) {
            match cell {
                Ok(c) => d.set_item(*name, c.percent)?,
                Err(e) => d.set_item(*name, e.kind())?,
            }
        }
        rows.append(d)?;
    }
    Ok(rows)
}

/// Mean percentage errors per column over `[(lo, hi), ...]`.
#[pyfunction]
fn range_averages<'py>(py: Python<'py>, function: &str, ranges: Vec<(usize, usize)>) -> PyResult<Bound<'py, PyList>> {
    let id: FunctionId = parse_arg("function", function)?;
    let avgs = py.detach(|| testbed::range_averages(id, &ranges)).map_err(to_py)?;
    let rows = PyList::empty(py);
    for a in &avgs {
        let d = PyDict::new(py);
        d.set_item("range", (a.lo, a.hi))?;
        for ((_, _, name), m) in COLUMNS.iter().zip(&a.means) {
            match m {
                Ok(v) => d.set_item(*name, *v)?,
                Err(e) => d.set_item(*name, e.kind())?,
            }
        }
        rows.append(d)?;
    }
    Ok(rows)
}

/// Stability probe summary with per-`n` status labels.
#[pyfunction]
#[pyo3(signature = (weight, kind, n_max, stride = 1))]
fn stability<'py>(py: Python<'py>, weight: &str, kind: &str, n_max: usize, stride: usize) -> PyResult<Bound<'py, PyDict>> {
    let w: WeightId = parse_arg("weight", weight)?;
    let k: RuleKind = parse_arg("kind", kind)?;
    let r = py.detach(|| testbed::stability_probe(w, k, n_max, stride)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("all_ok", r.all_ok())?;
    d.set_item("summary", idquad::report::stability_summary(&r))?;
    d.set_item("first_failure", r.first_failure().map(|(n, o)| (n, o.label())))?;
    d.set_item("first_degraded", r.first_degraded().map(|(n, o)| (n, o.label())))?;
    let errors = PyDict::new(py);
    for kind in ["DivisionByZero", "SingularSystem", "NodeOutOfRange"] {
        if let Some(n) = r.first_error(kind) {
            errors.set_item(kind, n)?;
        }
    }
    d.set_item("first_error", errors)?;
    let outcomes: Vec<(usize, &str)> = r
        .outcomes
        .iter()
        .map(|(n, o)| {
            let label = match o {
                ProbeOutcome::Ok { .. } => "ok",
                other => other.label(),
            };
            (*n, label)
        })
        .collect();
    d.set_item("outcomes", outcomes)?;
    Ok(d)
}

/// Recursion coefficients `(alpha_1..alpha_m, beta_2..beta_m)`.
#[pyfunction]
fn recursion_coeffs(weight: &str, m: usize) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let w: WeightId = parse_arg("weight", weight)?;
    let c = coeffs_for(w, m).map_err(to_py)?;
    Ok((c.alphas().to_vec(), c.betas().to_vec()))
}

/// Leading coefficient `kappa_n` as a `fractions.Fraction`.
#[pyfunction]
fn kappa<'py>(py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyAny>> {
    let k = kappa_exact(n).map_err(to_py)?;
    let int = py.import("builtins")?.getattr("int")?;
    let numer = int.call1((k.numer().to_string(),))?;
    let denom = int.call1((k.denom().to_string(),))?;
    py.import("fractions")?.getattr("Fraction")?.call1((numer, denom))
}

/// `[(id, formula, exact_integral), ...]` for the built-in test functions.
#[pyfunction]
fn list_functions() -> Vec<(&'static str, &'static str, f64)> {
    FunctionId::ALL
        .iter()
        .map(|&id| {
            let f = testbed::builtin(id);
            (id.as_str(), f.formula, f.exact_integral)
        })
        .collect()
}

#[pymodule]
fn idquad_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("QuadratureError", m.py().get_type::<QuadratureError>())?;
    m.add_class::<PyRule>()?;
    m.add_function(wrap_pyfunction!(build_rule, m)?)?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    m.add_function(wrap_pyfunction!(integrate_builtin, m)?)?;
    m.add_function(wrap_pyfunction!(error_table, m)?)?;
    m.add_function(wrap_pyfunction!(range_averages, m)?)?;
    m.add_function(wrap_pyfunction!(stability, m)?)?;
    m.add_function(wrap_pyfunction!(recursion_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(kappa, m)?)?;
    m.add_function(wrap_pyfunction!(list_functions, m)?)?;
    Ok(())
}
