//! Applying rules to integrands.
//!
//! Rules for `w(t) = 1 - t` are applied through
//!
//! ```text
//! integral_0^1 f = f(1) - integral_0^1 f_w(t) (1 - t) dt,
//! f_w(t) = (f(t) - f(1)) / (t - 1),   f_w(1) = f'(1)
//! ```
//!
//! so a node at `t = 1` contributes through `f'(1)` and a node at `t = 0`
//! through `f(1) - f(0)`. Rules for `w(t) = 1` are plain weighted sums.

use std::fmt;
use std::sync::Arc;

use crate::error::{QuadError, Result};
use crate::recursion::WeightId;
use crate::rule::QuadratureRule;

/// Distance from 1 below which `f_w(t)` is replaced by `f'(1)`.
pub const OMEGA_SWITCH: f64 = 1.0 / (1u64 << 26) as f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeSource {
    Exact,
    FiniteDifference,
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A real function on `[0, 1]` together with its derivative at 1.
#[derive(Clone)]
pub struct Integrand {
    value: RealFn,
    deriv_at_1: f64,
    source: DerivativeSource,
}

impl fmt::Debug for Integrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Integrand")
            .field("deriv_at_1", &self.deriv_at_1)
            .field("source", &self.source)
            .finish_non_exhaustive()
    }
}

impl Integrand {
    pub fn new(
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv_at_1: f64,
        source: DerivativeSource,
    ) -> Self {
        Integrand {
            value: Arc::new(value),
            deriv_at_1,
            source,
        }
    }

    /// Evaluates `f(t)`, rejecting non-finite results.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let v = (self.value)(t);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadError::NonFiniteValue { x: t, value: v })
        }
    }

    pub fn deriv_at_1(&self) -> Result<f64> {
        if self.deriv_at_1.is_finite() {
            Ok(self.deriv_at_1)
        } else {
            Err(QuadError::NonFiniteValue {
                x: 1.0,
                value: self.deriv_at_1,
            })
        }
    }

    pub fn source(&self) -> DerivativeSource {
        self.source
    }

    /// `a f + b g`, derivative combined the same way.
    pub fn linear_combination(a: f64, f: &Integrand, b: f64, g: &Integrand) -> Integrand {
        let (fv, gv) = (f.value.clone(), g.value.clone());
        let source = if f.source == DerivativeSource::Exact && g.source == DerivativeSource::Exact {
            DerivativeSource::Exact
        } else {
            DerivativeSource::FiniteDifference
        };
        Integrand {
            value: Arc::new(move |t| a * fv(t) + b * gv(t)),
            deriv_at_1: a * f.deriv_at_1 + b * g.deriv_at_1,
            source,
        }
    }
}

fn f_omega_with(f: &Integrand, f_at_1: f64, t: f64) -> Result<f64> {
    if t >= 1.0 - OMEGA_SWITCH {
        f.deriv_at_1()
    } else {
        Ok((f.eval(t)? - f_at_1) / (t - 1.0))
    }
}

/// `f_w(t) = (f(t) - f(1)) / (t - 1)`, with `f'(1)` within
/// [`OMEGA_SWITCH`] of 1.
pub fn f_omega(f: &Integrand, t: f64) -> Result<f64> {
    f_omega_with(f, f.eval(1.0)?, t)
}

/// `f(1) - sum_i v_i f_w(t_i)` for a rule built for `w(t) = 1 - t`.
pub fn apply_rule(rule: &QuadratureRule, f: &Integrand) -> Result<f64> {
    if rule.weight() != WeightId::Linear {
        return Err(QuadError::WrongWeight {
            rule: rule.weight().as_str(),
            expected: "linear",
        });
    }
    let f1 = f.eval(1.0)?;
    let mut sum = 0.0;
    for (t, v) in rule.iter() {
        sum += v * f_omega_with(f, f1, t)?;
    }
    Ok(f1 - sum)
}

/// `sum_i v_i f(t_i)` for a rule built for `w(t) = 1`.
pub fn apply_plain(rule: &QuadratureRule, f: &Integrand) -> Result<f64> {
    if rule.weight() != WeightId::Constant {
        return Err(QuadError::WrongWeight {
            rule: rule.weight().as_str(),
            expected: "constant",
        });
    }
    let mut sum = 0.0;
    for (t, v) in rule.iter() {
        sum += v * f.eval(t)?;
    }
    Ok(sum)
}

/// Approximates `integral_0^1 f` with whichever applier matches the rule's weight.
pub fn integrate(rule: &QuadratureRule, f: &Integrand) -> Result<f64> {
    match rule.weight() {
        WeightId::Linear => apply_rule(rule, f),
        WeightId::Constant => apply_plain(rule, f),
    }
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if a.is_finite() && b.is_finite() && a < b {
        Ok(())
    } else {
        Err(QuadError::InvalidInterval { a, b })
    }
}

/// Maps `g` on `[a, b]` to `f(t) = (b - a) g((b - a) t + a)` on `[0, 1]`.
///
/// `deriv_at_b` is `g'(b)`; the mapped derivative is `(b - a)^2 g'(b)`.
pub fn map_to_unit(
    a: f64,
    b: f64,
    g: impl Fn(f64) -> f64 + Send + Sync + 'static,
    deriv_at_b: f64,
    source: DerivativeSource,
) -> Result<Integrand> {
    check_interval(a, b)?;
    let h = b - a;
    Ok(Integrand::new(move |t| h * g(h * t + a), h * h * deriv_at_b, source))
}

/// Approximates `integral_a^b g` by mapping onto `[0, 1]`.
pub fn integrate_on(
    a: f64,
    b: f64,
    g: impl Fn(f64) -> f64 + Send + Sync + 'static,
    deriv_at_b: f64,
    source: DerivativeSource,
    rule: &QuadratureRule,
) -> Result<f64> {
    integrate(rule, &map_to_unit(a, b, g, deriv_at_b, source)?)
}

/// Reflects `g` so the rules' fixed node at 1 serves the left end point:
/// `f(t) = g(1 - t)`, `f'(1) = -g'(0)`.
pub fn reflect_left(
    g: impl Fn(f64) -> f64 + Send + Sync + 'static,
    deriv_at_0: f64,
    source: DerivativeSource,
) -> Integrand {
    Integrand::new(move |t| g(1.0 - t), -deriv_at_0, source)
}
