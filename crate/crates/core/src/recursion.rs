//! Recursion coefficients for the weights `1 - t` and `1` on `[0, 1]`,
//! together with the Radau and Lobatto modifications of the Jacobi matrix.
//!
//! Subscripts follow the three-term recurrence
//! `p_{k+1}(t) = (t - alpha_{k+1}) p_k(t) - beta_{k+1} p_{k-1}(t)`,
//! so `alpha(k)` is defined for `k >= 1` and `beta(k)` for `k >= 2`
//! (`beta_1 = 0` is never stored).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{QuadError, Result};
use crate::identity_polys::{eval_pair_by_recurrence, PolyCoeffs};

/// Weight function on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightId {
    /// `w(t) = 1 - t`
    Linear,
    /// `w(t) = 1`
    Constant,
}

impl WeightId {
    /// `integral_0^1 w(t) dt`.
    pub fn total_mass(self) -> f64 {
        match self {
            WeightId::Linear => 0.5,
            WeightId::Constant => 1.0,
        }
    }

    /// Exact moment `integral_0^1 t^d w(t) dt`.
    pub fn moment(self, d: usize) -> BigRational {
        let d = d as i64;
        match self {
            WeightId::Linear => BigRational::new(1.into(), ((d + 1) * (d + 2)).into()),
            WeightId::Constant => BigRational::new(1.into(), (d + 1).into()),
        }
    }

    /// Exact `<f, g>_w` for polynomials.
    pub fn inner_product(self, f: &PolyCoeffs, g: &PolyCoeffs) -> BigRational {
        f.mul(g)
            .coeffs()
            .iter()
            .enumerate()
            .fold(BigRational::zero(), |acc, (d, c)| acc + c * self.moment(d))
    }

    pub fn as_str(self) -> &'static str {
        match self {
            WeightId::Linear => "linear",
            WeightId::Constant => "constant",
        }
    }
}

impl fmt::Display for WeightId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WeightId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "linear" | "1-t" => Ok(WeightId::Linear),
            "constant" | "1" => Ok(WeightId::Constant),
            other => Err(format!("unknown weight '{other}' (expected linear or constant)")),
        }
    }
}

/// Floating-point recursion coefficients `alpha_1..alpha_m`, `beta_2..beta_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecursionCoeffs {
    weight: WeightId,
    alpha: Vec<f64>,
    // beta[k - 2] holds beta_k
    beta: Vec<f64>,
}

impl RecursionCoeffs {
    pub fn new(weight: WeightId, alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() || beta.len() + 1 != alpha.len() {
            return Err(QuadError::Domain(format!(
                "need m alphas and m - 1 betas, got {} and {}",
                alpha.len(),
                beta.len()
            )));
        }
        Ok(RecursionCoeffs {
            weight,
            alpha,
            beta,
        })
    }

    pub fn weight(&self) -> WeightId {
        self.weight
    }

    /// Highest subscript `m` covered.
    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// `alpha_k`, `1 <= k <= m`.
    pub fn alpha(&self, k: usize) -> f64 {
        self.alpha[k - 1]
    }

    /// `beta_k`, `2 <= k <= m`.
    pub fn beta(&self, k: usize) -> f64 {
        self.beta[k - 2]
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alpha
    }

    /// `beta_2..beta_m`.
    pub fn betas(&self) -> &[f64] {
        &self.beta
    }

    fn require(&self, needed: usize) -> Result<()> {
        if self.len() < needed {
            Err(QuadError::InsufficientCoeffs {
                needed,
                available: self.len(),
            })
        } else {
            Ok(())
        }
    }
}

/// Exact counterpart of [`RecursionCoeffs`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactRecursionCoeffs {
    pub weight: WeightId,
    /// `alpha_1..alpha_m`
    pub alpha: Vec<BigRational>,
    /// `beta_2..beta_m`
    pub beta: Vec<BigRational>,
}

impl ExactRecursionCoeffs {
    pub fn to_float(&self) -> RecursionCoeffs {
        let conv = |v: &[BigRational]| v.iter().map(|x| x.to_f64().unwrap()).collect();
        RecursionCoeffs {
            weight: self.weight,
            alpha: conv(&self.alpha),
            beta: conv(&self.beta),
        }
    }
}

/// Lobatto entries `(alpha^L_{n+2}, beta^L_{n+2})` appended to the Jacobi matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LobattoExtension {
    pub alpha: f64,
    pub beta: f64,
}

fn ratio(num: i128, den: i128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

// num/den rounded once; exact while both fit in 53 bits.
fn ratio_f64(num: u128, den: u128) -> f64 {
    if num < (1 << 53) && den < (1 << 53) {
        num as f64 / den as f64
    } else {
        ratio(num as i128, den as i128).to_f64().unwrap()
    }
}

fn linear_alpha_parts(k: u128) -> (u128, u128) {
    (2 * k * k - 1, 4 * k * k - 1)
}

fn linear_beta_parts(k: u128) -> (u128, u128) {
    ((k - 1) * k, 4 * (2 * k - 1) * (2 * k - 1))
}

fn constant_beta_parts(k: u128) -> (u128, u128) {
    ((k - 1) * (k - 1), 4 * (2 * k - 3) * (2 * k - 1))
}

fn check_m(m: usize) -> Result<()> {
    if m == 0 {
        Err(QuadError::Domain("need at least one recursion coefficient".into()))
    } else {
        Ok(())
    }
}

/// Closed-form coefficients for `w(t) = 1 - t`:
/// `alpha_k = (2k^2 - 1)/(4k^2 - 1)`, `beta_k = (k - 1)k / (4(2k - 1)^2)`.
pub fn coeffs_linear(m: usize) -> Result<RecursionCoeffs> {
    check_m(m)?;
    let alpha = (1..=m as u128)
        .map(|k| {
            let (n, d) = linear_alpha_parts(k);
            ratio_f64(n, d)
        })
        .collect();
    let beta = (2..=m as u128)
        .map(|k| {
            let (n, d) = linear_beta_parts(k);
            ratio_f64(n, d)
        })
        .collect();
    RecursionCoeffs::new(WeightId::Linear, alpha, beta)
}

/// Shifted-Legendre coefficients for `w(t) = 1`:
/// `alpha_k = 1/2`, `beta_k = (k - 1)^2 / (4(2k - 3)(2k - 1))`.
pub fn coeffs_constant(m: usize) -> Result<RecursionCoeffs> {
    check_m(m)?;
    let alpha = vec![0.5; m];
    let beta = (2..=m as u128)
        .map(|k| {
            let (n, d) = constant_beta_parts(k);
            ratio_f64(n, d)
        })
        .collect();
    RecursionCoeffs::new(WeightId::Constant, alpha, beta)
}

pub fn coeffs_for(weight: WeightId, m: usize) -> Result<RecursionCoeffs> {
    match weight {
        WeightId::Linear => coeffs_linear(m),
        WeightId::Constant => coeffs_constant(m),
    }
}

/// Exact closed-form coefficients for either weight.
pub fn coeffs_exact(weight: WeightId, m: usize) -> Result<ExactRecursionCoeffs> {
    check_m(m)?;
    let (alpha, beta) = match weight {
        WeightId::Linear => (
            (1..=m as u128)
                .map(|k| {
                    let (n, d) = linear_alpha_parts(k);
                    ratio(n as i128, d as i128)
                })
                .collect(),
            (2..=m as u128)
                .map(|k| {
                    let (n, d) = linear_beta_parts(k);
                    ratio(n as i128, d as i128)
                })
                .collect(),
        ),
        WeightId::Constant => (
            vec![ratio(1, 2); m],
            (2..=m as u128)
                .map(|k| {
                    let (n, d) = constant_beta_parts(k);
                    ratio(n as i128, d as i128)
                })
                .collect(),
        ),
    };
    Ok(ExactRecursionCoeffs {
        weight,
        alpha,
        beta,
    })
}

/// `1 - beta_{n+1} p_{n-1}(1) / p_n(1)`, or `None` when `p_n(1)` is zero.
pub fn radau_from_endpoints<T: Num + Clone>(beta_next: T, p_prev_at_one: T, p_at_one: T) -> Option<T> {
    if p_at_one.is_zero() {
        return None;
    }
    Some(T::one() - beta_next * p_prev_at_one / p_at_one)
}

/// Solves
///
/// ```text
/// [ p_{n+1}(0)  p_n(0) ] [ alpha ]   [    0       ]
/// [ p_{n+1}(1)  p_n(1) ] [ beta  ] = [ p_{n+1}(1) ]
/// ```
///
/// by Cramer's rule; `None` when the determinant is zero.
pub fn lobatto_from_endpoints<T: Num + Clone>(
    next_at_zero: T,
    cur_at_zero: T,
    next_at_one: T,
    cur_at_one: T,
) -> Option<(T, T)> {
    let det = next_at_zero.clone() * cur_at_one - next_at_one.clone() * cur_at_zero.clone();
    if det.is_zero() {
        return None;
    }
    let alpha = T::zero() - cur_at_zero * next_at_one.clone() / det.clone();
    let beta = next_at_zero * next_at_one / det;
    Some((alpha, beta))
}

/// Closed form `(3n^2 + 6n + 2) / (4n^2 + 6n + 2)` for the linear weight.
pub fn linear_radau_exact(n: usize) -> BigRational {
    let n = n as i128;
    ratio(3 * n * n + 6 * n + 2, 4 * n * n + 6 * n + 2)
}

/// Closed form `((n + 2)/(2n + 3), (n + 2)^2 / (2(2n + 3)^2))` for the linear weight.
pub fn linear_lobatto_exact(n: usize) -> (BigRational, BigRational) {
    let n = n as i128;
    (
        ratio(n + 2, 2 * n + 3),
        ratio((n + 2) * (n + 2), 2 * (2 * n + 3) * (2 * n + 3)),
    )
}

/// Last diagonal entry `alpha^R_{n+1}` of the right-end Radau matrix.
///
/// The linear weight uses its closed form. The constant weight goes through
/// the generic formula with `p_{n-1}(1)` and `p_n(1)` from the unscaled
/// recurrence, and fails once `p_n(1)` underflows to zero.
pub fn radau_alpha(coeffs: &RecursionCoeffs, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(QuadError::Domain("Radau rule needs n >= 1".into()));
    }
    coeffs.require(n + 1)?;
    match coeffs.weight() {
        WeightId::Linear => {
            let n = n as u128;
            Ok(ratio_f64(3 * n * n + 6 * n + 2, 4 * n * n + 6 * n + 2))
        }
        WeightId::Constant => {
            let (prev, cur) = eval_pair_by_recurrence(coeffs, n, 1.0);
            radau_from_endpoints(coeffs.beta(n + 1), prev, cur)
                .ok_or(QuadError::DivisionByZero { n })
        }
    }
}

/// Lobatto entries `(alpha^L_{n+2}, beta^L_{n+2})`.
///
/// The constant weight solves the 2x2 system with unscaled recurrence
/// values and fails once the determinant underflows to zero.
pub fn lobatto_extension(coeffs: &RecursionCoeffs, n: usize) -> Result<LobattoExtension> {
    if n == 0 {
        return Err(QuadError::Domain("Lobatto rule needs n >= 1".into()));
    }
    coeffs.require(n + 1)?;
    match coeffs.weight() {
        WeightId::Linear => {
            let n = n as u128;
            Ok(LobattoExtension {
                alpha: ratio_f64(n + 2, 2 * n + 3),
                beta: ratio_f64((n + 2) * (n + 2), 2 * (2 * n + 3) * (2 * n + 3)),
            })
        }
        WeightId::Constant => {
            let (cur0, next0) = eval_pair_by_recurrence(coeffs, n + 1, 0.0);
            let (cur1, next1) = eval_pair_by_recurrence(coeffs, n + 1, 1.0);
            let (alpha, beta) = lobatto_from_endpoints(next0, cur0, next1, cur1)
                .ok_or(QuadError::SingularSystem { n })?;
            Ok(LobattoExtension { alpha, beta })
        }
    }
}

/// Exact Stieltjes procedure: coefficients from inner-product quotients,
/// building each `p_k` from the recurrence and integrating exactly.
pub fn stieltjes_oracle(weight: WeightId, m: usize) -> Result<ExactRecursionCoeffs> {
    check_m(m)?;
    let t = PolyCoeffs::t();
    let mut alpha = Vec::with_capacity(m);
    let mut beta = Vec::with_capacity(m - 1);
    let mut prev = PolyCoeffs::zero();
    let mut cur = PolyCoeffs::one();
    let mut prev_norm: Option<BigRational> = None;
    for k in 0..m {
        let norm = weight.inner_product(&cur, &cur);
        let a = weight.inner_product(&t.mul(&cur), &cur) / &norm;
        let b = match &prev_norm {
            Some(pn) => {
                let b = &norm / pn;
                beta.push(b.clone());
                b
            }
            None => BigRational::zero(),
        };
        alpha.push(a.clone());
        if k + 1 < m {
            let shifted = t.sub(&PolyCoeffs::new(vec![a]));
            let next = shifted.mul(&cur).sub(&prev.scale(&b));
            prev = std::mem::replace(&mut cur, next);
        }
        prev_norm = Some(norm);
    }
    Ok(ExactRecursionCoeffs {
        weight,
        alpha,
        beta,
    })
}
