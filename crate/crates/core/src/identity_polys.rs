//! Identity-type polynomials `e_n`, their cofactors `e*_{n-1}` and the monic
//! family `p_{n-1}` orthogonal with respect to `1 - t` on `[0, 1]`.
//!
//! Everything here is exact (big-integer rationals) except
//! [`eval_by_recurrence`], which runs the floating-point three-term
//! recurrence and is allowed to underflow.
//!
//! The series for `e_n` uses the falling-factorial Pochhammer symbol
//! `(c)_m = c (c - 1) ... (c - m + 1)`:
//!
//! ```text
//! e_n(t) = sum_m (n)_m (-n)_m / (m!)^2 t^m
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{QuadError, Result};
use crate::recursion::RecursionCoeffs;

/// Polynomial with exact rational coefficients in ascending degree order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyCoeffs {
    coeffs: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl PolyCoeffs {
    /// Builds a polynomial and strips trailing zero coefficients.
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigRational::zero());
        }
        PolyCoeffs { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        Self::new(vec![])
    }

    pub fn one() -> Self {
        Self::new(vec![BigRational::one()])
    }

    /// The polynomial `t`.
    pub fn t() -> Self {
        Self::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &BigRational {
        self.coeffs.last().expect("nonempty")
    }

    /// Exact Horner evaluation.
    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * t + c)
    }

    /// Horner evaluation in binary64 after rounding each coefficient once.
    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = BigRational::zero();
        Self::new(
            (0..len)
                .map(|i| {
                    self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero)
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Synthetic division by `(1 - t)`, returning `(quotient, remainder)`.
    ///
    /// With `self = (1 - t) q + r`, `q_k = -(c_{k+1} + ... + c_n)` and the
    /// remainder equals `self(1)`.
    pub fn div_one_minus_t(&self) -> (Self, BigRational) {
        if self.degree() == 0 {
            return (Self::zero(), self.coeffs[0].clone());
        }
        let n = self.degree();
        let mut q = vec![BigRational::zero(); n];
        let mut acc = BigRational::zero();
        for k in (0..n).rev() {
            acc -= &self.coeffs[k + 1];
            q[k] = acc.clone();
        }
        let remainder = &self.coeffs[0] - &q[0];
        (Self::new(q), remainder)
    }

    /// Exact `integral_0^1 self(t) dt`.
    pub fn integrate_unit(&self) -> BigRational {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(d, c)| c / rat(d as i64 + 1))
            .fold(BigRational::zero(), |acc, x| acc + x)
    }
}

/// Leading coefficient `kappa_n` of `e_n`, equal to
/// `(-1)^n (2n-1)! / (n! (n-1)!)`.
///
/// Built from `kappa_1 = -1` and the ratio `kappa_{k+1} / kappa_k = -2(2k+1)/(k+1)`.
pub fn kappa(n: usize) -> Result<BigRational> {
    if n == 0 {
        return Err(QuadError::Domain("kappa_n requires n >= 1".into()));
    }
    let mut k_val = rat(-1);
    for k in 1..n {
        let k = k as i64;
        k_val *= BigRational::new(BigInt::from(-2 * (2 * k + 1)), BigInt::from(k + 1));
    }
    Ok(k_val)
}

/// Coefficients of the identity-type polynomial `e_n`, degree `n`.
pub fn e_coeffs(n: usize) -> PolyCoeffs {
    let n_i = n as i64;
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut c = BigRational::one();
    coeffs.push(c.clone());
    for m in 0..n_i {
        // (n)_{m+1} (-n)_{m+1} / ((m+1)!)^2 from the previous term
        let num = BigInt::from(n_i - m) * BigInt::from(-n_i - m);
        let den = BigInt::from((m + 1) * (m + 1));
        c *= BigRational::new(num, den);
        coeffs.push(c.clone());
    }
    PolyCoeffs::new(coeffs)
}

/// Cofactor `e*_n` with `e_{n+1}(t) = (1 - t) e*_n(t)`.
///
/// # Panics
///
/// Panics if the division leaves a remainder, which would mean the series
/// construction is broken.
pub fn e_star_coeffs(n: usize) -> PolyCoeffs {
    let (q, r) = e_coeffs(n + 1).div_one_minus_t();
    assert!(r.is_zero(), "e_{} is not divisible by (1 - t): remainder {r}", n + 1);
    q
}

/// Monic orthogonal polynomial `p_n = -e*_n / kappa_{n+1}`.
pub fn monic_p_coeffs(n: usize) -> PolyCoeffs {
    let k = kappa(n + 1).expect("n + 1 >= 1");
    e_star_coeffs(n).scale(&(-k.recip()))
}

/// `(p_{n-1}(0), p_{n-1}(1)) = (-1/kappa_n, (-1)^n n / kappa_n)`.
pub fn p_endpoints(n: usize) -> Result<(BigRational, BigRational)> {
    let inv = kappa(n)?.recip();
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    let at_zero = -inv.clone();
    let at_one = inv * rat(sign * n as i64);
    Ok((at_zero, at_one))
}

/// Evaluates `p_k(t)` by the forward three-term recurrence in binary64.
///
/// Needs `alpha_1..alpha_k` and `beta_2..beta_k` from `coeffs`. No rescaling
/// is applied, so large `k` can underflow to zero; callers depend on that.
pub fn eval_by_recurrence(coeffs: &RecursionCoeffs, k: usize, t: f64) -> f64 {
    eval_pair_by_recurrence(coeffs, k, t).1
}

/// Returns `(p_{k-1}(t), p_k(t))`, with `p_{-1} = 0`.
pub(crate) fn eval_pair_by_recurrence(coeffs: &RecursionCoeffs, k: usize, t: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for j in 0..k {
        let beta = if j == 0 { 0.0 } else { coeffs.beta(j + 1) };
        let next = (t - coeffs.alpha(j + 1)) * cur - beta * prev;
        prev = cur;
        cur = next;
    }
    (prev, cur)
}

/// Exact `<f, g>` against `1 / (1 - t)` for polynomials whose product is
/// divisible by `(1 - t)`; `None` otherwise.
pub fn inner_product_reciprocal_weight(f: &PolyCoeffs, g: &PolyCoeffs) -> Option<BigRational> {
    let (q, r) = f.mul(g).div_one_minus_t();
    if !r.is_zero() {
        return None;
    }
    Some(q.integrate_unit())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recursion::coeffs_linear;
    use num_traits::Signed;

    /// True when `x` is a nonzero rational whose sign is `(-1)^n`.
    fn has_alternating_sign(x: &BigRational, n: usize) -> bool {
        if n.is_multiple_of(2) {
            x.is_positive()
        } else {
            x.is_negative()
        }
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn kappa_small_values() {
        assert_eq!(kappa(1).unwrap(), rat(-1));
        assert_eq!(kappa(2).unwrap(), rat(3));
        assert_eq!(kappa(3).unwrap(), rat(-10));
        assert!(matches!(kappa(0), Err(QuadError::Domain(_))));
    }

    #[test]
    fn kappa_matches_factorial_formula_and_sign() {
        fn fact(n: u32) -> BigInt {
            (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
        }
        for n in 1..=60u32 {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            let expected = BigRational::new(
                BigInt::from(sign) * fact(2 * n - 1),
                fact(n) * fact(n - 1),
            );
            let k = kappa(n as usize).unwrap();
            assert_eq!(k, expected);
            assert!(has_alternating_sign(&k, n as usize));
            assert_eq!(&k, e_coeffs(n as usize).leading());
        }
    }

    #[test]
    fn e_star_listed_polynomials() {
        assert_eq!(e_star_coeffs(0), PolyCoeffs::from_ints(&[1]));
        assert_eq!(e_star_coeffs(1), PolyCoeffs::from_ints(&[1, -3]));
        assert_eq!(e_star_coeffs(2), PolyCoeffs::from_ints(&[1, -8, 10]));
    }

    #[test]
    fn e_n_exactly_divisible_by_one_minus_t() {
        for n in 1..=30 {
            let (_, r) = e_coeffs(n).div_one_minus_t();
            assert!(r.is_zero(), "n = {n}");
        }
    }

    #[test]
    fn monic_p_small_values() {
        assert_eq!(monic_p_coeffs(0), PolyCoeffs::from_ints(&[1]));
        assert_eq!(
            monic_p_coeffs(1),
            PolyCoeffs::new(vec![q(-1, 3), q(1, 1)])
        );
        assert_eq!(
            monic_p_coeffs(2),
            PolyCoeffs::new(vec![q(1, 10), q(-4, 5), q(1, 1)])
        );
        for n in 0..=25 {
            assert!(monic_p_coeffs(n).leading().is_one());
            assert_eq!(monic_p_coeffs(n).degree(), n);
        }
    }

    #[test]
    fn endpoints_small_values() {
        assert_eq!(p_endpoints(1).unwrap(), (q(1, 1), q(1, 1)));
        assert_eq!(p_endpoints(2).unwrap(), (q(-1, 3), q(2, 3)));
        assert_eq!(p_endpoints(3).unwrap(), (q(1, 10), q(3, 10)));
        assert!(p_endpoints(0).is_err());
    }

    #[test]
    fn endpoints_agree_with_direct_evaluation() {
        for n in 1..=30 {
            let p = monic_p_coeffs(n - 1);
            let (a, b) = p_endpoints(n).unwrap();
            assert_eq!(p.eval(&rat(0)), a, "p_{}(0)", n - 1);
            assert_eq!(p.eval(&rat(1)), b, "p_{}(1)", n - 1);
        }
    }

    #[test]
    fn recurrence_examples() {
        let c = coeffs_linear(4).unwrap();
        assert!((eval_by_recurrence(&c, 1, 0.0) + 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(eval_by_recurrence(&c, 0, 0.77), 1.0);
        assert!((eval_by_recurrence(&c, 2, 1.0) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn recurrence_matches_horner() {
        let c = coeffs_linear(21).unwrap();
        for k in 0..=20 {
            let p = monic_p_coeffs(k);
            for i in 0..64 {
                let t = i as f64 / 63.0;
                let horner = p.eval(&BigRational::from_float(t).unwrap());
                let horner = horner.to_f64().unwrap();
                let rec = eval_by_recurrence(&c, k, t);
                let scale = horner.abs().max(1e-300);
                assert!(
                    (rec - horner).abs() <= 1e-12 * scale.max(p_scale(k)),
                    "k={k} t={t} rec={rec} horner={horner}"
                );
            }
        }
    }

    // Size of p_k on [0,1]; relative comparison near a root uses this floor.
    fn p_scale(k: usize) -> f64 {
        p_endpoints(k + 1).unwrap().1.abs().to_f64().unwrap()
    }

    #[test]
    fn division_remainder_is_value_at_one() {
        let p = PolyCoeffs::from_ints(&[2, 3, 5]);
        let (quot, r) = p.div_one_minus_t();
        assert_eq!(r, rat(10));
        let back = PolyCoeffs::from_ints(&[1, -1]).mul(&quot).add(&PolyCoeffs::new(vec![r]));
        assert_eq!(back, p);
    }
}
