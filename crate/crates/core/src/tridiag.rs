//! Symmetric tridiagonal eigenproblem for Golub-Welsch rules.
//!
//! Implicit QL with Wilkinson shifts. Only the first row of the eigenvector
//! matrix is rotated, which is all a quadrature rule needs and keeps the
//! solve at `O(m^2)`.

use crate::error::{QuadError, Result};

/// Maximum implicit-shift sweeps spent on one eigenvalue.
pub const MAX_SWEEPS: usize = 50;

/// Symmetric tridiagonal matrix stored as its diagonal and positive
/// off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiMatrix {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl JacobiMatrix {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(QuadError::Domain(format!(
                "Jacobi matrix needs m diagonal and m - 1 off-diagonal entries, got {} and {}",
                diag.len(),
                offdiag.len()
            )));
        }
        if let Some(&x) = diag.iter().find(|x| !x.is_finite()) {
            return Err(QuadError::Domain(format!("non-finite diagonal entry {x}")));
        }
        if let Some(&x) = offdiag.iter().find(|&&x| !(x.is_finite() && x > 0.0)) {
            return Err(QuadError::Domain(format!(
                "off-diagonal entries must be positive and finite, got {x}"
            )));
        }
        Ok(JacobiMatrix { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// Leading `k x k` principal submatrix.
    pub fn leading(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.dim() {
            return Err(QuadError::Domain(format!("invalid submatrix size {k}")));
        }
        Ok(JacobiMatrix {
            diag: self.diag[..k].to_vec(),
            offdiag: self.offdiag[..k - 1].to_vec(),
        })
    }
}

/// Eigenvalues in ascending order with the squared first components of the
/// matching normalized eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub first_comp_sq: Vec<f64>,
}

pub fn eig_first_components(j: &JacobiMatrix) -> Result<EigenPairs> {
    let m = j.dim();
    let mut d = j.diag.clone();
    let mut e = j.offdiag.clone();
    e.push(0.0);
    let mut z = vec![0.0; m];
    z[0] = 1.0;

    for l in 0..m {
        let mut sweeps = 0;
        loop {
            let mut mm = l;
            while mm < m - 1 {
                let dd = d[mm].abs() + d[mm + 1].abs();
                if e[mm].abs() <= f64::EPSILON * dd {
                    break;
                }
                mm += 1;
            }
            if mm == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(QuadError::NoConvergence { index: l });
            }

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[mm] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = mm;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[mm] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;

                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[mm] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    Ok(EigenPairs {
        values: order.iter().map(|&i| d[i]).collect(),
        first_comp_sq: order.iter().map(|&i| z[i] * z[i]).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn one_by_one() {
        let j = JacobiMatrix::new(vec![1.0 / 3.0], vec![]).unwrap();
        let e = eig_first_components(&j).unwrap();
        assert_eq!(e.values, vec![1.0 / 3.0]);
        assert_eq!(e.first_comp_sq, vec![1.0]);
    }

    #[test]
    fn two_by_two_linear_weight() {
        let j = JacobiMatrix::new(vec![1.0 / 3.0, 7.0 / 15.0], vec![(1.0f64 / 18.0).sqrt()]).unwrap();
        let e = eig_first_components(&j).unwrap();
        // closed form: lambda = 2/5 -/+ sqrt(0.24)/2, u1^2 = b / (b + (lambda - a1)^2)
        let disc = 0.24f64.sqrt() / 2.0;
        let lam = [0.4 - disc, 0.4 + disc];
        let b = 1.0 / 18.0;
        for (i, &l) in lam.iter().enumerate() {
            assert_abs_diff_eq!(e.values[i], l, epsilon = 1e-14);
            let u = b / (b + (l - 1.0 / 3.0).powi(2));
            assert_abs_diff_eq!(e.first_comp_sq[i], u, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(e.values[0], 0.1550510, epsilon = 1e-6);
        assert_abs_diff_eq!(e.values[1], 0.6449490, epsilon = 1e-6);
        assert_abs_diff_eq!(e.first_comp_sq[0], 0.6360828, epsilon = 1e-6);
        assert_abs_diff_eq!(e.first_comp_sq[1], 0.3639172, epsilon = 1e-6);
    }

    #[test]
    fn two_by_two_legendre() {
        let j = JacobiMatrix::new(vec![0.5, 0.5], vec![(1.0f64 / 12.0).sqrt()]).unwrap();
        let e = eig_first_components(&j).unwrap();
        let h = 0.5 / 3.0f64.sqrt();
        assert_abs_diff_eq!(e.values[0], 0.5 - h, epsilon = 1e-12);
        assert_abs_diff_eq!(e.values[1], 0.5 + h, epsilon = 1e-12);
        assert_abs_diff_eq!(e.first_comp_sq[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(e.first_comp_sq[1], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn rejects_invalid_matrices() {
        assert!(JacobiMatrix::new(vec![], vec![]).is_err());
        assert!(JacobiMatrix::new(vec![1.0, 2.0], vec![]).is_err());
        assert!(JacobiMatrix::new(vec![1.0, 2.0], vec![0.0]).is_err());
        assert!(JacobiMatrix::new(vec![1.0, f64::NAN], vec![1.0]).is_err());
    }

    /// Number of eigenvalues below `x` via the Sturm sequence of leading minors.
    fn count_below(j: &JacobiMatrix, x: f64) -> usize {
        let (d, e) = (j.diag(), j.offdiag());
        let mut q = d[0] - x;
        let mut count = usize::from(q < 0.0);
        for i in 1..d.len() {
            let qq = if q == 0.0 { f64::EPSILON } else { q };
            q = d[i] - x - e[i - 1] * e[i - 1] / qq;
            count += usize::from(q < 0.0);
        }
        count
    }

    fn bisection_eigenvalues(j: &JacobiMatrix) -> Vec<f64> {
        let (d, e) = (j.diag(), j.offdiag());
        let radius = |i: usize| {
            let left = if i > 0 { e[i - 1] } else { 0.0 };
            let right = if i < e.len() { e[i] } else { 0.0 };
            left + right
        };
        let lo = (0..d.len()).map(|i| d[i] - radius(i)).fold(f64::INFINITY, f64::min) - 1.0;
        let hi = (0..d.len()).map(|i| d[i] + radius(i)).fold(f64::NEG_INFINITY, f64::max) + 1.0;
        (0..d.len())
            .map(|k| {
                let (mut a, mut b) = (lo, hi);
                for _ in 0..200 {
                    let mid = 0.5 * (a + b);
                    if count_below(j, mid) > k {
                        b = mid;
                    } else {
                        a = mid;
                    }
                }
                0.5 * (a + b)
            })
            .collect()
    }

    fn jacobi_strategy(max_m: usize) -> impl Strategy<Value = JacobiMatrix> {
        (1..=max_m).prop_flat_map(|m| {
            (
                prop::collection::vec(-2.0f64..2.0, m),
                prop::collection::vec(0.01f64..1.5, m - 1),
            )
                .prop_map(|(d, e)| JacobiMatrix::new(d, e).unwrap())
        })
    }

    proptest! {
        #[test]
        fn trace_and_first_row_norm(j in jacobi_strategy(200)) {
            let e = eig_first_components(&j).unwrap();
            let m = j.dim() as f64;
            let trace: f64 = j.diag().iter().sum();
            let sum: f64 = e.values.iter().sum();
            prop_assert!((trace - sum).abs() <= 1e-12 * m.max(1.0) * 4.0);
            let norm: f64 = e.first_comp_sq.iter().sum();
            prop_assert!((norm - 1.0).abs() <= 1e-12);
            prop_assert!(e.values.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(e.first_comp_sq.iter().all(|&u| (0.0..=1.0 + 1e-15).contains(&u)));
        }

        #[test]
        fn interlacing(j in jacobi_strategy(50)) {
            prop_assume!(j.dim() >= 2);
            let full = eig_first_components(&j).unwrap().values;
            let sub = eig_first_components(&j.leading(j.dim() - 1).unwrap()).unwrap().values;
            for (i, s) in sub.iter().enumerate() {
                prop_assert!(full[i] - 1e-13 < *s && *s < full[i + 1] + 1e-13);
            }
        }

        #[test]
        fn matches_sturm_bisection(j in jacobi_strategy(8)) {
            let ql = eig_first_components(&j).unwrap().values;
            let bis = bisection_eigenvalues(&j);
            for (a, b) in ql.iter().zip(&bis) {
                prop_assert!((a - b).abs() < 1e-12, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn large_matrix_solves_quickly() {
        let m = 2000;
        let diag = vec![0.5; m];
        let off: Vec<f64> = (2..=m).map(|k| {
            let k = k as f64;
            ((k - 1.0) * (k - 1.0) / (4.0 * (2.0 * k - 3.0) * (2.0 * k - 1.0))).sqrt()
        }).collect();
        let j = JacobiMatrix::new(diag, off).unwrap();
        let start = std::time::Instant::now();
        let e = eig_first_components(&j).unwrap();
        assert!(start.elapsed().as_secs_f64() < 10.0);
        let total: f64 = e.first_comp_sq.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
