//! Gauss, right-end Gauss-Radau and Gauss-Lobatto quadrature on `[0, 1]`
//! for the weight `w(t) = 1 - t`, built from closed-form rational
//! recursion coefficients, with the `w(t) = 1` rules alongside for comparison.
//!
//! ```
//! use idquad::{build_rule, apply_rule, Integrand, DerivativeSource, RuleKind, WeightId};
//!
//! let rule = build_rule(WeightId::Linear, RuleKind::Gauss, 2)?;
//! let f = Integrand::new(|x: f64| x.powi(4), 4.0, DerivativeSource::Exact);
//! // two free nodes integrate degree 4 exactly through the 1 - t transform
//! assert!((apply_rule(&rule, &f)? - 0.2).abs() < 1e-14);
//! # Ok::<(), idquad::QuadError>(())
//! ```

pub mod error;
pub mod expr;
pub mod identity_polys;
pub mod quadrature;
pub mod recursion;
pub mod report;
pub mod rule;
pub mod testbed;
pub mod tridiag;

pub use error::{QuadError, Result};
pub use quadrature::{
    apply_plain, apply_rule, f_omega, integrate, integrate_on, map_to_unit, reflect_left,
    DerivativeSource, Integrand,
};
pub use recursion::{
    coeffs_constant, coeffs_linear, lobatto_extension, radau_alpha, stieltjes_oracle,
    LobattoExtension, RecursionCoeffs, WeightId,
};
pub use rule::{build_rule, QuadratureRule, RuleKind};
pub use testbed::{builtin, error_table, percent_error, range_averages, stability_probe, FunctionId};
pub use tridiag::{eig_first_components, EigenPairs, JacobiMatrix};
