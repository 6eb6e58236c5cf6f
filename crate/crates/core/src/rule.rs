//! Gauss, right-end Gauss-Radau and Gauss-Lobatto rules from modified
//! Jacobi matrices.
//!
//! `n` always counts free nodes: a Gauss rule has `n` nodes, a Radau rule
//! `n + 1` (one fixed at 1) and a Lobatto rule `n + 2` (fixed at 0 and 1).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{QuadError, Result};
use crate::recursion::{coeffs_for, lobatto_extension, radau_alpha, WeightId};
use crate::tridiag::{eig_first_components, JacobiMatrix};

/// Eigenvalues this close outside `[0, 1]` are clamped onto the boundary.
pub const NODE_CLAMP_TOL: f64 = 1e-12;

/// Distance within which a computed fixed node is replaced by its exact value.
pub const FIXED_NODE_SNAP_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleKind {
    Gauss,
    /// Gauss-Radau with the fixed node at the right end point.
    #[serde(rename = "radau")]
    RadauRight,
    Lobatto,
}

impl RuleKind {
    pub const ALL: [RuleKind; 3] = [RuleKind::Gauss, RuleKind::RadauRight, RuleKind::Lobatto];

    pub fn node_count(self, n: usize) -> usize {
        match self {
            RuleKind::Gauss => n,
            RuleKind::RadauRight => n + 1,
            RuleKind::Lobatto => n + 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RuleKind::Gauss => "gauss",
            RuleKind::RadauRight => "radau",
            RuleKind::Lobatto => "lobatto",
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RuleKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gauss" => Ok(RuleKind::Gauss),
            "radau" | "radau-right" => Ok(RuleKind::RadauRight),
            "lobatto" => Ok(RuleKind::Lobatto),
            other => Err(format!(
                "unknown rule kind '{other}' (expected gauss, radau or lobatto)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureRule {
    weight: WeightId,
    kind: RuleKind,
    free_nodes: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn weight(&self) -> WeightId {
        self.weight
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn free_nodes(&self) -> usize {
        self.free_nodes
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `sum_i v_i q(t_i)`, the weighted sum against the rule's own weight.
    pub fn weighted_sum(&self, q: impl Fn(f64) -> f64) -> f64 {
        self.iter().map(|(t, v)| v * q(t)).sum()
    }

    /// Checks the structural invariants; returns the list of violations.
    pub fn violations(&self, sum_tol: f64, fixed_tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        if self.nodes.len() != self.kind.node_count(self.free_nodes) {
            out.push(format!("node count {} for n = {}", self.nodes.len(), self.free_nodes));
        }
        if !self.nodes.windows(2).all(|w| w[0] < w[1]) {
            out.push("nodes not strictly increasing".into());
        }
        if self.nodes.iter().any(|&t| !(0.0..=1.0).contains(&t)) {
            out.push("node outside [0, 1]".into());
        }
        if self.weights.iter().any(|&v| v.is_nan() || v <= 0.0) {
            out.push("non-positive weight".into());
        }
        let sum: f64 = self.weights.iter().sum();
        let mass = self.weight.total_mass();
        if (sum - mass).abs() > sum_tol {
            out.push(format!("weight sum {sum} differs from {mass}"));
        }
        let last = self.nodes.last().copied().unwrap_or(f64::NAN);
        let first = self.nodes.first().copied().unwrap_or(f64::NAN);
        let off = |x: f64| x.is_nan() || x.abs() > fixed_tol;
        match self.kind {
            RuleKind::Gauss => {}
            RuleKind::RadauRight => {
                if off(last - 1.0) {
                    out.push(format!("fixed node {last} is not 1"));
                }
            }
            RuleKind::Lobatto => {
                if off(last - 1.0) {
                    out.push(format!("fixed node {last} is not 1"));
                }
                if off(first) {
                    out.push(format!("fixed node {first} is not 0"));
                }
            }
        }
        out
    }
}

/// Assembles the Jacobi matrix for `(weight, kind, n)`.
pub fn jacobi_matrix(weight: WeightId, kind: RuleKind, n: usize) -> Result<JacobiMatrix> {
    if n == 0 {
        return Err(QuadError::Domain("need at least one free node".into()));
    }
    let m = kind.node_count(n);
    let coeffs = coeffs_for(weight, m.min(n + 1))?;
    let mut diag: Vec<f64> = coeffs.alphas()[..n].to_vec();
    let mut off: Vec<f64> = coeffs.betas()[..n - 1].iter().map(|b| b.sqrt()).collect();
    match kind {
        RuleKind::Gauss => {}
        RuleKind::RadauRight => {
            diag.push(radau_alpha(&coeffs, n)?);
            off.push(coeffs.beta(n + 1).sqrt());
        }
        RuleKind::Lobatto => {
            let ext = lobatto_extension(&coeffs, n)?;
            diag.push(coeffs.alpha(n + 1));
            off.push(coeffs.beta(n + 1).sqrt());
            diag.push(ext.alpha);
            if ext.beta.is_nan() || ext.beta <= 0.0 {
                return Err(QuadError::SingularSystem { n });
            }
            off.push(ext.beta.sqrt());
        }
    }
    JacobiMatrix::new(diag, off)
}

/// Builds the rule: nodes are the Jacobi eigenvalues and weights are
/// `total_mass * u_{i,1}^2`.
pub fn build_rule(weight: WeightId, kind: RuleKind, n: usize) -> Result<QuadratureRule> {
    let j = jacobi_matrix(weight, kind, n)?;
    let eig = eig_first_components(&j)?;
    let mass = weight.total_mass();
    let mut values = eig.values;
    // prescribed end points are known exactly; keep rounding residue such as
    // 5e-18 out of integrands that are steep at the end point
    let last = values.len() - 1;
    if kind != RuleKind::Gauss && (values[last] - 1.0).abs() <= FIXED_NODE_SNAP_TOL {
        values[last] = 1.0;
    }
    if kind == RuleKind::Lobatto && values[0].abs() <= FIXED_NODE_SNAP_TOL {
        values[0] = 0.0;
    }
    let nodes = values
        .iter()
        .map(|&t| {
            if (-NODE_CLAMP_TOL..0.0).contains(&t) {
                Ok(0.0)
            } else if t > 1.0 && t <= 1.0 + NODE_CLAMP_TOL {
                Ok(1.0)
            } else if (0.0..=1.0).contains(&t) {
                Ok(t)
            } else {
                Err(QuadError::NodeOutOfRange { node: t })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let weights = eig.first_comp_sq.iter().map(|u| mass * u).collect();
    Ok(QuadratureRule {
        weight,
        kind,
        free_nodes: n,
        nodes,
        weights,
    })
}
