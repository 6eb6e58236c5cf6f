use thiserror::Error;

/// Errors raised while building or applying quadrature rules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("domain error: {0}")]
    Domain(String),

    /// `p_n(1)` evaluated to floating-point zero in the Radau modification.
    #[error("division by zero: p_{n}(1) evaluated to 0")]
    DivisionByZero { n: usize },

    /// The 2x2 Lobatto system has a vanishing determinant.
    #[error("singular Lobatto system at n = {n}: determinant evaluated to 0")]
    SingularSystem { n: usize },

    #[error("eigenvalue {index} did not converge")]
    NoConvergence { index: usize },

    #[error("non-finite value {value} at x = {x}")]
    NonFiniteValue { x: f64, value: f64 },

    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },

    #[error("reference value is zero")]
    ZeroReference,

    #[error("node {node} lies outside [0, 1]")]
    NodeOutOfRange { node: f64 },

    #[error("recursion coefficients cover indices up to {available}, need {needed}")]
    InsufficientCoeffs { needed: usize, available: usize },

    #[error("rule for weight {rule} cannot be applied with this method (expected {expected})")]
    WrongWeight {
        rule: &'static str,
        expected: &'static str,
    },

    #[error("unknown test function '{0}'")]
    UnknownFunction(String),

    #[error("exact integral {exact} of {id} disagrees with adaptive oracle value {oracle}")]
    OracleMismatch {
        id: &'static str,
        exact: f64,
        oracle: f64,
    },
}

impl QuadError {
    /// Short stable name of the failure, used in reports and CLI output.
    pub fn kind(&self) -> &'static str {
        match self {
            QuadError::Domain(_) => "Domain",
            QuadError::DivisionByZero { .. } => "DivisionByZero",
            QuadError::SingularSystem { .. } => "SingularSystem",
            QuadError::NoConvergence { .. } => "NoConvergence",
            QuadError::NonFiniteValue { .. } => "NonFiniteValue",
            QuadError::InvalidInterval { .. } => "InvalidInterval",
            QuadError::ZeroReference => "ZeroReference",
            QuadError::NodeOutOfRange { .. } => "NodeOutOfRange",
            QuadError::InsufficientCoeffs { .. } => "InsufficientCoeffs",
            QuadError::WrongWeight { .. } => "WrongWeight",
            QuadError::UnknownFunction(_) => "UnknownFunction",
            QuadError::OracleMismatch { .. } => "OracleMismatch",
        }
    }
}

pub type Result<T> = std::result::Result<T, QuadError>;
