use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("quadrature did not converge: error estimate {err_estimate:e} above tolerance {tol:e} at depth {depth}")]
    NonConvergence {
        depth: usize,
        err_estimate: f64,
        tol: f64,
    },

    #[error("sample count {0} is not a power of two")]
    BadLength(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("|mu(z)| = {modulus} > 1 at z = {z}")]
    ValidationFailed { z: Complex64, modulus: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("{what}: value {value} exceeds bound {bound}")]
    InequalityViolated {
        what: String,
        value: f64,
        bound: f64,
        witness: Option<Complex64>,
    },

    #[error("degenerate edge at index {index}")]
    DegenerateEdge { index: usize },

    #[error("point {z} outside the evaluation disk |z| <= {limit}")]
    OutOfDomain { z: Complex64, limit: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonConvergence { .. } => 3,
            Error::InequalityViolated { .. } => 4,
            Error::Io(_) => 1,
            _ => 2,
        }
    }

    /// Short machine-readable tag.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonConvergence { .. } => "non_convergence",
            Error::BadLength(_) => "bad_length",
            Error::InvalidInput(_) => "invalid_input",
            Error::ValidationFailed { .. } => "validation_failed",
            Error::HypothesisViolated(_) => "hypothesis_violated",
            Error::InequalityViolated { .. } => "inequality_violated",
            Error::DegenerateEdge { .. } => "degenerate_edge",
            Error::OutOfDomain { .. } => "out_of_domain",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }

    /// Point in the plane that triggered the failure, when there is one.
    pub fn witness(&self) -> Option<Complex64> {
        match self {
            Error::ValidationFailed { z, .. } | Error::OutOfDomain { z, .. } => Some(*z),
            Error::InequalityViolated { witness, .. } => *witness,
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
