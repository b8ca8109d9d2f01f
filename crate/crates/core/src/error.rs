use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("argument {arg} lies within {epsilon} of the branch cut")]
    OnCut { arg: f64, epsilon: f64 },

    #[error("pole of {0}")]
    Pole(&'static str),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("zero of g on the contour boundary after {attempts} attempts")]
    BoundaryZero { attempts: usize },

    #[error("phase tracking failed: {0}")]
    Quadrature(String),

    #[error("unsupported configuration: {0}")]
    UnsupportedConfig(String),

    #[error("eigenvalue {re}{im:+}i fails the residual check (relative residual {residual:e})")]
    Residual { re: f64, im: f64, residual: f64 },

    #[error("determinant paths disagree: relative deviation {deviation:e} exceeds {tolerance:e}")]
    Agreement { deviation: f64, tolerance: f64 },
}

impl Error {
    /// True for failures of an iterative solver (as opposed to bad input).
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::BoundaryZero { .. }
                | Error::Quadrature(_)
                | Error::UnsupportedConfig(_)
                | Error::Residual { .. }
        )
    }
}
