use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at {0}")]
    Pole(f64),
    #[error("{what}: argument {arg} outside the domain")]
    Domain { what: &'static str, arg: f64 },
    #[error("series did not converge within {terms} terms")]
    NonConvergence { terms: usize },
    #[error("overflow while evaluating {0}")]
    Overflow(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("inadmissible contour: {0}")]
    Contour(String),
    #[error("quadrature failure: {0}")]
    Quadrature(String),
    #[error("operation requires the {0} family")]
    FamilyMismatch(&'static str),
    #[error("truncation error {achieved:e} above {required:e} at n_max = {n_max}")]
    Truncation {
        n_max: usize,
        achieved: f64,
        required: f64,
    },
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error("series diverges at |z| = {0}")]
    Divergence(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
