use thiserror::Error;

use crate::spectral::Verdict;

/// Errors produced by tensor construction and the numerical routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("tensor is not frontal square: slices are {m}x{n}")]
    NotFrontalSquare { m: usize, n: usize },

    #[error("matrix is not block circulant (relative residual {residual:.3e})")]
    NotCirculant { residual: f64 },

    #[error("`{arg}` is not T-positive definite ({verdict:?}, lambda_min = {lambda_min:.6e})")]
    NotTpd {
        arg: String,
        verdict: Verdict,
        lambda_min: f64,
    },

    #[error("`{arg}` is not T-Hermitian (relative residual {residual:.3e})")]
    NotTHermitian { arg: String, residual: f64 },

    #[error("tensor is singular (Fourier block {block} has no inverse)")]
    SingularTensor { block: usize },

    #[error("parameter t = {0} outside [0, 1]")]
    ParameterOutOfRange(f64),

    #[error("matrix is not Hermitian (relative residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive definite (lambda_min = {lambda_min:.6e})")]
    NotPd { lambda_min: f64 },

    #[error("dense oracle refuses dimension {dim} (cap {cap})")]
    OracleTooLarge { dim: usize, cap: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("tensor format: {0}")]
    Format(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// True for errors describing the mathematical domain of the inputs
    /// (not positive definite, not Hermitian, singular) rather than malformed data.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::NotTpd { .. }
                | Error::NotTHermitian { .. }
                | Error::SingularTensor { .. }
                | Error::NotHermitian { .. }
                | Error::NotPd { .. }
                | Error::ParameterOutOfRange(_)
        )
    }

    /// Replaces the argument name carried by `NotTpd` / `NotTHermitian`.
    pub fn with_arg(self, name: &str) -> Self {
        match self {
            Error::NotTpd {
                verdict,
                lambda_min,
                ..
            } => Error::NotTpd {
                arg: name.to_string(),
                verdict,
                lambda_min,
            },
            Error::NotTHermitian { residual, .. } => Error::NotTHermitian {
                arg: name.to_string(),
                residual,
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
