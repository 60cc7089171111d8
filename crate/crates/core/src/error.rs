use thiserror::Error;

/// Errors raised by the library.
///
/// The variants are grouped so that front ends can map them onto exit
/// codes: validation problems, numeric convergence failures and internal
/// consistency failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("ambient mismatch: {0}")]
    Mismatch(String),

    #[error("integer overflow while accumulating {0}")]
    Overflow(&'static str),

    #[error("numeric failure: {message} (residual {residual:e})")]
    Numeric { message: String, residual: f64 },

    #[error("plaquette ({s}, {t}) has eigenangle {angle:.4} turns; refine the mesh")]
    BranchCut { s: usize, t: usize, angle: f64 },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn mismatch(msg: impl Into<String>) -> Self {
        Error::Mismatch(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>, residual: f64) -> Self {
        Error::Numeric {
            message: msg.into(),
            residual,
        }
    }

    /// Coarse classification used by the CLI for exit codes.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Validation(_) | Error::Mismatch(_) => ErrorKind::Validation,
            Error::Numeric { .. } | Error::BranchCut { .. } => ErrorKind::Numeric,
            Error::Overflow(_) | Error::Consistency(_) => ErrorKind::Consistency,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Numeric,
    Consistency,
}

pub type Result<T> = std::result::Result<T, Error>;
