use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: {left} vs {right}")]
    DimensionMismatch {
        context: &'static str,
        left: usize,
        right: usize,
    },

    #[error("non-finite value produced in {context}")]
    NumericOverflow { context: &'static str },

    #[error("{map} is undefined at {value} (coordinate {index})")]
    Domain {
        map: &'static str,
        value: f64,
        index: usize,
    },

    #[error("empty box: lower bound {lower} exceeds upper bound {upper} in coordinate {index}")]
    EmptyBox {
        index: usize,
        lower: f64,
        upper: f64,
    },

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: String,
    },

    #[error("spectral radius estimate did not converge after {iterations} iterations (last estimate {estimate})")]
    SpectralNotConverged { iterations: usize, estimate: f64 },

    #[error("trace record {index} carries no Lyapunov value")]
    MissingLyapunov { index: usize },

    #[error("{0}")]
    InvalidProblem(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn ensure_dims(context: &'static str, left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context,
            left,
            right,
        })
    }
}
