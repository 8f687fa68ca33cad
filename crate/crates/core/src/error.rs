use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("resource error: {0}")]
    Resource(String),

    #[error("eigensolver did not converge for eigenvalue {index} after {iterations} iterations (matrix order {order})")]
    NoConvergence {
        index: usize,
        iterations: usize,
        order: usize,
    },

    #[error("quadrature rule construction failed: {0}")]
    Quadrature(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
