use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no solution: |λ̃| = {lambda} is not below the critical value λ̃_c ≈ {critical:.6}")]
    NoSolution { lambda: f64, critical: f64 },

    #[error("singular: {0}")]
    Singular(String),

    #[error("no convergence: {message} (last iterates: {trace:?})")]
    Convergence { message: String, trace: Vec<f64> },

    #[error("quadrature failed: achieved error estimate {estimate:e}, wanted {wanted:e}")]
    Quadrature { estimate: f64, wanted: f64 },

    #[error("ill-conditioned linear system: condition estimate {condition:e}")]
    Conditioning { condition: f64 },

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn singular(msg: impl Into<String>) -> Self {
        Error::Singular(msg.into())
    }

    /// Process exit code used by the command line: 2 for bad input or domain
    /// violations, 3 for everything numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Domain(_) | Error::NoSolution { .. } | Error::Singular(_) => 2,
            _ => 3,
        }
    }
}
