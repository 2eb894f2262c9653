use std::fmt;

/// Errors reported by the analysis routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A scalar or structural precondition failed (bad range, zero input, ...).
    Value(String),
    /// Matrix or vector dimensions do not line up.
    Dimension(String),
    /// An input that must be symmetric is not, beyond the accepted relative gap.
    Asymmetric { relative: f64 },
    /// A stability precondition failed; the message names the offending eigenvalue.
    Unstable(String),
    /// The real Schur iteration did not converge.
    SchurFailed,
    /// The operation is not defined for the system's time mode.
    UnsupportedMode(&'static str),
    /// The Gramian is too close to singular to invert for the requested target.
    UncontrollableTarget { rank: usize, dim: usize },
    /// A classical quality measure is undefined because the Gramian is singular.
    UndefinedMoq { rank: usize, dim: usize },
    /// The basis could not capture the required share of the control energy.
    TruncationFailed {
        captured: f64,
        required: f64,
        basis_len: usize,
    },
    /// The norm sequence violates the feasibility conditions; names the failed one.
    AlphaCondition(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Value(msg) => write!(f, "invalid value: {msg}"),
            Error::Dimension(msg) => write!(f, "dimension mismatch: {msg}"),
            Error::Asymmetric { relative } => write!(
                f,
                "matrix is not symmetric: relative asymmetry {relative:.3e} exceeds tolerance"
            ),
            Error::Unstable(msg) => write!(f, "stability requirement violated: {msg}"),
            Error::SchurFailed => write!(f, "real Schur decomposition did not converge"),
            Error::UnsupportedMode(op) => write!(f, "{op} is not supported in this time mode"),
            Error::UncontrollableTarget { rank, dim } => write!(
                f,
                "Gramian is numerically singular (rank {rank} of {dim}); target not reachable at the requested accuracy"
            ),
            Error::UndefinedMoq { rank, dim } => write!(
                f,
                "measure undefined: Gramian has numerical rank {rank} of {dim}"
            ),
            Error::TruncationFailed {
                captured,
                required,
                basis_len,
            } => write!(
                f,
                "basis of size {basis_len} captured energy {captured:.12e} < required {required:.12e}"
            ),
            Error::AlphaCondition(which) => {
                write!(f, "norm sequence violates feasibility condition: {which}")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
