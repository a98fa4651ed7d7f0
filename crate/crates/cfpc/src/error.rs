//! Error type shared by all modules.

use std::fmt;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the solver stack.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Invalid parameter or argument outside its mathematical domain.
    Domain(String),
    /// A right-hand side or scheme produced a non-finite value.
    Evaluation(String),
    /// A stateful update was applied out of order.
    State(String),
    /// A linear system could not be assembled (zero diagonal entry).
    Assembly(String),
    /// Zero pivot met during tridiagonal elimination.
    SingularMatrix { row: usize },
    /// An adaptive procedure hit its refinement cap before converging.
    Convergence(String),
    /// Mismatched grid or array dimensions.
    Dimension(String),
    /// Invalid command-line flag combination.
    Usage(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Evaluation(msg) => write!(f, "evaluation error: {msg}"),
            Error::State(msg) => write!(f, "state error: {msg}"),
            Error::Assembly(msg) => write!(f, "assembly error: {msg}"),
            Error::SingularMatrix { row } => {
                write!(f, "singular matrix: zero pivot at row {row}")
            }
            Error::Convergence(msg) => write!(f, "convergence error: {msg}"),
            Error::Dimension(msg) => write!(f, "dimension error: {msg}"),
            Error::Usage(msg) => write!(f, "usage error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
