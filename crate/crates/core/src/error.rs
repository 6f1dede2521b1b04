use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("alphabet size mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("degree cap mismatch: {left} vs {right}")]
    CapMismatch { left: usize, right: usize },

    #[error("letter {letter} outside alphabet 1..={dim}")]
    LetterOutOfRange { letter: usize, dim: usize },

    #[error("word of degree {degree} exceeds cap {cap}")]
    DegreeOverflow { degree: usize, cap: usize },

    #[error("constant term {found} not allowed here (expected {expected})")]
    ConstantTerm { found: String, expected: &'static str },

    #[error("resource guard: {0}")]
    Guard(String),

    #[error("element is not a Lie polynomial (residual {residual:.3e} at word {word})")]
    NotLie { word: String, residual: f64 },

    #[error("matrix shape: {0}")]
    Shape(String),

    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),

    #[error("eigenvalue at -1 within {tol:e}; principal logarithm is ambiguous")]
    BranchAmbiguity { tol: f64 },

    #[error("quadrature did not converge: refinement changed the result by {change:.3e}")]
    Quadrature { change: f64 },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("moment of degree {degree} not available (table holds up to {max})")]
    MomentUnavailable { degree: usize, max: usize },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
