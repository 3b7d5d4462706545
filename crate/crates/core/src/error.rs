use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("inhomogeneous element at line {line}: degrees {first} and {second} are mixed")]
    Inhomogeneous { line: usize, first: u32, second: u32 },

    #[error("unknown generator `{name}` at line {line}")]
    UnknownGenerator { line: usize, name: String },

    #[error("generator `{name}` has degree 0; algebras must be connected")]
    DegreeZeroGenerator { name: String },

    #[error("coefficients belong to different fields")]
    FieldMismatch,

    #[error("truncation degree {have} is too small: at least {needed} is required ({context})")]
    TruncationTooSmall { needed: u32, have: u32, context: String },

    #[error("truncation mismatch: {left} vs {right}")]
    TruncationMismatch { left: u32, right: u32 },

    #[error("series with constant term {constant} cannot be inverted over the integers")]
    NotInvertible { constant: String },

    #[error("enumeration of {count} presentations exceeds the budget of {budget}")]
    BudgetExceeded { count: u128, budget: u128 },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Verification(_) => 1,
            Error::TruncationTooSmall { .. } | Error::BudgetExceeded { .. } => 3,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
