use thiserror::Error;

/// Errors produced anywhere in the relaxation pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unrecognized character at offset {position}")]
    Lex { position: usize },

    #[error("parse error at offset {position}: expected {expected}")]
    Parse { position: usize, expected: String },

    #[error("exponent at offset {position} depends on x; only constant exponents are supported")]
    NonConstantExponent { position: usize },

    #[error("{function} is undefined at x = {x}")]
    Domain { x: f64, function: String },

    #[error("non-finite result at x = {x}")]
    NonFinite { x: f64 },

    #[error("invalid domain [{lower}, {upper}]")]
    InvalidDomain { lower: f64, upper: f64 },

    #[error("function is locally linear on [{a}, {b}]; split the domain manually")]
    DegenerateFunction { a: f64, b: f64 },

    #[error("cannot split [{a}, {b}] in floating point")]
    NumericalCollapse { a: f64, b: f64 },

    #[error("curvature tests disagree on [{a}, {b}]; a break point was probably missed")]
    InconsistentCurvature { a: f64, b: f64 },

    #[error("tangents at {a} and {b} are parallel")]
    ParallelTangents { a: f64, b: f64 },

    #[error("sub-interval [{a}, {b}] is linear and cannot carry a triangle")]
    LinearPiece { a: f64, b: f64 },

    #[error("triangle chain is empty")]
    EmptyChain,

    #[error("all hull points are collinear")]
    DegenerateHull,

    #[error("'{name}' is not a valid LP-format identifier")]
    NameClash { name: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed constraint system: {0}")]
    Import(String),

    #[error("simplex exceeded {0} pivots")]
    MaxIterations(usize),
}

impl Error {
    /// True for errors caused by malformed expression text.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, Error::Lex { .. } | Error::Parse { .. } | Error::NonConstantExponent { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
