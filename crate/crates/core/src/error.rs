use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("ring mismatch: {0} vs {1}")]
    SpecMismatch(String, String),
    #[error("operation requires a chain ring (PLocal or ChainRing), got {0}")]
    NotChainRing(String),
    #[error("element is not a unit: {0}")]
    NotUnit(String),
    #[error("denominator divisible by p: {0}")]
    NotPLocal(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("Lie axiom {axiom} violated at {tuple}")]
    AxiomViolation { axiom: u8, tuple: String },
    #[error("d∘d != 0 at basis element {0}")]
    NotAComplex(String),
    #[error("truncation: {0}")]
    Truncation(String),
    #[error("invalid Hecke data: {0}")]
    InvalidHecke(String),
    #[error("non-monic polynomial")]
    NonMonic,
    #[error("singular system: {0}")]
    Singular(String),
    #[error("invalid differential assertion: {0}")]
    InvalidAssertion(String),
    #[error("ambiguous extension in degree {degree}, weight {weight}")]
    AmbiguousExtension { degree: i64, weight: u32 },
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse { line: e.line(), column: e.column(), msg: e.to_string() }
    }
}
