use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("word is not null-homotopic (evaluates to {0})")]
    NotNullHomotopic(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("node budget exhausted after completing radius {completed}")]
    BallBudget { completed: u32 },
    #[error("search budget exhausted: area > {completed}")]
    SearchBudget { completed: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
