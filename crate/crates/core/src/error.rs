use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("generator index {index} out of range for {generators} generators")]
    InvalidGenerator { index: usize, generators: usize },

    #[error("the free Coxeter group needs at least 3 generators, got {0}")]
    TooFewGenerators(usize),

    #[error("only the all-free case (Z/2)^{{*L}} is supported; got {0} commuting pairs")]
    CommutingGenerators(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),

    #[error("degree {degree} exceeds the truncation {truncation}")]
    TruncationOverflow { degree: usize, truncation: usize },

    #[error("orthogonal complement of S_{degree} is zero-dimensional")]
    EmptyComplement { degree: usize },

    #[error("density denominator {denominator} is not positive at x = {x} inside the support")]
    DensityAnomaly { x: f64, denominator: f64 },

    #[error("singular Gram matrix: {0}")]
    Singular(String),

    #[error("operator is not a contraction (norm {0})")]
    NotContraction(f64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown suite {0:?}")]
    UnknownSuite(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
