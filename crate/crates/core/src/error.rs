use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("bad rational `{0}`")]
    BadRational(String),
    #[error("region parts mix interval, cylinder and finite descriptions")]
    MixedVariant,
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("unsupported space: {0}")]
    UnsupportedSpace(String),
    #[error("piece budget exceeded ({0} interval pieces)")]
    BudgetExceeded(usize),
    #[error("unknown builtin `{0}`")]
    UnknownName(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("size {0} exceeds cap {1}")]
    CapExceeded(usize, usize),
    #[error("word {0} does not occur in the language")]
    WordAbsent(String),
    #[error("malformed transition matrix: {0}")]
    MalformedMatrix(String),
    #[error("transition graph is not irreducible")]
    NotIrreducible,
    #[error("accumulated error {0} exceeds budget {1}")]
    ErrorBudgetExceeded(String, String),
    #[error("unsupported generator: {0}")]
    UnsupportedGenerator(String),
    #[error("time sets of different kinds or horizons")]
    MixedKind,
    #[error("system not declared abelian")]
    NotAbelianDeclared,
    #[error("incompatible acting-time kinds")]
    IncompatibleKinds,
    #[error("factor map verification failed: {0}")]
    VerificationFailed(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
