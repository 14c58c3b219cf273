use thiserror::Error;

#[derive(Debug, Error)]
pub enum KrogError {
    #[error("{0} does not divide the group order {1}")]
    NotADivisor(u32, u32),
    #[error("{0} is not a prime power >= 2")]
    NotAPrimePower(u64),
    #[error("{0} is not prime; only prime-order coefficient charts are implemented")]
    NotPrime(u64),
    #[error("index must be positive, got {0}")]
    NonPositiveIndex(i64),
    #[error("degree must be non-negative, got {0}")]
    NegativeDegree(i64),
    #[error("sign-twisted modules require even group order, got n = {0}")]
    TwistNeedsEvenOrder(u32),
    #[error("symbol `{0}` requires even group order, got n = {1}")]
    SymbolNeedsEvenOrder(String, u32),
    #[error("unknown Mackey functor symbol `{0}`")]
    UnknownSymbol(String),
    #[error("map is not an isomorphism at the bottom level")]
    NotBottomIso,
    #[error("map is not injective at level {0}")]
    NotInjective(u32),
    #[error("spectral sequence differential from {from:?} to {to:?} cannot be certified zero")]
    UncertifiableDifferential { from: (i64, i64), to: (i64, i64) },
    #[error("dimension {dim} and fixed dimension {fixed} have different parities; no such virtual representation exists")]
    ParityMismatch { dim: i64, fixed: i64 },
    #[error("ring elements have different base fields: q = {0} and q = {1}")]
    MismatchedField(u64, u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("level at divisor {0} has order larger than the enumeration bound {1}")]
    EnumerationBound(u32, u64),
    #[error("level at divisor {0} is not finite")]
    InfiniteLevel(u32),
    #[error("window of {0} cells exceeds the cap of {1}; raise --cap to allow it")]
    WindowTooLarge(usize, usize),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, KrogError>;
