use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("alphabet size must be between 2 and 36, got {0}")]
    InvalidAlphabet(usize),
    #[error("symbol {symbol} is out of range for an alphabet of size {alphabet}")]
    SymbolOutOfRange { symbol: usize, alphabet: usize },
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),
    #[error("kernel has finite support; capacity theory requires infinite support")]
    FiniteSupport,
    #[error("kernel is not amicable")]
    NotAmicable,
    #[error("alphabet mismatch: {0} vs {1}")]
    AlphabetMismatch(usize, usize),
    #[error("word {0:?} is a prefix of word {1:?}")]
    NotPrefixFree(String, String),
    #[error("invalid enumeration at stage {stage}: {reason}")]
    InvalidEnumeration { stage: usize, reason: String },
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("cannot represent the sum of a uniform tail and an atom on the same cylinder {0:?}")]
    MixedTails(String),
    #[error("atoms did not separate within depth {0}")]
    DepthCutoff(usize),
    #[error("instance too large for the oracle: {0}")]
    TooLarge(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
