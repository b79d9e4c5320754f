use thiserror::Error;

/// Errors produced by the codecs, the frame layer and the analysis helpers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("ring parameter mismatch: N={left_n},k={left_k} vs N={right_n},k={right_k}")]
    ParamMismatch {
        left_n: usize,
        left_k: u32,
        right_n: usize,
        right_k: u32,
    },
    #[error("polynomial is not divisible by the requested factor")]
    NonzeroRemainder,
    #[error("{0} is even and has no inverse modulo 2^k")]
    EvenOperand(u64),
    #[error("message has {len} symbols but the code accepts at most {max}")]
    MessageTooLong { len: usize, max: usize },
    #[error("operands are not coprime modulo 2")]
    NotCoprime,
    #[error("word is not a codeword of this code")]
    NotInCode,
    #[error("decode failure: {0}")]
    DecodeFailure(String),
    #[error("ambiguous error pattern: {0} distinct consistent corrections")]
    AmbiguousPattern(usize),
    #[error("invalid interleaver multiplier a={a} for N={n}")]
    InvalidMultiplier { a: u64, n: usize },
    #[error("frame header corrupt: {0}")]
    HeaderCorrupt(String),
    #[error("frame parameters do not match the session: {0}")]
    SessionMismatch(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
