use crate::codec::CodecError;

/// Errors from key generation, evaluation and key decoding.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FssError {
    #[error("target must have at least one level")]
    EmptyPath,
    #[error("input has {found} bits, key domain has {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("input has {found} levels, key has {expected}")]
    DepthMismatch { expected: usize, found: usize },
    #[error("domain of {levels} levels is too large for full evaluation")]
    DomainTooLarge { levels: usize },
    #[error("prefix of length {len} exceeds the {levels} available levels")]
    PrefixTooLong { len: usize, levels: usize },
    #[error("the empty prefix carries no share")]
    EmptyPrefix,
    #[error("payload schedule has {found} entries, target has {expected} levels")]
    PayloadLength { expected: usize, found: usize },
    #[error("common prefix length {common} must be below total depth {depth}")]
    BadSplit { common: usize, depth: usize },
    #[error("old tail has {old} levels, new tail has {new}")]
    MismatchedTails { old: usize, new: usize },
    #[error("key and parameters use different security parameters")]
    LambdaMismatch,
    #[error(transparent)]
    Codec(#[from] CodecError),
}
