use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("arity mismatch: expected {expected}, got {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("unknown operation symbol `{0}`")]
    UnknownSymbol(String),

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("variety `{0}` has no canonicalizer")]
    NoCanonicalizer(String),

    #[error("homomorphism is not well defined: {0}")]
    IllDefinedHom(String),

    #[error("fiber over `{0}` is infinite")]
    InfiniteFiber(String),

    #[error("maps are not split: {0}")]
    NotSplit(String),

    #[error("not a homomorphism: {0}")]
    NotHom(String),

    #[error("not a congruence: {0}")]
    NotCongruence(String),

    #[error("not totally in {variety}: identity {identity} fails at {witness}")]
    NotTotallyInV {
        variety: String,
        identity: String,
        witness: String,
    },

    #[error("map is not well defined: {0}")]
    NotWellDefined(String),

    #[error("relation set is not an ideal: {0}")]
    NotIdeal(String),

    #[error("generator `{0}` is outside the computed window")]
    MissingGenerator(String),

    #[error("presentation did not stabilize up to depth {max_depth}: {detail}")]
    NotStabilized { max_depth: usize, detail: String },

    #[error("free overalgebra is not closed at size bound {0}")]
    NotClosed(usize),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cannot read {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
