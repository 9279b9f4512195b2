use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised while decoding a PNM stream. Every variant carries the byte
/// offset at which decoding stopped.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PnmError {
    #[error("unsupported magic number at byte {offset} (expected P2 or P5)")]
    BadMagic { offset: usize },
    #[error("malformed header at byte {offset}: {reason}")]
    MalformedHeader { offset: usize, reason: &'static str },
    #[error("maxval {maxval} at byte {offset} exceeds 255")]
    MaxvalTooLarge { offset: usize, maxval: u32 },
    #[error("truncated payload at byte {offset}: expected {expected} samples, found {found}")]
    Truncated {
        offset: usize,
        expected: usize,
        found: usize,
    },
    #[error("sample {value} at byte {offset} exceeds maxval {maxval}")]
    SampleOutOfRange {
        offset: usize,
        value: u32,
        maxval: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Pnm(#[from] PnmError),
    #[error("invalid image: {0}")]
    InvalidImage(String),
    #[error("image dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph is disconnected ({components} components)")]
    DisconnectedGraph { components: usize },
    #[error("vertex {vertex} has a non-finite weight")]
    NonFiniteWeight { vertex: usize },
    #[error("tree was not built over a pixel grid")]
    NotAGrid,
    #[error("unknown attribute kind `{0}`")]
    UnknownAttribute(String),
    #[error("attribute map does not belong to this tree")]
    TreeMismatch,
    #[error("invalid filter parameter: {0}")]
    InvalidParameter(String),
}
