use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("truncation mismatch: E_{left} vs E_{right}")]
    TruncationMismatch { left: usize, right: usize },

    #[error("truncation {0} is outside the supported range 1..=64")]
    InvalidTruncation(usize),

    #[error("generator index {index} is outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("indices must be strictly increasing, got {0:?}")]
    NonCanonicalMonomial(Vec<usize>),

    #[error("image of e{index} has a nonzero constant term")]
    NonzeroConstantTerm { index: usize },

    #[error("tail prefix uses e{index}, which must be covered by an explicit image")]
    TailPrefixOverlap { index: usize },

    #[error("tail rule {rule} cannot be realised at truncation {n}")]
    TailUnrealisable { rule: &'static str, n: usize },

    #[error("relation e{i}e{j} + e{j}e{i} = 0 is violated; residual {residual}")]
    RelationViolation { i: usize, j: usize, residual: String },

    #[error("map has not been verified against the Grassmann relations")]
    Unverified,

    #[error("map is not an involution (fails at e{index})")]
    NotAnInvolution { index: usize },

    #[error("method 1 condition ({condition}) fails for d_{index}: {reason}")]
    SpecViolation {
        condition: u8,
        index: usize,
        reason: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("variable {0} has no assigned value")]
    MissingAssignment(String),

    #[error("value assigned to {variable} does not lie in the degree-{expected} component")]
    ParityMismatch { variable: String, expected: u8 },
}
