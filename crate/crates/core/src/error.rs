use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("{0}")]
    Domain(String),

    #[error("genus ≥ {required} required (found genus {found})")]
    UnsupportedGenus { required: u32, found: u32 },

    #[error("surface has {0} boundary components; only 0 or 1 are supported")]
    UnsupportedBoundary(u32),

    #[error("words belong to different generator systems")]
    SystemMismatch,

    #[error("curve `{0}` is not in the generator system")]
    UnresolvedCurve(String),

    #[error("illegal move: `{left}` and `{right}` are not declared disjoint")]
    IllegalMove { left: String, right: String },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("generator system has no boundary curve `d`")]
    NotBoundarySystem,

    #[error("invalid generator system: {0}")]
    InvalidSystem(String),

    #[error("invalid fibration: {0}")]
    InvalidFibration(String),

    #[error("total monodromy is not the identity")]
    NotClosedFibration,

    #[error("fibration is not simplified: cycle {index} is {reason}")]
    NotSimplified { index: usize, reason: String },

    #[error("wrong fiber: {0}")]
    WrongFiber(String),

    #[error("wrong base: {0}")]
    WrongBase(String),

    #[error("modulus {0} is not a supported small prime")]
    Modulus(u64),

    #[error("word syntax: {0}")]
    WordSyntax(String),
}

impl Error {
    /// Stable machine-readable tag, printed by the CLI alongside the message.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Dimension { .. } => "dimension",
            Error::Domain(_) => "domain",
            Error::UnsupportedGenus { .. } => "unsupported-genus",
            Error::UnsupportedBoundary(_) => "unsupported-boundary",
            Error::SystemMismatch => "system-mismatch",
            Error::UnresolvedCurve(_) => "unresolved-curve",
            Error::IllegalMove { .. } => "illegal-move",
            Error::IndexOutOfRange { .. } => "index-out-of-range",
            Error::NotBoundarySystem => "not-boundary-system",
            Error::InvalidSystem(_) => "invalid-system",
            Error::InvalidFibration(_) => "invalid-fibration",
            Error::NotClosedFibration => "not-closed",
            Error::NotSimplified { .. } => "not-simplified",
            Error::WrongFiber(_) => "wrong-fiber",
            Error::WrongBase(_) => "wrong-base",
            Error::Modulus(_) => "modulus",
            Error::WordSyntax(_) => "word-syntax",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
