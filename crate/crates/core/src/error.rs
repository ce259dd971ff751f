use thiserror::Error;

/// Errors shared by every module of the crate.
///
/// Construction errors (`NotStochastic`, `Reducible`, `SingularStationary`)
/// can only come out of chain validation; everything downstream may assume a
/// valid chain and only fails on bad arguments.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("row {row} is not a probability distribution: {detail}")]
    NotStochastic { row: usize, detail: String },

    #[error("transition matrix is not irreducible (state {state} is not on a closed communicating class)")]
    Reducible { state: usize },

    #[error("stationary distribution solve failed: {0}")]
    SingularStationary(String),

    #[error("reference distribution has zero mass at state {0}")]
    ZeroReferenceMass(usize),

    #[error("state set is empty")]
    EmptySet,

    #[error("state set is the full space; a proper subset is required")]
    FullSet,

    #[error("chain is not lazy (min holding probability {0})")]
    NotLazy(f64),

    #[error("chain is not reversible")]
    NotReversible,

    #[error("no positive transition across the set boundary")]
    NoBoundaryEdge,

    #[error("set measure {0} exceeds 1/2")]
    TooBig(f64),

    #[error("state count {n} exceeds the enumeration limit {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("argument out of domain: {0}")]
    DomainError(String),

    #[error("bad parameter: {0}")]
    BadParam(String),

    #[error("iteration cap of {0} steps reached before the target distance")]
    IterationCap(u64),

    #[error("i/o failure: {0}")]
    Io(String),

    #[error("malformed chain file: {0}")]
    Format(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
