use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what}: {actual} exceeds the limit of {limit}")]
    SizeLimit {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("scale {n} is not a multiple of the base scale {base}")]
    InvalidScale { n: u64, base: u64 },

    #[error("unsupported mode: {0}")]
    UnsupportedMode(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid terminal set: {0}")]
    InvalidTerminalSet(String),

    #[error("invalid weight assignment: {0}")]
    InvalidAssignment(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid packing: {0}")]
    InvalidPacking(String),

    #[error("terminal {terminal} is not in the secrecy-seeking set")]
    NotInSet { terminal: usize },

    #[error("distribution is not dyadic-uniform: {0}")]
    NonDyadic(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
