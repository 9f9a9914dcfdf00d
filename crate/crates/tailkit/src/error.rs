use thiserror::Error;

/// Errors produced by family construction, enumeration and bound evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("exact enumeration over {n} ground elements exceeds cap {cap}")]
    EnumerationCap { n: usize, cap: usize },

    #[error("member index {index} out of range (family has {len} members)")]
    MemberIndex { index: usize, len: usize },

    #[error("element index {index} out of range (ground set has {len} elements)")]
    ElementIndex { index: usize, len: usize },

    #[error("probability {value} outside [0,1]")]
    InvalidProbability { value: f64 },

    #[error("operation requires a uniform probability vector")]
    NonUniform,

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("search guard exceeded: {0}")]
    SearchGuard(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("invalid k-graph: {0}")]
    InvalidGraph(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
