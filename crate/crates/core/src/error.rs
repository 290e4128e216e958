//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex index {index} out of range 1..={v}")]
    IndexOutOfRange { index: usize, v: usize },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("vertex map is not injective or maps outside the target range")]
    BadInjection,

    #[error("parameter out of range: {0}")]
    BadParameter(String),

    #[error("leg labels must be pairwise distinct")]
    RepeatedLabel,

    #[error("graph sums must share the vertex count (got {left} and {right})")]
    MixedWidth { left: usize, right: usize },

    #[error("term is not 1-vertex irreducible")]
    NotOneVi,

    #[error("no coupling defined for vertex degree {0}")]
    MissingCoupling(usize),

    #[error("vertex degree {0} is not allowed by the theory")]
    DegreeNotAllowed(usize),

    #[error("propagator must be nonzero")]
    ZeroPropagator,

    #[error("enumeration guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("cache file corrupt: {0}")]
    CacheCorrupt(String),

    #[error("invalid JSON: {0}")]
    Json(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
