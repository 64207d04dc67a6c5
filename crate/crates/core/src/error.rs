use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{what} did not converge after {iterations} iterations (last residual {residual:.3e})")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("domain too small: {leaked:.3e} of the mass sits at the domain edges")]
    DomainTooSmall { leaked: f64 },

    #[error("grid under-resolved: {0}")]
    UnderResolved(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("root bracketing failed: {0}")]
    Bracket(String),

    #[error("energy table rejected: {0}")]
    InvalidTable(String),

    #[error("memory budget exceeded: {needed} bytes requested, cap is {cap}")]
    MemoryBudget { needed: usize, cap: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
