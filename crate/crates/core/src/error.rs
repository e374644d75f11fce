use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (relative deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("operator is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPositive { eigenvalue: f64 },

    #[error("invalid qubit index {0}, expected 1 or 2")]
    InvalidQubit(u8),

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("marginal is rank deficient (smallest eigenvalue {eigenvalue:.3e})")]
    NotBalanceable { eigenvalue: f64 },

    #[error("filter removed the whole state (remaining weight {weight:.3e})")]
    FilteredToZero { weight: f64 },

    #[error(
        "iteration did not converge after {iterations} steps (marginal deviation {deviation:.3e})"
    )]
    NotConverged { iterations: usize, deviation: f64 },

    #[error("input state is separable (concurrence {concurrence:.3e})")]
    SeparableInput { concurrence: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("state file: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
