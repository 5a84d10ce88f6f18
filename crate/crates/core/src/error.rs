use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("volume census incomplete: requested t = {requested} exceeds cutoff {cutoff}")]
    CensusIncomplete { requested: f64, cutoff: f64 },

    #[error("enumeration budget exceeded: {visited} nodes visited, budget {budget}")]
    BudgetExceeded { visited: u64, budget: u64 },

    #[error("precision loss in {0}; exact fallback failed")]
    PrecisionLoss(String),

    #[error("k = {k} exceeds configured maximum {k_max}")]
    KTooLarge { k: usize, k_max: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
