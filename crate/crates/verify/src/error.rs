use klsp4_auxiliary::WelldefinedError;
use klsp4_explicit::ExplicitError;
use klsp4_group::{CellParams, GroupError};
use klsp4_oracle::OracleError;
use klsp4_padic::PadicError;
use klsp4_strata::StrataError;
use thiserror::Error;

use crate::BoundId;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("bound {id} does not apply to {cell}")]
    InadmissibleCell { id: BoundId, cell: CellParams },
    #[error("{cell} needs about {required} steps, budget is {budget}")]
    BudgetExceeded {
        cell: String,
        required: u128,
        budget: u128,
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("config: {0}")]
    Config(#[from] toml::de::Error),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Explicit(#[from] ExplicitError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Strata(#[from] StrataError),
    #[error(transparent)]
    Auxiliary(#[from] WelldefinedError),
}

impl HarnessError {
    /// Process exit code: 2 for bad input, 3 for an exhausted budget, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::BudgetExceeded { .. }
            | HarnessError::Oracle(OracleError::BudgetExceeded { .. }) => 3,
            HarnessError::InadmissibleCell { .. }
            | HarnessError::InvalidInput(_)
            | HarnessError::Config(_)
            | HarnessError::Group(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
