use klsp4_explicit::ExplicitError;
use klsp4_group::GroupError;
use klsp4_oracle::OracleError;
use klsp4_padic::PadicError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StrataError {
    #[error("orbit sum {detail} is not divisible by |V_w| = {divisor}")]
    IdentityViolation { divisor: i64, detail: String },
    #[error("a kappa value needs level {needed}, above the requested {level}")]
    LevelTooSmall { needed: u32, level: u32 },
    #[error("torus action left X(n): {0}")]
    LeftCell(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Explicit(#[from] ExplicitError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Padic(#[from] PadicError),
}
