use klsp4_group::{GroupError, WeylWord};
use klsp4_padic::PadicError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExplicitError {
    #[error("evaluator for {expected} called on a {got} cell")]
    WrongCell {
        expected: &'static str,
        got: WeylWord,
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Padic(#[from] PadicError),
}
