use thiserror::Error;

use crate::WeylWord;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("inadmissible cell {w} with (r, s) = ({r}, {s}): requires {rule}")]
    InadmissibleCell {
        w: WeylWord,
        r: u32,
        s: u32,
        rule: &'static str,
    },
    #[error("unknown Weyl word {0:?}")]
    UnknownWeylWord(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Padic(#[from] klsp4_padic::PadicError),
}
