use std::collections::BTreeSet;

use klsp4_group::{CellParams, CharacterPair, KloostermanValue};

use crate::{kl, ExplicitError};

/// A product of local sums over distinct primes.
#[derive(Debug, Clone)]
pub struct GlobalValue {
    pub locals: Vec<(u64, KloostermanValue)>,
    /// `prod |Kl_p|`; the empty product is 1.
    pub magnitude: f64,
}

impl GlobalValue {
    /// The exact integer value when every local factor is an integer.
    pub fn to_integer(&self) -> Option<i64> {
        self.locals
            .iter()
            .try_fold(1i64, |acc, (_, v)| Some(acc * v.tally.to_integer()?))
    }
}

pub fn kl_global(cells: &[(CellParams, CharacterPair)]) -> Result<GlobalValue, ExplicitError> {
    let mut seen = BTreeSet::new();
    let mut locals = Vec::with_capacity(cells.len());
    let mut magnitude = 1.0;
    for (c, ch) in cells {
        if !seen.insert(c.p()) {
            return Err(ExplicitError::InvalidInput(format!(
                "prime {} repeated",
                c.p()
            )));
        }
        let v = kl(c, ch)?;
        magnitude *= v.magnitude();
        locals.push((c.p(), v));
    }
    Ok(GlobalValue { locals, magnitude })
}
