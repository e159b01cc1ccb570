//! Exact p-adic bookkeeping for exponential sums over prime-power moduli.
//!
//! Everything here is a pure function of small integers. Moduli are kept
//! below 2^63 and intermediate products go through `i128`/`u128`.

mod error;
mod fraction;
mod modular;
mod tally;
mod valuation;

pub use error::PadicError;
pub use fraction::FractionModOne;
pub use modular::{
    inv_mod, is_prime, solve_directed_system, solve_scaled_linear, LinearSolution, PrimePower,
    Residue,
};
pub use tally::CyclotomicTally;
pub use valuation::{unit_part, valuation, Valuation};
