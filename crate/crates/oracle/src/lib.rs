//! Brute-force enumeration of `X(n) = U(Z_p) \ C(n) / U_n(Z_p)`, used as the
//! reference for every closed-form evaluation.

mod enumerate;
mod error;
mod poly;
mod twist;

pub use enumerate::{
    canonicalize, cells_to_terms, certify_cap_closure, coordinate_caps, enumerate_matrix,
    enumerate_x, enumerate_x_with_budget, feasible, oracle_kl, oracle_terms, DenominatorCap,
    OracleCell, DEFAULT_BUDGET,
};
pub use error::OracleError;
pub use twist::{check_torus_twist, TwistSide};
