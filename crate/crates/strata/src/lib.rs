//! The torus action on `X(n)`, its orbits, the multiplier groups `V_w(l)`
//! and the orbit decomposition of a Kloosterman sum.

mod error;
mod identity;
mod torus;
mod vw;

pub use error::StrataError;
pub use identity::{factorization_check, stevens_identity_check, Factorization, Stratification};
pub use torus::{
    conjugate_by_cell, kappa, orbits, scaling, torus_act, unit_generators, unit_mod, Kappa, Orbit,
    TorusElement,
};
pub use vw::{enumerate_vw, eval_sw, ThetaCharacter, VwElement};
