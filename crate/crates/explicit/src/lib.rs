//! Exact Weyl-cell Kloosterman sums on `Sp(4)` from explicit parametrisations,
//! and the classical sums they reduce to.

mod cells;
mod classical;
mod error;
mod global;
mod hat;

pub use cells::{
    kl, kl_ab, kl_aba, kl_ba, kl_bab, kl_rank1, kl_w0, terms, terms_ab, terms_aba, terms_ba,
    terms_bab, terms_rank1, terms_w0,
};
pub use classical::{
    gauss_quadratic, gl2_kloosterman, gl2_kloosterman_general, ramanujan, ramanujan_tally,
};
pub use error::ExplicitError;
pub use global::{kl_global, GlobalValue};
pub use hat::HatSolution;
