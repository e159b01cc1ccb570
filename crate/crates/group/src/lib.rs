//! Sp(4) scaffolding: the eight Weyl cells, their representative matrices
//! `n_{w,r,s}`, unipotent coordinates, characters and Kloosterman values.
//!
//! The symplectic form is `J = [[0, I], [-I, 0]]` and the maximal unipotent
//! `U` consists of the matrices
//!
//! ```text
//! [1  a1  a2  a3]
//! [0  1   a4  a5]      a4 = a3 - a1 a5
//! [0  0   1   0 ]
//! [0  0  -a1  1 ]
//! ```
//!
//! which is upper triangular for the row order (1, 2, 4, 3).

mod cell;
mod error;
mod matrix;
mod sum;
mod twist;
mod unipotent;
mod weyl;

pub use cell::{build_cell_matrix, CellParams, CharacterPair};
pub use error::GroupError;
pub use matrix::{
    frac_mod_one, frac_part, is_p_integral, q, q_int, q_pow, rational_valuation, RationalMatrix, Q,
};
pub use sum::{KloostermanValue, TermList};
pub use twist::twist_character;
pub use unipotent::{psi_value, root_element, UnipotentCoords};
pub use weyl::{root_subgroup_data, Root, WeylWord};
