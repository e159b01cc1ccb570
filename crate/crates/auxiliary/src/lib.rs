//! Auxiliary Kloosterman sums: the compatibility criterion on `Ū_n`, the
//! table it produces for `Sp(4)`, and `aux_kl`.

mod criterion;
mod table;

pub use criterion::{aux_kl, is_well_defined, ubar_root_flows, RootFlow, WellDefinednessCondition};
pub use table::{table_rows, table_to_markdown, ConditionTerm, TableRow, WelldefinedError};
