use klsp4_group::{
    build_cell_matrix, root_subgroup_data, twist_character, CellParams, CharacterPair,
    RationalMatrix, Q,
};
use klsp4_padic::{inv_mod, PrimePower};

use crate::{
    cells_to_terms, enumerate_matrix, oracle_terms, DenominatorCap, OracleError, DEFAULT_BUDGET,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwistSide {
    /// `Kl(t n, psi, psi') = Kl(n, psi_t, psi')`
    Left,
    /// `Kl(n t^{-1}, psi, psi') = Kl(n, psi, psi'_t)`
    Right,
}

fn unit_residue(x: &Q, m: PrimePower) -> Result<i128, OracleError> {
    let d = inv_mod(m.residue(*x.denom()))?;
    Ok((m.residue(*x.numer()) * d).value() as i128)
}

/// Compares the oracle on the twisted cell matrix with the oracle on `n`
/// under the twisted character.
pub fn check_torus_twist(
    c: &CellParams,
    ch: &CharacterPair,
    t: [Q; 4],
    side: TwistSide,
) -> Result<bool, OracleError> {
    let p = c.p();
    let n = build_cell_matrix(c);
    let tm = RationalMatrix::diag(t);
    let twisted = match side {
        TwistSide::Left => &tm * &n,
        TwistSide::Right => {
            let ti = tm
                .inverse()
                .ok_or_else(|| OracleError::InvalidInput("singular torus element".into()))?;
            &n * &ti
        }
    };
    let (present, _) = root_subgroup_data(c.w());
    let cap = DenominatorCap::default_for(c);
    let lhs_cells = enumerate_matrix(&twisted, &present, p, cap, DEFAULT_BUDGET)?;
    let lhs = cells_to_terms(&lhs_cells, p)?.evaluate(ch);

    let base = oracle_terms(c)?;
    let modulus = PrimePower::new(p, base.level().max(1))?;
    let tr = t
        .iter()
        .map(|x| unit_residue(x, modulus))
        .collect::<Result<Vec<_>, _>>()?;
    let tr = [tr[0], tr[1], tr[2], tr[3]];
    let chi = match side {
        TwistSide::Left => {
            let (a, b) = twist_character(tr, ch.m1 as i128, ch.m2 as i128, modulus)?;
            CharacterPair::new(a as i64, b as i64, ch.n1, ch.n2)
        }
        TwistSide::Right => {
            let (a, b) = twist_character(tr, ch.n1 as i128, ch.n2 as i128, modulus)?;
            CharacterPair::new(ch.m1, ch.m2, a as i64, b as i64)
        }
    };
    let rhs = base.evaluate(&chi);
    Ok(lhs.tally.eq_exact(&rhs.tally) && lhs.term_count == rhs.term_count)
}
