use klsp4_padic::{inv_mod, PrimePower};

use crate::GroupError;

/// Character data of `psi_t(u) = psi(t u t^{-1})` for `t = diag(t1, t2, t3, t4)`
/// with unit entries, reduced modulo `p^k`.
///
/// Conjugation scales the (1,2) entry by `t1/t2` and the (2,4) entry by `t2/t4`.
pub fn twist_character(
    t: [i128; 4],
    m1: i128,
    m2: i128,
    modulus: PrimePower,
) -> Result<(i128, i128), GroupError> {
    if t.iter().any(|x| !modulus.is_unit(*x)) {
        return Err(GroupError::InvalidInput(format!(
            "diagonal {t:?} has a non-unit entry"
        )));
    }
    let r = |x: i128| modulus.residue(x);
    let a = r(t[0]) * inv_mod(r(t[1]))?;
    let b = r(t[1]) * inv_mod(r(t[3]))?;
    Ok(((r(m1) * a).value() as i128, (r(m2) * b).value() as i128))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_twist() {
        let m = PrimePower::new(3, 2).unwrap();
        assert_eq!(twist_character([1, 1, 1, 1], 4, 7, m).unwrap(), (4, 7));
        assert!(twist_character([3, 1, 1, 1], 1, 1, m).is_err());
    }

    #[test]
    fn twist_then_untwist() {
        let m = PrimePower::new(5, 3).unwrap();
        let t = [2, 3, 63, 42]; // 63 = 2^{-1}, 42 = 3^{-1} mod 125
        let tinv = [63, 42, 2, 3];
        let (a, b) = twist_character(t, 7, 11, m).unwrap();
        assert_eq!(twist_character(tinv, a, b, m).unwrap(), (7, 11));
    }
}
