use std::collections::BTreeSet;

use klsp4_group::{
    build_cell_matrix, root_subgroup_data, CellParams, CharacterPair, Root, WeylWord,
};
use klsp4_padic::{inv_mod, CyclotomicTally, FractionModOne, PrimePower};

use crate::{Kappa, StrataError};

/// An element `lambda x lambda'` of `V_w(l)`; `lambda'_j` is present only for
/// simple roots moved by `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VwElement {
    pub lambda: [u64; 2],
    pub lambda_prime: [Option<u64>; 2],
    pub level: u32,
}

/// The multiplier group `V_w(l)`: the image of `(a1, a2, c)` in `((Z/p^l)^x)^3`
/// acting on the kappa coordinates.
pub fn enumerate_vw(w: WeylWord, level: u32, p: u64) -> Result<Vec<VwElement>, StrataError> {
    if level == 0 {
        return Err(StrataError::InvalidInput("V_w needs level >= 1".into()));
    }
    let m = PrimePower::new(p, level)?;
    let n = build_cell_matrix(&CellParams::new(w, p, 0, 0)?);
    let sigma = n
        .monomial_permutation()
        .expect("cell matrices are monomial");
    let (present, _) = root_subgroup_data(w);
    let has = [
        present.contains(&Root::Alpha),
        present.contains(&Root::Beta),
    ];
    let units: Vec<u64> = (1..m.value()).filter(|x| x % p != 0).collect();
    let inv = |x: u64| inv_mod(m.residue(x as i128)).expect("unit").value();
    let mul = |x: u64, y: u64| m.reduce(x as i128 * y as i128);
    let mut set = BTreeSet::new();
    for &a1 in &units {
        let i1 = inv(a1);
        for &a2 in &units {
            let i2 = inv(a2);
            for &c in &units {
                let t = [a1, a2, mul(c, i1), mul(c, i2)];
                let s: [u64; 4] = std::array::from_fn(|j| t[sigma[j]]);
                let lp = [
                    has[0].then(|| mul(s[0], inv(s[1]))),
                    has[1].then(|| mul(s[1], inv(s[3]))),
                ];
                set.insert(VwElement {
                    lambda: [mul(a1, i2), mul(mul(a2, a2), inv(c))],
                    lambda_prime: lp,
                    level,
                });
            }
        }
    }
    let phi = (m.value() - m.value() / p) as usize;
    if set.len() != phi * phi {
        return Err(StrataError::InvalidInput(format!(
            "|V_{w}({level})| = {} but expected {}",
            set.len(),
            phi * phi
        )));
    }
    Ok(set.into_iter().collect())
}

/// `theta(lambda x lambda') = e(sum lambda_i phase_i + sum lambda'_j phase'_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaCharacter {
    pub phases: [FractionModOne; 2],
    pub phases_prime: [Option<FractionModOne>; 2],
}

impl ThetaCharacter {
    /// `theta_x` of a cell: `m_i kappa_i(x)` and `n_j kappa'_j(x)`.
    pub fn from_kappa(k: &Kappa, ch: &CharacterPair) -> Self {
        ThetaCharacter {
            phases: [
                k.kappa[0].scale(ch.m1 as i128),
                k.kappa[1].scale(ch.m2 as i128),
            ],
            phases_prime: [
                k.kappa_prime[0].map(|f| f.scale(ch.n1 as i128)),
                k.kappa_prime[1].map(|f| f.scale(ch.n2 as i128)),
            ],
        }
    }

    /// `e((n1 l1 + n2 l2 + n1' l1' + n2' l2') / p^l)`, primed terms where given.
    pub fn from_integers(n: [i64; 2], n_prime: [Option<i64>; 2], level: u32, p: u64) -> Self {
        let f = |x: i64| FractionModOne::new(x as i128, level, p);
        ThetaCharacter {
            phases: [f(n[0]), f(n[1])],
            phases_prime: [n_prime[0].map(f), n_prime[1].map(f)],
        }
    }

    pub fn max_level(&self) -> u32 {
        self.phases
            .iter()
            .chain(self.phases_prime.iter().flatten())
            .map(|f| f.level())
            .max()
            .unwrap_or(0)
    }
}

/// `S_w(theta; l) = sum over V_w(l) of theta`.
pub fn eval_sw(
    theta: &ThetaCharacter,
    vw: &[VwElement],
    level: u32,
    p: u64,
) -> Result<CyclotomicTally, StrataError> {
    let needed = theta.max_level();
    if needed > level {
        return Err(StrataError::LevelTooSmall { needed, level });
    }
    let m = PrimePower::new(p, level)?;
    let nums = theta.phases.map(|f| f.numerator_at(level) as i128);
    let nums_prime = theta
        .phases_prime
        .map(|f| f.map(|f| f.numerator_at(level) as i128));
    let mut t = CyclotomicTally::with_capacity_level(p, level);
    for v in vw {
        let mut acc = nums[0] * v.lambda[0] as i128 + nums[1] * v.lambda[1] as i128;
        for (a, l) in nums_prime.iter().zip(v.lambda_prime) {
            if let (Some(a), Some(l)) = (a, l) {
                acc += a * l as i128;
            }
        }
        t.add_residue(m.reduce(acc), 1);
    }
    Ok(t)
}
