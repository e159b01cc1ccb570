use std::collections::BTreeSet;

use klsp4_group::{
    build_cell_matrix, frac_mod_one, frac_part, is_p_integral, rational_valuation, root_element,
    root_subgroup_data, CellParams, CharacterPair, KloostermanValue, RationalMatrix, Root,
    TermList, UnipotentCoords, Q,
};
use num_traits::Zero;

use crate::poly::{derived_caps, var_index};
use crate::OracleError;

/// Default ceiling on the number of `u'` candidates one enumeration may test.
pub const DEFAULT_BUDGET: u128 = 50_000_000;

/// Bound on the denominators of `u'` coordinates: `p^{-level} Z_p / Z_p`.
///
/// With `pruned` set, each coordinate is further capped by what the
/// integrality of row 3 and of the bottom 2×2 minors of `n u'` allows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DenominatorCap {
    pub level: u32,
    pub pruned: bool,
}

impl DenominatorCap {
    pub fn uniform(level: u32) -> Self {
        DenominatorCap {
            level,
            pruned: false,
        }
    }

    pub fn pruned(level: u32) -> Self {
        DenominatorCap {
            level,
            pruned: true,
        }
    }

    /// Pruned with `level = r + s`.
    pub fn default_for(c: &CellParams) -> Self {
        DenominatorCap::pruned(c.r() + c.s())
    }
}

/// One element of `X(n)`: `x = u n u'` with `x` integral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleCell {
    /// Coordinates of `u`; `x_alpha` and `x_beta` are reduced into `[0, 1)`.
    pub u_coords: UnipotentCoords,
    /// Canonical coordinates of `u'` modulo `U_n(Z_p)`.
    pub uprime_coords: UnipotentCoords,
    pub x: RationalMatrix,
}

/// Canonical representative of `u' U_n(Z_p)`: right multiplication by
/// integral root elements, in the order alpha, beta, alpha+beta, 2alpha+beta,
/// brings each coordinate into `[0, 1)` without disturbing earlier ones.
pub fn canonicalize(
    u: &UnipotentCoords,
    present: &[Root],
    p: u64,
) -> Result<UnipotentCoords, OracleError> {
    let mut m = u.to_matrix();
    for root in [Root::Alpha, Root::Beta, Root::AlphaBeta, Root::TwoAlphaBeta] {
        if !present.contains(&root) {
            continue;
        }
        let cur = UnipotentCoords::from_matrix(&m).expect("U is closed under products");
        let x = *cur.get(root);
        let k = frac_part(&x, p)? - x;
        m = &m * &root_element(root, k);
    }
    Ok(UnipotentCoords::from_matrix(&m).expect("U is closed under products"))
}

fn key(u: &UnipotentCoords) -> [Q; 4] {
    [u.x_alpha, u.x_two_alpha_beta, u.x_alpha_beta, u.x_beta]
}

fn solve_scalar(x3: &[Q; 4], c: &[Q; 4], p: u64) -> Result<Option<Q>, OracleError> {
    let Some(j) = (0..4).find(|&j| rational_valuation(&x3[j], p) == Some(0)) else {
        return Ok(None);
    };
    let a = frac_part(&(c[j] / x3[j]), p)?;
    Ok((0..4)
        .all(|i| is_p_integral(&(a * x3[i] - c[i]), p))
        .then_some(a))
}

fn solve_pair(x3: &[Q; 4], x4: &[Q; 4], c: &[Q; 4], p: u64) -> Result<Option<(Q, Q)>, OracleError> {
    for i in 0..4 {
        for j in i + 1..4 {
            let d = x3[i] * x4[j] - x3[j] * x4[i];
            if rational_valuation(&d, p) != Some(0) {
                continue;
            }
            let a = frac_part(&((c[i] * x4[j] - c[j] * x4[i]) / d), p)?;
            let b = frac_part(&((x3[i] * c[j] - x3[j] * c[i]) / d), p)?;
            let ok = (0..4).all(|k| is_p_integral(&(a * x3[k] + b * x4[k] - c[k]), p));
            return Ok(ok.then_some((a, b)));
        }
    }
    Ok(None)
}

/// Decides whether some `u` in `U(Q_p)` makes `u m` integral, by eliminating
/// from the bottom rows up, and returns such a `u` together with `u m`.
pub fn feasible(
    m: &RationalMatrix,
    p: u64,
) -> Result<Option<(UnipotentCoords, RationalMatrix)>, OracleError> {
    let [r1, r2, r3, r4] = m.0;
    if !r3.iter().all(|e| is_p_integral(e, p)) {
        return Ok(None);
    }
    let Some(a1) = solve_scalar(&r3, &r4, p)? else {
        return Ok(None);
    };
    let x4: [Q; 4] = std::array::from_fn(|k| r4[k] - a1 * r3[k]);
    let neg_r2: [Q; 4] = std::array::from_fn(|k| -r2[k]);
    let Some((a3, a5)) = solve_pair(&r3, &x4, &neg_r2, p)? else {
        return Ok(None);
    };
    let c: [Q; 4] = std::array::from_fn(|k| -(r1[k] + a1 * r2[k] + a3 * x4[k]));
    let Some(a2p) = solve_scalar(&r3, &c, p)? else {
        return Ok(None);
    };
    let u = UnipotentCoords::new(a1, a3, a2p - a1 * a3, a5);
    let x = &u.to_matrix() * m;
    if !x.is_p_integral(p) {
        return Err(OracleError::Witness(format!(
            "u m not integral for m = {m}"
        )));
    }
    Ok(Some((u, x)))
}

/// Candidate denominators per coordinate (alpha, 2alpha+beta, alpha+beta, beta).
pub fn coordinate_caps(
    n: &RationalMatrix,
    present: &[Root],
    p: u64,
    cap: DenominatorCap,
) -> [Option<u32>; 4] {
    let derived = if cap.pruned {
        derived_caps(n, present, p)
    } else {
        [None; 4]
    };
    let mut out = [None; 4];
    for r in present {
        let i = var_index(*r);
        out[i] = Some(derived[i].map_or(cap.level, |d| d.min(cap.level)));
    }
    out
}

/// `X(m)` for an arbitrary matrix `m` whose `U_n` has roots `present`.
pub fn enumerate_matrix(
    m: &RationalMatrix,
    present: &[Root],
    p: u64,
    cap: DenominatorCap,
    budget: u128,
) -> Result<Vec<OracleCell>, OracleError> {
    let caps = coordinate_caps(m, present, p, cap);
    let sizes: Vec<u128> = caps
        .iter()
        .map(|c| c.map_or(1, |e| (p as u128).pow(e)))
        .collect();
    let required: u128 = sizes.iter().product();
    if required > budget {
        return Err(OracleError::BudgetExceeded { required, budget });
    }
    let coord = |i: usize, k: u128| -> Q {
        match caps[i] {
            Some(e) => Q::new(k as i128, (p as i128).pow(e)),
            None => Q::zero(),
        }
    };
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for k0 in 0..sizes[0] {
        for k1 in 0..sizes[1] {
            for k2 in 0..sizes[2] {
                for k3 in 0..sizes[3] {
                    let up = UnipotentCoords::new(
                        coord(0, k0),
                        coord(2, k2),
                        coord(1, k1),
                        coord(3, k3),
                    );
                    let mm = m * &up.to_matrix();
                    let Some((u, x)) = feasible(&mm, p)? else {
                        continue;
                    };
                    let canon = canonicalize(&up, present, p)?;
                    if !seen.insert(key(&canon)) {
                        continue;
                    }
                    out.push(OracleCell {
                        u_coords: u,
                        uprime_coords: canon,
                        x,
                    });
                }
            }
        }
    }
    out.sort_by_key(|c| key(&c.uprime_coords));
    Ok(out)
}

pub fn enumerate_x_with_budget(
    c: &CellParams,
    cap: DenominatorCap,
    budget: u128,
) -> Result<Vec<OracleCell>, OracleError> {
    let (present, _) = root_subgroup_data(c.w());
    enumerate_matrix(&build_cell_matrix(c), &present, c.p(), cap, budget)
}

/// `X(n_{w,r,s})` by brute force over `u'` up to `cap`.
pub fn enumerate_x(c: &CellParams, cap: DenominatorCap) -> Result<Vec<OracleCell>, OracleError> {
    enumerate_x_with_budget(c, cap, DEFAULT_BUDGET)
}

/// The summands `psi(u) psi'(u')` of the cells, with the character left free.
pub fn cells_to_terms(cells: &[OracleCell], p: u64) -> Result<TermList, OracleError> {
    let mut t = TermList::new(p, 0);
    for c in cells {
        t.push([
            frac_mod_one(&c.u_coords.x_alpha, p)?,
            frac_mod_one(&c.u_coords.x_beta, p)?,
            frac_mod_one(&c.uprime_coords.x_alpha, p)?,
            frac_mod_one(&c.uprime_coords.x_beta, p)?,
        ]);
    }
    Ok(t)
}

pub fn oracle_terms(c: &CellParams) -> Result<TermList, OracleError> {
    let cells = enumerate_x(c, DenominatorCap::default_for(c))?;
    cells_to_terms(&cells, c.p())
}

/// `Kl_p(n, psi, psi')` summed over the enumerated `X(n)`.
pub fn oracle_kl(c: &CellParams, ch: &CharacterPair) -> Result<KloostermanValue, OracleError> {
    Ok(oracle_terms(c)?.evaluate(ch))
}

/// Whether `X(n)` is unchanged between uniform caps `level` and `level + 1`.
pub fn certify_cap_closure(c: &CellParams, level: u32) -> Result<bool, OracleError> {
    let a = enumerate_x(c, DenominatorCap::uniform(level))?;
    let b = enumerate_x(c, DenominatorCap::uniform(level + 1))?;
    Ok(a.len() == b.len()
        && a.iter()
            .zip(&b)
            .all(|(x, y)| x.uprime_coords == y.uprime_coords))
}
