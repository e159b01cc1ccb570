use std::collections::{BTreeMap, VecDeque};

use klsp4_group::{
    build_cell_matrix, frac_mod_one, q, q_int, root_subgroup_data, CellParams, RationalMatrix,
    Root, UnipotentCoords, Q,
};
use klsp4_oracle::{canonicalize, OracleCell};
use klsp4_padic::{is_prime, FractionModOne, PrimePower};

use crate::StrataError;

/// `diag(a1, a2, c/a1, c/a2)` with unit entries `a1, a2, c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TorusElement {
    pub a1: i128,
    pub a2: i128,
    pub c: i128,
}

impl TorusElement {
    pub const IDENTITY: TorusElement = TorusElement { a1: 1, a2: 1, c: 1 };

    pub fn new(a1: i128, a2: i128, c: i128, p: u64) -> Result<Self, StrataError> {
        if [a1, a2, c]
            .iter()
            .any(|x| *x == 0 || x.rem_euclid(p as i128) == 0)
        {
            return Err(StrataError::InvalidInput(format!(
                "({a1}, {a2}, {c}) are not all units at {p}"
            )));
        }
        Ok(TorusElement { a1, a2, c })
    }

    pub fn diagonal(&self) -> [Q; 4] {
        [
            q_int(self.a1),
            q_int(self.a2),
            q(self.c, self.a1),
            q(self.c, self.a2),
        ]
    }

    pub fn matrix(&self) -> RationalMatrix {
        RationalMatrix::diag(self.diagonal())
    }

    pub fn compose(&self, o: &TorusElement) -> TorusElement {
        TorusElement {
            a1: self.a1 * o.a1,
            a2: self.a2 * o.a2,
            c: self.c * o.c,
        }
    }
}

/// `s = n^{-1} t n`, which is diagonal for a monomial `n`.
pub fn conjugate_by_cell(t: &TorusElement, n: &RationalMatrix) -> [Q; 4] {
    let ni = n.inverse().expect("cell matrices are invertible");
    let s = &(&ni * &t.matrix()) * n;
    std::array::from_fn(|i| *s.get(i, i))
}

fn conj_coords(u: &UnipotentCoords, d: &[Q; 4]) -> UnipotentCoords {
    let m = u.to_matrix();
    let scaled = RationalMatrix(std::array::from_fn(|i| {
        std::array::from_fn(|j| m.0[i][j] * d[i] / d[j])
    }));
    UnipotentCoords::from_matrix(&scaled).expect("diagonal conjugation preserves U")
}

/// `t * x = t x s^{-1}`, with `u'` brought back to canonical form.
pub fn torus_act(
    t: &TorusElement,
    x: &OracleCell,
    c: &CellParams,
) -> Result<OracleCell, StrataError> {
    let p = c.p();
    let n = build_cell_matrix(c);
    let (present, _) = root_subgroup_data(c.w());
    let s = conjugate_by_cell(t, &n);
    let u = conj_coords(&x.u_coords, &t.diagonal());
    let up = conj_coords(&x.uprime_coords, &s);
    let canon = canonicalize(&up, &present, p)?;
    let xm = &(&u.to_matrix() * &n) * &canon.to_matrix();
    if !xm.is_p_integral(p) || !xm.is_symplectic() {
        return Err(StrataError::LeftCell(format!("{xm}")));
    }
    Ok(OracleCell {
        u_coords: u,
        uprime_coords: canon,
        x: xm,
    })
}

/// `(kappa_1, kappa_2, kappa'_1, kappa'_2)`; the primed values exist only for
/// simple roots moved by `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kappa {
    pub kappa: [FractionModOne; 2],
    pub kappa_prime: [Option<FractionModOne>; 2],
}

impl Kappa {
    pub fn max_level(&self) -> u32 {
        let a = self.kappa.iter().map(|f| f.level()).max().unwrap_or(0);
        let b = self
            .kappa_prime
            .iter()
            .flatten()
            .map(|f| f.level())
            .max()
            .unwrap_or(0);
        a.max(b)
    }
}

pub fn kappa(x: &OracleCell, c: &CellParams) -> Result<Kappa, StrataError> {
    let p = c.p();
    let (present, _) = root_subgroup_data(c.w());
    let prime = |r: Root| -> Result<Option<FractionModOne>, StrataError> {
        Ok(if present.contains(&r) {
            Some(frac_mod_one(x.uprime_coords.get(r), p)?)
        } else {
            None
        })
    };
    Ok(Kappa {
        kappa: [
            frac_mod_one(&x.u_coords.x_alpha, p)?,
            frac_mod_one(&x.u_coords.x_beta, p)?,
        ],
        kappa_prime: [prime(Root::Alpha)?, prime(Root::Beta)?],
    })
}

/// Generators of `Z_p^x` acting through any finite level.
pub fn unit_generators(p: u64) -> Vec<i128> {
    if p == 2 {
        return vec![-1, 5];
    }
    let m = PrimePower::new(p, 2).expect("p^2 fits");
    let phi = p * (p - 1);
    let order = |g: u64| {
        let mut x = g % m.value();
        let mut k = 1;
        while x != 1 {
            x = m.reduce(x as i128 * g as i128);
            k += 1;
        }
        k
    };
    debug_assert!(is_prime(p));
    let g = (2..).find(|g| g % p != 0 && order(*g) == phi).unwrap();
    vec![g as i128]
}

/// A `T`-orbit in `X(n)`.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub representative: OracleCell,
    pub size: u64,
}

fn key(u: &UnipotentCoords) -> [Q; 4] {
    [u.x_alpha, u.x_two_alpha_beta, u.x_alpha_beta, u.x_beta]
}

/// Splits `cells` (all of `X(n)`) into `T`-orbits by breadth-first closure.
pub fn orbits(cells: &[OracleCell], c: &CellParams) -> Result<Vec<Orbit>, StrataError> {
    let p = c.p();
    let index: BTreeMap<[Q; 4], usize> = cells
        .iter()
        .enumerate()
        .map(|(i, x)| (key(&x.uprime_coords), i))
        .collect();
    let mut gens = Vec::new();
    for g in unit_generators(p) {
        gens.push(TorusElement::new(g, 1, 1, p)?);
        gens.push(TorusElement::new(1, g, 1, p)?);
        gens.push(TorusElement::new(1, 1, g, p)?);
    }
    let mut seen = vec![false; cells.len()];
    let mut out = Vec::new();
    for start in 0..cells.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut size = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for t in &gens {
                let y = torus_act(t, &cells[i], c)?;
                let Some(&j) = index.get(&key(&y.uprime_coords)) else {
                    return Err(StrataError::LeftCell(format!("{:?}", y.uprime_coords)));
                };
                if !seen[j] {
                    seen[j] = true;
                    size += 1;
                    queue.push_back(j);
                }
            }
        }
        out.push(Orbit {
            representative: cells[start].clone(),
            size,
        });
    }
    Ok(out)
}

/// Multiplier of `kappa_i` (and of the primed coordinates) under `t`, as
/// exact rationals: `(a1/a2, a2^2/c, s1/s2, s2/s4)`.
pub fn scaling(t: &TorusElement, n: &RationalMatrix) -> [Q; 4] {
    let d = t.diagonal();
    let s = conjugate_by_cell(t, n);
    [d[0] / d[1], d[1] / d[3], s[0] / s[1], s[1] / s[3]]
}

/// Reduces a unit rational into `(Z/p^l)^x`.
pub fn unit_mod(x: &Q, m: PrimePower) -> Result<u64, StrataError> {
    let d = klsp4_padic::inv_mod(m.residue(*x.denom()))?;
    Ok((m.residue(*x.numer()) * d).value())
}
