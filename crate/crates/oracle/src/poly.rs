//! Just enough polynomial arithmetic in the four root coordinates of `u'` to
//! read off denominator caps from the integrality of `n u'`.

use std::collections::BTreeMap;

use klsp4_group::{rational_valuation, RationalMatrix, Root, Q};
use num_traits::{One, Zero};

/// Variable order: alpha, 2alpha+beta, alpha+beta, beta.
const VARS: [Root; 4] = [Root::Alpha, Root::TwoAlphaBeta, Root::AlphaBeta, Root::Beta];

#[derive(Debug, Clone, PartialEq, Default)]
pub(crate) struct Poly(BTreeMap<[u8; 4], Q>);

impl Poly {
    fn constant(c: Q) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert([0; 4], c);
        }
        Poly(m)
    }

    fn var(i: usize) -> Self {
        let mut e = [0; 4];
        e[i] = 1;
        Poly(BTreeMap::from([(e, Q::one())]))
    }

    fn add(&self, o: &Poly) -> Poly {
        let mut m = self.0.clone();
        for (e, c) in &o.0 {
            let v = m.entry(*e).or_insert_with(Q::zero);
            *v += c;
            if v.is_zero() {
                m.remove(e);
            }
        }
        Poly(m)
    }

    fn scale(&self, k: &Q) -> Poly {
        if k.is_zero() {
            return Poly::default();
        }
        Poly(self.0.iter().map(|(e, c)| (*e, c * k)).collect())
    }

    fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::default();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &o.0 {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]];
                out = out.add(&Poly(BTreeMap::from([(e, c1 * c2)])));
            }
        }
        out
    }

    /// `(variable, kappa, c)` when the polynomial is `kappa x + c` in a single variable.
    fn single_affine(&self) -> Option<(usize, Q, Q)> {
        let mut var = None;
        let mut kappa = Q::zero();
        let mut c = Q::zero();
        for (e, coef) in &self.0 {
            let deg: u8 = e.iter().sum();
            match deg {
                0 => c = *coef,
                1 => {
                    let i = e.iter().position(|x| *x == 1).unwrap();
                    if var.is_some_and(|v| v != i) {
                        return None;
                    }
                    var = Some(i);
                    kappa = *coef;
                }
                _ => return None,
            }
        }
        var.map(|v| (v, kappa, c))
    }
}

/// Largest denominator exponent each `u'` coordinate can carry while
/// row 3 of `n u'` and the 2×2 minors of rows 3, 4 stay integral.
/// `None` means the coordinate is unconstrained by these conditions.
pub(crate) fn derived_caps(n: &RationalMatrix, present: &[Root], p: u64) -> [Option<u32>; 4] {
    let v = |r: Root| -> Poly {
        if present.contains(&r) {
            Poly::var(VARS.iter().position(|x| *x == r).unwrap())
        } else {
            Poly::default()
        }
    };
    let (b1, b2, b3, b5) = (
        v(Root::Alpha),
        v(Root::TwoAlphaBeta),
        v(Root::AlphaBeta),
        v(Root::Beta),
    );
    let one = Poly::constant(Q::one());
    let zero = Poly::default();
    let b4 = b3.add(&b1.mul(&b5).scale(&-Q::one()));
    let u = [
        [one.clone(), b1.clone(), b2, b3],
        [zero.clone(), one.clone(), b4, b5],
        [zero.clone(), zero.clone(), one.clone(), zero.clone()],
        [zero.clone(), zero.clone(), b1.scale(&-Q::one()), one],
    ];
    let row = |i: usize| -> Vec<Poly> {
        (0..4)
            .map(|j| {
                (0..4).fold(Poly::default(), |acc, k| {
                    acc.add(&u[k][j].scale(n.get(i, k)))
                })
            })
            .collect()
    };
    let (r3, r4) = (row(2), row(3));
    let mut entries = r3.clone();
    for i in 0..4 {
        for j in i + 1..4 {
            entries.push(r3[i].mul(&r4[j]).add(&r3[j].mul(&r4[i]).scale(&-Q::one())));
        }
    }
    let mut caps = [None; 4];
    for e in entries {
        let Some((i, kappa, c)) = e.single_affine() else {
            continue;
        };
        let vk = rational_valuation(&kappa, p).expect("kappa is nonzero");
        let cap = match rational_valuation(&c, p) {
            Some(vc) => vk.max(vk - vc).max(0),
            None => vk.max(0),
        } as u32;
        caps[i] = Some(caps[i].map_or(cap, |old: u32| old.min(cap)));
    }
    caps
}

pub(crate) fn var_index(r: Root) -> usize {
    VARS.iter().position(|x| *x == r).unwrap()
}
