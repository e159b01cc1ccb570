use klsp4_explicit::{gl2_kloosterman, kl};
use klsp4_group::{CellParams, CharacterPair, WeylWord};
use klsp4_oracle::{enumerate_x, DenominatorCap, OracleCell};
use klsp4_padic::{inv_mod, CyclotomicTally, PrimePower};

use crate::{enumerate_vw, eval_sw, kappa, orbits, Orbit, StrataError, ThetaCharacter, VwElement};

/// Everything about one cell that does not depend on the character.
pub struct Stratification {
    pub cell: CellParams,
    pub level: u32,
    pub cells: Vec<OracleCell>,
    pub orbits: Vec<Orbit>,
    pub vw: Vec<VwElement>,
}

impl Stratification {
    /// Level 0 carries no roots of unity, so it is raised to 1.
    pub fn new(c: &CellParams, level: u32) -> Result<Self, StrataError> {
        let level = level.max(1);
        let cells = enumerate_x(c, DenominatorCap::default_for(c))?;
        let orbits = orbits(&cells, c)?;
        let vw = enumerate_vw(c.w(), level, c.p())?;
        Ok(Stratification {
            cell: *c,
            level,
            cells,
            orbits,
            vw,
        })
    }

    /// `(p^l (1 - 1/p))^{-2} sum over orbits of N(x) S_w(theta_x; l)`.
    pub fn orbit_sum(&self, ch: &CharacterPair) -> Result<CyclotomicTally, StrataError> {
        let p = self.cell.p();
        let mut total = CyclotomicTally::zero(p);
        for o in &self.orbits {
            let theta = ThetaCharacter::from_kappa(&kappa(&o.representative, &self.cell)?, ch);
            let sw = eval_sw(&theta, &self.vw, self.level, p)?;
            total.merge(&sw.scaled(o.size as i64));
        }
        let divisor = self.vw.len() as i64;
        total
            .divided_exact(divisor)
            .ok_or_else(|| StrataError::IdentityViolation {
                divisor,
                detail: format!("{} at {}", total.normalized(), self.cell),
            })
    }

    /// Whether the orbit sum equals `Kl_p(n, psi, psi')` exactly.
    pub fn check(&self, ch: &CharacterPair) -> Result<bool, StrataError> {
        let lhs = kl(&self.cell, ch)?;
        Ok(self.orbit_sum(ch)?.eq_exact(&lhs.tally))
    }
}

pub fn stevens_identity_check(
    c: &CellParams,
    ch: &CharacterPair,
    level: u32,
) -> Result<bool, StrataError> {
    Stratification::new(c, level)?.check(ch)
}

fn unit_inv(x: u64, m: PrimePower) -> u64 {
    inv_mod(m.residue(x as i128)).expect("unit").value()
}

/// The `GL(2)` factorizations of `S_w(theta; l)` for `w` in {w0, aba, bab},
/// with `V_w(l)` and every `S(a, b; p^l)` computed once.
pub struct Factorization {
    w: WeylWord,
    m: PrimePower,
    vw: Vec<VwElement>,
    units: Vec<u64>,
    /// `S(a, b; p^l)` at index `a q + b`, all at level `l`.
    gl2: Vec<CyclotomicTally>,
}

impl Factorization {
    pub fn new(w: WeylWord, p: u64, level: u32) -> Result<Self, StrataError> {
        if !matches!(
            w,
            WeylWord::W0 | WeylWord::SAlphaSBetaSAlpha | WeylWord::SBetaSAlphaSBeta
        ) {
            return Err(StrataError::InvalidInput(format!(
                "no factorization for {w}"
            )));
        }
        let vw = enumerate_vw(w, level, p)?;
        let m = PrimePower::new(p, level)?;
        let q = m.value() as i64;
        let units = (1..m.value()).filter(|x| x % p != 0).collect();
        let mut gl2 = Vec::with_capacity((q * q) as usize);
        for a in 0..q {
            for b in 0..q {
                gl2.push(gl2_kloosterman(a, b, m).lifted(level));
            }
        }
        Ok(Factorization {
            w,
            m,
            vw,
            units,
            gl2,
        })
    }

    fn s(&self, a: i128, b: i128) -> &CyclotomicTally {
        let q = self.m.value() as usize;
        &self.gl2[self.m.reduce(a) as usize * q + self.m.reduce(b) as usize]
    }

    /// `sum over units l of e(c l / p^l) S(a(l), b; p^l)`.
    fn twisted(&self, c: i64, a: impl Fn(i128) -> i128, b: i64) -> CyclotomicTally {
        let q = self.m.value();
        let mut t = CyclotomicTally::with_capacity_level(self.m.p(), self.m.k());
        for &l in &self.units {
            let shift = self.m.reduce(c as i128 * l as i128);
            let li = unit_inv(l, self.m) as i128;
            for (i, &v) in self.s(a(li), b as i128).counts().iter().enumerate() {
                if v != 0 {
                    t.add_residue((shift + i as u64) % q, v);
                }
            }
        }
        t
    }

    /// The product side; `chars` is `(n1, n2, n1', n2')`.
    pub fn expected(&self, chars: [i64; 4]) -> CyclotomicTally {
        let [n1, n2, n1p, n2p] = chars;
        match self.w {
            WeylWord::W0 => self
                .s(n1 as i128, n1p as i128)
                .product(self.s(n2 as i128, n2p as i128)),
            WeylWord::SAlphaSBetaSAlpha => self.twisted(n2, |li| n1 as i128 * li, n1p),
            _ => self.twisted(n1, |li| n2 as i128 * li % self.m.value() as i128 * li, n2p),
        }
    }

    pub fn theta(&self, chars: [i64; 4]) -> ThetaCharacter {
        let [n1, n2, n1p, n2p] = chars;
        let prime = match self.w {
            WeylWord::W0 => [Some(n1p), Some(n2p)],
            WeylWord::SAlphaSBetaSAlpha => [Some(n1p), None],
            _ => [None, Some(n2p)],
        };
        ThetaCharacter::from_integers([n1, n2], prime, self.m.k(), self.m.p())
    }

    pub fn check(&self, chars: [i64; 4]) -> Result<bool, StrataError> {
        let sw = eval_sw(&self.theta(chars), &self.vw, self.m.k(), self.m.p())?;
        Ok(sw.eq_exact(&self.expected(chars)))
    }
}

/// Compares `S_w(theta; l)` with its product of `GL(2)` Kloosterman sums for
/// `w` in {w0, aba, bab}; `chars` is `(n1, n2, n1', n2')`.
pub fn factorization_check(
    w: WeylWord,
    p: u64,
    level: u32,
    chars: [i64; 4],
) -> Result<bool, StrataError> {
    Factorization::new(w, p, level)?.check(chars)
}
