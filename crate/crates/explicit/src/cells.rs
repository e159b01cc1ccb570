use klsp4_group::{CellParams, CharacterPair, KloostermanValue, TermList, WeylWord};
use klsp4_padic::{inv_mod, PrimePower};
use num_integer::Integer;

use crate::{ExplicitError, HatSolution};

type Result<T> = std::result::Result<T, ExplicitError>;

/// Numerators over `p^e` placed at a common level.
struct Phaser {
    p: u64,
    level: u32,
}

impl Phaser {
    fn for_cell(c: &CellParams) -> Self {
        Phaser {
            p: c.p(),
            level: c.r().max(c.s()),
        }
    }

    fn at(&self, x: i128, e: u32) -> u64 {
        let q = (self.p as i128).pow(e);
        (x.rem_euclid(q) as u64) * self.p.pow(self.level - e)
    }
}

fn pw(p: u64, e: u32) -> i128 {
    (p as i128).pow(e)
}

fn inv(x: i128, p: u64, e: u32) -> Result<i128> {
    let m = PrimePower::new(p, e)?;
    Ok(inv_mod(m.residue(x))?.value() as i128)
}

fn hat(eqs: &[(i128, i128)], p: u64, e: u32) -> Result<Option<i128>> {
    let sol = HatSolution::solve(eqs, PrimePower::new(p, e)?)?;
    debug_assert!(sol.as_ref().is_none_or(|h| h.verify()));
    Ok(sol.map(|h| h.get()))
}

fn expect(c: &CellParams, w: WeylWord, name: &'static str) -> Result<()> {
    if c.w() == w {
        Ok(())
    } else {
        Err(ExplicitError::WrongCell {
            expected: name,
            got: c.w(),
        })
    }
}

/// Terms for `id`, `s_alpha` and `s_beta`, where the sum is trivial or a
/// classical Kloosterman sum.
pub fn terms_rank1(c: &CellParams) -> Result<TermList> {
    let ph = Phaser::for_cell(c);
    let p = c.p();
    let mut t = TermList::new(p, ph.level);
    let (e, slot) = match c.w() {
        WeylWord::Id => {
            t.push_raw([0; 4]);
            return Ok(t);
        }
        WeylWord::SAlpha => (c.r(), 0),
        WeylWord::SBeta => (c.s(), 1),
        _ => {
            return Err(ExplicitError::WrongCell {
                expected: "id/a/b",
                got: c.w(),
            });
        }
    };
    let q = pw(p, e);
    for x in 0..q {
        if e > 0 && x % p as i128 == 0 {
            continue;
        }
        let xi = if e == 0 { 0 } else { inv(x, p, e)? };
        let mut term = [0; 4];
        term[slot] = ph.at(x, e);
        term[slot + 2] = ph.at(xi, e);
        t.push_raw(term);
    }
    Ok(t)
}

pub fn terms_ab(c: &CellParams) -> Result<TermList> {
    expect(c, WeylWord::SAlphaSBeta, "ab")?;
    let (p, r, s) = (c.p(), c.r(), c.s());
    let ph = Phaser::for_cell(c);
    let mut t = TermList::new(p, ph.level);
    for v4 in 0..pw(p, s) {
        if s > 0 && v4 % p as i128 == 0 {
            continue;
        }
        let v4i = if s == 0 { 0 } else { inv(v4, p, s)? };
        for v3 in 0..pw(p, r) {
            if r > s && v3 % p as i128 == 0 {
                continue;
            }
            let v3i = if r == s { 0 } else { inv(v3, p, r - s)? };
            t.push_raw([
                ph.at(v3i, r - s),
                ph.at(v4i * (v3 * v3 % pw(p, s).max(1)), s),
                0,
                ph.at(v4, s),
            ]);
        }
    }
    Ok(t)
}

pub fn terms_ba(c: &CellParams) -> Result<TermList> {
    expect(c, WeylWord::SBetaSAlpha, "ba")?;
    let (p, r, s) = (c.p(), c.r(), c.s());
    let ph = Phaser::for_cell(c);
    let mut t = TermList::new(p, ph.level);
    let k = s - 2 * r;
    for v24 in 0..pw(p, r) {
        if r > 0 && v24 % p as i128 == 0 {
            continue;
        }
        let v24i = if r == 0 { 0 } else { inv(v24, p, r)? };
        for v34 in 0..pw(p, s) {
            if k > 0 && v34 % p as i128 == 0 {
                continue;
            }
            let v34i = if k == 0 { 0 } else { inv(v34, p, k)? };
            t.push_raw([ph.at(v24i * v34, r), ph.at(v34i, k), ph.at(v24, r), 0]);
        }
    }
    Ok(t)
}

pub fn terms_aba(c: &CellParams) -> Result<TermList> {
    expect(c, WeylWord::SAlphaSBetaSAlpha, "aba")?;
    let (p, r, s) = (c.p(), c.r(), c.s());
    let ph = Phaser::for_cell(c);
    let mut t = TermList::new(p, ph.level);
    let big_r = pw(p, r);
    for a in s.saturating_sub(r)..=s / 2 {
        let pra = pw(p, r - a);
        let target = pw(p, r + a - s);
        for v2p in 0..pw(p, a).max(1) {
            let v2p = if a == 0 { 1 } else { v2p };
            if a > 0 && v2p % p as i128 == 0 {
                continue;
            }
            let v2 = (pra * v2p).rem_euclid(big_r);
            let ib = if s == 0 { 0 } else { inv(v2p, p, s)? };
            for v3 in 0..big_r {
                for v4 in 0..big_r {
                    if v3.gcd(&v4).gcd(&pra) != 1 {
                        continue;
                    }
                    let lin = pw(p, a) * v3 + v2p * v4;
                    if pra.gcd(&lin) != target {
                        continue;
                    }
                    let Some(v2h) = hat(&[(v3, -v2p * pw(p, s - a)), (v4, pw(p, s))], p, r)? else {
                        t.note_skipped();
                        continue;
                    };
                    let mut u = -ib * ib % pw(p, s).max(1) * v3 * pw(p, 2 * a + r - s)
                        + ib * v4 * pw(p, a + r - s);
                    if 2 * a < s {
                        let vp = lin / target;
                        let Ok(vi) = inv(vp * v2p, p, s) else {
                            t.note_skipped();
                            continue;
                        };
                        u += vi * (v3 * v3) * pw(p, 2 * a);
                    }
                    t.push_raw([ph.at(v2h, r), ph.at(u, s), ph.at(v2, r), 0]);
                }
            }
        }
    }
    Ok(t)
}

pub fn terms_bab(c: &CellParams) -> Result<TermList> {
    expect(c, WeylWord::SBetaSAlphaSBeta, "bab")?;
    let (p, r, s) = (c.p(), c.r(), c.s());
    let ph = Phaser::for_cell(c);
    let mut t = TermList::new(p, ph.level);
    let big_s = pw(p, s);
    let psr = pw(p, s - r);
    for v13 in 0..big_s {
        for v14 in 0..big_s {
            if big_s.gcd(&v13).gcd(&v14) != psr {
                continue;
            }
            if (v13 * v13) % big_s.gcd(&v14) != 0 {
                continue;
            }
            for v23 in 0..big_s {
                let num = v13 * v13 + v14 * v23;
                if num % big_s != 0 {
                    continue;
                }
                let v34 = -num / big_s;
                if psr.gcd(&v23).gcd(&v34) != 1 {
                    continue;
                }
                let su = hat(&[(v13 / psr, v23), (v14 / psr, -v13)], p, r)?;
                let tt = if 2 * r >= s {
                    v14 * pw(p, 2 * r - s)
                } else {
                    v14 / pw(p, s - 2 * r)
                };
                let sv = hat(&[(v23, -pw(p, 2 * r)), (v34, tt)], p, s)?;
                let (Some(u), Some(v14h)) = (su, sv) else {
                    t.note_skipped();
                    continue;
                };
                t.push_raw([ph.at(u, r), ph.at(v14h, s), 0, ph.at(v14, s)]);
            }
        }
    }
    Ok(t)
}

pub fn terms_w0(c: &CellParams) -> Result<TermList> {
    expect(c, WeylWord::W0, "w0")?;
    let (p, r, s) = (c.p(), c.r(), c.s());
    let ph = Phaser::for_cell(c);
    let mut t = TermList::new(p, ph.level);
    let (big_r, big_s) = (pw(p, r), pw(p, s));
    for v2 in 0..big_r {
        for v3 in 0..big_r {
            for v4 in 0..big_r {
                if v2.gcd(&v3).gcd(&v4).gcd(&big_r) != 1 {
                    continue;
                }
                for v14 in 0..big_s {
                    // v13 p^r + v2 v14 - v4 p^s = 0 mod p^{r+s}
                    let rhs = v4 * big_s - v2 * v14;
                    if rhs % big_r != 0 {
                        continue;
                    }
                    let v13 = (rhs / big_r).rem_euclid(big_s);
                    let a = v2 * v13 - v3 * big_s;
                    let b = v3 * v14 - v4 * v13;
                    if a % big_r != 0 || b % big_r != 0 {
                        continue;
                    }
                    let v23 = (a / big_r).rem_euclid(big_s);
                    let v34 = (b / big_r).rem_euclid(big_s);
                    if v13.gcd(&v14).gcd(&v23).gcd(&v34).gcd(&big_s) != 1 {
                        continue;
                    }
                    let h2 = hat(&[(v2, big_s), (v3, v13), (v4, v14)], p, r)?;
                    let h14 = hat(
                        &[
                            (v13, -v2 * big_r),
                            (v14, big_r * big_r),
                            (v23, -v2 * v2),
                            (v34, v3 * big_r + v2 * v4),
                        ],
                        p,
                        s,
                    )?;
                    let (Some(v2h), Some(v14h)) = (h2, h14) else {
                        t.note_skipped();
                        continue;
                    };
                    t.push_raw([ph.at(v2h, r), ph.at(v14h, s), ph.at(v2, r), ph.at(v14, s)]);
                }
            }
        }
    }
    Ok(t)
}

/// The character-free term list of any admissible cell.
pub fn terms(c: &CellParams) -> Result<TermList> {
    match c.w() {
        WeylWord::Id | WeylWord::SAlpha | WeylWord::SBeta => terms_rank1(c),
        WeylWord::SAlphaSBeta => terms_ab(c),
        WeylWord::SBetaSAlpha => terms_ba(c),
        WeylWord::SAlphaSBetaSAlpha => terms_aba(c),
        WeylWord::SBetaSAlphaSBeta => terms_bab(c),
        WeylWord::W0 => terms_w0(c),
    }
}

pub fn kl_rank1(c: &CellParams, ch: &CharacterPair) -> Result<KloostermanValue> {
    Ok(terms_rank1(c)?.evaluate(ch))
}

pub fn kl_ab(c: &CellParams, ch: &CharacterPair) -> Result<KloostermanValue> {
    Ok(terms_ab(c)?.evaluate(ch))
}

pub fn kl_ba(c: &CellParams, ch: &CharacterPair) -> Result<KloostermanValue> {
    Ok(terms_ba(c)?.evaluate(ch))
}

pub fn kl_aba(c: &CellParams, ch: &CharacterPair) -> Result<KloostermanValue> {
    Ok(terms_aba(c)?.evaluate(ch))
}

pub fn kl_bab(c: &CellParams, ch: &CharacterPair) -> Result<KloostermanValue> {
    Ok(terms_bab(c)?.evaluate(ch))
}

pub fn kl_w0(c: &CellParams, ch: &CharacterPair) -> Result<KloostermanValue> {
    Ok(terms_w0(c)?.evaluate(ch))
}

/// `Kl_p(n_{w,r,s}, psi_{m1,m2}, psi_{n1,n2})` for any Weyl element.
pub fn kl(c: &CellParams, ch: &CharacterPair) -> Result<KloostermanValue> {
    Ok(terms(c)?.evaluate(ch))
}
