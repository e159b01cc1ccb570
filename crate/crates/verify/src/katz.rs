use std::collections::BTreeMap;

use klsp4_explicit::kl;
use klsp4_group::{CellParams, CharacterPair, WeylWord};
use klsp4_padic::{CyclotomicTally, PrimePower};
use serde::{Deserialize, Serialize};

use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KatzEntry {
    pub p: u64,
    pub chars: CharacterPair,
    pub magnitude: f64,
    /// `|Kl| / p^2`.
    pub ratio: f64,
    /// Whether `Kl` equals `p` times the quadratic-character sum; `None` at `p = 2`.
    pub character_form_agrees: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct KatzReport {
    pub entries: Vec<KatzEntry>,
    /// `(p, chars)` left out because `p | m1 m2 n2`.
    pub excluded: Vec<(u64, CharacterPair)>,
    pub max_ratio: Option<f64>,
    pub max_ratio_by_prime: BTreeMap<u64, f64>,
}

fn legendre(a: i128, p: u64) -> i64 {
    let a = a.rem_euclid(p as i128) as u64;
    if a == 0 {
        return 0;
    }
    let mut acc: u128 = 1;
    let (mut base, mut e) = (a as u128, (p - 1) / 2);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

/// `p sum_{a, y mod p} e(a/p) chi((a y - m1)^2 - 4 m2 n2 y^4)` for odd `p`.
pub fn character_form(p: u64, ch: &CharacterPair) -> CyclotomicTally {
    let (m1, m2, n2) = (ch.m1 as i128, ch.m2 as i128, ch.n2 as i128);
    let mut t = CyclotomicTally::with_capacity_level(p, 1);
    for a in 0..p as i128 {
        let mut w = 0;
        for y in 0..p as i128 {
            let y2 = y * y % p as i128;
            w += legendre((a * y - m1).pow(2) - 4 * m2 * n2 * (y2 * y2 % p as i128), p);
        }
        t.add_residue(a as u64, w * p as i64);
    }
    t
}

/// `Kl_p(n_{s_alpha s_beta, 2, 1})` for each prime and character with
/// `p` prime to `m1 m2 n2`.
pub fn katz_ratio_report(primes: &[u64], chars: &[CharacterPair]) -> Result<KatzReport> {
    let mut report = KatzReport::default();
    for &p in primes {
        let c = CellParams::new(WeylWord::SAlphaSBeta, p, 2, 1)?;
        PrimePower::new(p, 1)?;
        for ch in chars {
            if (ch.m1 as i128 * ch.m2 as i128 * ch.n2 as i128).rem_euclid(p as i128) == 0 {
                report.excluded.push((p, *ch));
                continue;
            }
            let v = kl(&c, ch)?;
            let magnitude = v.magnitude();
            let ratio = magnitude / (p * p) as f64;
            let character_form_agrees = (p != 2).then(|| character_form(p, ch).eq_exact(&v.tally));
            report.entries.push(KatzEntry {
                p,
                chars: *ch,
                magnitude,
                ratio,
                character_form_agrees,
            });
            let best = report.max_ratio_by_prime.entry(p).or_insert(0.0);
            *best = best.max(ratio);
            report.max_ratio = Some(report.max_ratio.unwrap_or(0.0).max(ratio));
        }
    }
    Ok(report)
}
