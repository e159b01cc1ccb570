use klsp4_padic::{inv_mod, is_prime, CyclotomicTally, PrimePower};
use serde::{Deserialize, Serialize};

use crate::{HarnessError, Result};

/// Critical points of `f(x, y) = m1/x + m2 x^2/y + n2 y` modulo `p^j`, their
/// Hessian ranks over `F_p`, and the resulting estimate for
/// `S = sum over units x, y mod p^s of e(f(x, y) / p^s)` with `s = s_prime`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationaryPhaseRecord {
    pub p: u64,
    pub m1: i64,
    pub m2: i64,
    pub n2: i64,
    pub j: u32,
    pub s_prime: u32,
    /// `p` divides none of `2, m1, m2, n2`.
    pub generic: bool,
    pub d_points: Vec<[u64; 2]>,
    pub ranks: Vec<u32>,
    /// `max(2 - rank)` over the critical points, 0 when there are none.
    pub t: u32,
    pub sum_magnitude: f64,
    pub sum_digest: String,
    /// `|D| p^{s + t/2}`.
    pub estimate: f64,
    pub estimate_holds: bool,
}

fn unit_inv(x: u64, m: PrimePower) -> u64 {
    inv_mod(m.residue(x as i128)).expect("unit").value()
}

/// Rank over `F_p` of the Hessian of `f` at the unit point `(x, y)`.
pub fn hessian_rank(p: u64, m1: i64, m2: i64, x: u64, y: u64) -> u32 {
    let f = PrimePower::new(p, 1).expect("prime");
    let r = |v: i128| f.reduce(v) as i128;
    let (x, y) = (r(x as i128), r(y as i128));
    let (xi, yi) = (unit_inv(x as u64, f) as i128, unit_inv(y as u64, f) as i128);
    let (m1, m2) = (m1 as i128, m2 as i128);
    let fxx = r(2 * m1 * r(xi * xi) * xi + 2 * m2 * yi);
    let fxy = r(-2 * m2 * x * r(yi * yi));
    let fyy = r(2 * m2 * r(x * x) * r(r(yi * yi) * yi));
    let det = r(fxx * fyy - fxy * fxy);
    if det != 0 {
        2
    } else if fxx == 0 && fxy == 0 && fyy == 0 {
        0
    } else {
        1
    }
}

/// Units `(x, y)` mod `p^j` with `2 m2 x^3 = m1 y` and `m2 x^2 = n2 y^2`.
pub fn critical_points(p: u64, m1: i64, m2: i64, n2: i64, j: u32) -> Result<Vec<[u64; 2]>> {
    let m = PrimePower::new(p, j)?;
    let (m1, m2, n2) = (m1 as i128, m2 as i128, n2 as i128);
    let mut out = Vec::new();
    for x in (1..m.value()).filter(|x| x % p != 0) {
        let xi = x as i128;
        for y in (1..m.value()).filter(|y| y % p != 0) {
            let yi = y as i128;
            if m.reduce(2 * m2 * xi * xi * xi - m1 * yi) == 0
                && m.reduce(m2 * xi * xi - n2 * yi * yi) == 0
            {
                out.push([x, y]);
            }
        }
    }
    Ok(out)
}

/// The exponential sum `S` at modulus `p^s`.
pub fn phase_sum(p: u64, m1: i64, m2: i64, n2: i64, s: u32) -> Result<CyclotomicTally> {
    let m = PrimePower::new(p, s)?;
    let mut t = CyclotomicTally::with_capacity_level(p, s);
    if s == 0 {
        return Ok(CyclotomicTally::one(p));
    }
    let q = m.value() as i128;
    let (m1, m2, n2) = (m1 as i128, m2 as i128, n2 as i128);
    for x in (1..m.value()).filter(|x| x % p != 0) {
        let xi = unit_inv(x, m) as i128;
        let x = x as i128;
        for y in (1..m.value()).filter(|y| y % p != 0) {
            let yi = unit_inv(y, m) as i128;
            let v = (m1 * xi + m2 * (x * x % q) * yi + n2 * y as i128).rem_euclid(q);
            t.add_residue(v as u64, 1);
        }
    }
    Ok(t)
}

pub fn stationary_phase_report(
    p: u64,
    m1: i64,
    m2: i64,
    n2: i64,
    j: u32,
    s_prime: u32,
) -> Result<StationaryPhaseRecord> {
    if p == 2 || !is_prime(p) {
        return Err(HarnessError::InvalidInput(format!(
            "stationary phase needs an odd prime, got {p}"
        )));
    }
    if j == 0 {
        return Err(HarnessError::InvalidInput("j must be at least 1".into()));
    }
    let generic = [m1, m2, n2].iter().all(|&c| c.rem_euclid(p as i64) != 0);
    let d_points = critical_points(p, m1, m2, n2, j)?;
    let ranks: Vec<u32> = d_points
        .iter()
        .map(|&[x, y]| hessian_rank(p, m1, m2, x, y))
        .collect();
    let t = ranks.iter().map(|r| 2 - r).max().unwrap_or(0);
    let sum = phase_sum(p, m1, m2, n2, s_prime)?;
    let estimate = d_points.len() as f64 * (p as f64).powf(s_prime as f64 + t as f64 / 2.0);
    let sum_magnitude = sum.magnitude();
    let estimate_holds = if d_points.is_empty() {
        sum.is_zero()
    } else {
        sum_magnitude <= estimate * (1.0 + 1e-12)
    };
    Ok(StationaryPhaseRecord {
        p,
        m1,
        m2,
        n2,
        j,
        s_prime,
        generic,
        d_points,
        ranks,
        t,
        sum_magnitude,
        sum_digest: sum.digest(),
        estimate,
        estimate_holds,
    })
}
