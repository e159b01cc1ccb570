use crate::{valuation, PadicError};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The modulus `p^k` with `p` prime and `p^k < 2^63`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePower {
    p: u64,
    k: u32,
    value: u64,
}

impl PrimePower {
    pub fn new(p: u64, k: u32) -> Result<Self, PadicError> {
        if !is_prime(p) {
            return Err(PadicError::NotPrime(p));
        }
        let value = p
            .checked_pow(k)
            .filter(|v| *v < 1 << 63)
            .ok_or(PadicError::ModulusTooLarge { p, k })?;
        Ok(PrimePower { p, k, value })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    /// Least nonnegative representative of `x` modulo `p^k`.
    pub fn reduce(&self, x: i128) -> u64 {
        x.rem_euclid(self.value as i128) as u64
    }

    pub fn residue(&self, x: i128) -> Residue {
        Residue {
            value: self.reduce(x),
            modulus: *self,
        }
    }

    pub fn is_unit(&self, x: i128) -> bool {
        self.k == 0 || x.rem_euclid(self.p as i128) != 0
    }
}

/// An element of `Z / p^k Z`, stored by its least nonnegative lift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: PrimePower,
}

impl Residue {
    pub fn new(value: i128, modulus: PrimePower) -> Self {
        modulus.residue(value)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> PrimePower {
        self.modulus
    }
}

impl std::ops::Add for Residue {
    type Output = Residue;

    fn add(self, other: Residue) -> Residue {
        debug_assert_eq!(self.modulus, other.modulus);
        self.modulus
            .residue(self.value as i128 + other.value as i128)
    }
}

impl std::ops::Mul for Residue {
    type Output = Residue;

    fn mul(self, other: Residue) -> Residue {
        debug_assert_eq!(self.modulus, other.modulus);
        let m = self.modulus.value as u128;
        Residue {
            value: ((self.value as u128 * other.value as u128) % m) as u64,
            modulus: self.modulus,
        }
    }
}

impl std::ops::Neg for Residue {
    type Output = Residue;

    fn neg(self) -> Residue {
        self.modulus.residue(-(self.value as i128))
    }
}

/// Inverse of a unit modulo `p^k`.
pub fn inv_mod(a: Residue) -> Result<Residue, PadicError> {
    let m = a.modulus;
    if m.k == 0 {
        return Ok(m.residue(0));
    }
    if a.value.is_multiple_of(m.p) {
        return Err(PadicError::NotInvertible {
            value: a.value,
            p: m.p,
            k: m.k,
        });
    }
    // extended Euclid on (a, p^k)
    let (mut r0, mut r1) = (m.value as i128, a.value as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    Ok(m.residue(t0))
}

/// Solution set of `a x ≡ b (mod p^k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearSolution {
    NoSolution,
    /// All `x ≡ x0 (mod period)`, with `0 <= x0 < period`.
    Progression {
        x0: u64,
        period: u64,
    },
}

impl LinearSolution {
    pub fn contains(&self, x: u64) -> bool {
        match *self {
            LinearSolution::NoSolution => false,
            LinearSolution::Progression { x0, period } => x % period == x0,
        }
    }
}

pub fn solve_scaled_linear(a: Residue, b: Residue) -> Result<LinearSolution, PadicError> {
    if a.modulus != b.modulus {
        return Err(PadicError::InvalidInput(format!(
            "moduli differ: {} vs {}",
            a.modulus.value, b.modulus.value
        )));
    }
    Ok(solve_linear_raw(
        a.value as i128,
        b.value as i128,
        a.modulus,
    ))
}

fn solve_linear_raw(a: i128, b: i128, m: PrimePower) -> LinearSolution {
    let a = m.reduce(a);
    let b = m.reduce(b);
    let v = valuation(a as i128, m.p).saturate(m.k);
    let pv = m.p.pow(v);
    if !b.is_multiple_of(pv) {
        return LinearSolution::NoSolution;
    }
    let period = m.value / pv;
    if period == 1 {
        return LinearSolution::Progression { x0: 0, period: 1 };
    }
    let sub = PrimePower {
        p: m.p,
        k: m.k - v,
        value: period,
    };
    let unit = sub.residue((a / pv) as i128);
    let inv = inv_mod(unit).expect("unit part is invertible");
    let x0 = (inv * sub.residue((b / pv) as i128)).value;
    LinearSolution::Progression { x0, period }
}

/// Smallest nonnegative `x < p^k` with `a_i x ≡ b_i (mod p^k)` for every `(a_i, b_i)`.
///
/// `Ok(None)` means the system has no solution.
pub fn solve_directed_system(
    eqs: &[(i128, i128)],
    modulus: PrimePower,
) -> Result<Option<Residue>, PadicError> {
    if eqs.is_empty() {
        return Err(PadicError::InvalidInput("empty equation list".into()));
    }
    // Solution sets are progressions with p-power periods, so any two are
    // nested or disjoint: intersecting keeps the finer period.
    let (mut x0, mut period) = (0u64, 1u64);
    for &(a, b) in eqs {
        match solve_linear_raw(a, b, modulus) {
            LinearSolution::NoSolution => return Ok(None),
            LinearSolution::Progression { x0: y0, period: q } => {
                let (small, big) = if q <= period {
                    (q, period)
                } else {
                    (period, q)
                };
                let (xs, xb) = if q <= period { (y0, x0) } else { (x0, y0) };
                if xb % small != xs {
                    return Ok(None);
                }
                x0 = xb;
                period = big;
            }
        }
    }
    Ok(Some(modulus.residue(x0 as i128)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(p: u64, k: u32) -> PrimePower {
        PrimePower::new(p, k).unwrap()
    }

    #[test]
    fn construction() {
        assert_eq!(PrimePower::new(4, 1), Err(PadicError::NotPrime(4)));
        assert!(PrimePower::new(2, 63).is_err());
        assert_eq!(pp(2, 62).value(), 1 << 62);
        assert_eq!(pp(7, 0).value(), 1);
    }

    #[test]
    fn inverses() {
        assert_eq!(inv_mod(pp(2, 3).residue(3)).unwrap().value(), 3);
        assert_eq!(inv_mod(pp(5, 3).residue(1)).unwrap().value(), 1);
        let x = inv_mod(pp(5, 2).residue(2)).unwrap().value();
        let scan = (0..25).find(|x| 2 * x % 25 == 1).unwrap();
        assert_eq!(x, scan);
        assert_eq!(x, 13);
        assert!(matches!(
            inv_mod(pp(3, 2).residue(6)),
            Err(PadicError::NotInvertible { .. })
        ));
    }

    #[test]
    fn scaled_linear() {
        let m = pp(3, 2);
        let s = |a, b| solve_scaled_linear(m.residue(a), m.residue(b)).unwrap();
        assert_eq!(s(3, 1), LinearSolution::NoSolution);
        assert_eq!(s(1, 7), LinearSolution::Progression { x0: 7, period: 9 });
        assert_eq!(s(6, 3), LinearSolution::Progression { x0: 2, period: 3 });
        let scan: Vec<u64> = (0..9).filter(|x| (6 * x) % 9 == 3).collect();
        assert_eq!(scan, vec![2, 5, 8]);
        assert_eq!(s(0, 0), LinearSolution::Progression { x0: 0, period: 1 });
    }

    #[test]
    fn mismatched_moduli() {
        let e = solve_scaled_linear(pp(3, 2).residue(1), pp(3, 1).residue(1));
        assert!(matches!(e, Err(PadicError::InvalidInput(_))));
    }

    #[test]
    fn directed_systems() {
        let m = pp(3, 2);
        let s = |eqs: &[(i128, i128)]| solve_directed_system(eqs, m).unwrap().map(|r| r.value());
        assert_eq!(s(&[(1, 4)]), Some(4));
        assert_eq!(s(&[(3, 6), (1, 2)]), Some(2));
        // 3·5 = 15 ≡ 6, so this pair is consistent
        assert_eq!(s(&[(3, 6), (1, 5)]), Some(5));
        assert_eq!(s(&[(3, 6), (1, 4)]), None);
        for b in 0..9 {
            let scan = (0..9u64).find(|x| (3 * x) % 9 == 6 && x % 9 == b);
            assert_eq!(s(&[(3, 6), (1, b as i128)]), scan);
        }
        assert_eq!(s(&[(3, 6)]), Some(2));
        assert_eq!(s(&[(-1, -4)]), Some(4));
        assert!(solve_directed_system(&[], m).is_err());
    }
}
