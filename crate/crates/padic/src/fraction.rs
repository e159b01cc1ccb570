use std::fmt;

use crate::{inv_mod, valuation, PadicError, PrimePower};

/// `numerator / p^level` modulo 1, kept in lowest terms.
///
/// Canonical form: `numerator` is prime to `p`, or the value is `0/p^0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FractionModOne {
    p: u64,
    level: u32,
    numerator: u64,
}

impl FractionModOne {
    pub fn zero(p: u64) -> Self {
        FractionModOne {
            p,
            level: 0,
            numerator: 0,
        }
    }

    /// `numerator / p^level` reduced mod 1.
    pub fn new(numerator: i128, level: u32, p: u64) -> Self {
        let q = (p as i128).pow(level);
        let mut num = numerator.rem_euclid(q) as u64;
        let mut level = level;
        if num == 0 {
            return Self::zero(p);
        }
        while num.is_multiple_of(p) {
            num /= p;
            level -= 1;
        }
        FractionModOne {
            p,
            level,
            numerator: num,
        }
    }

    /// The class of the rational `n / d` in `Q_p / Z_p`. The prime-to-p part of
    /// `d` is inverted modulo the p-part.
    pub fn from_ratio(n: i128, d: i128, p: u64) -> Result<Self, PadicError> {
        if d == 0 {
            return Err(PadicError::InvalidInput("zero denominator".into()));
        }
        let vd = valuation(d, p).finite().unwrap_or(0);
        if vd == 0 || n == 0 {
            return Ok(Self::zero(p));
        }
        let pk = PrimePower::new(p, vd)?;
        let unit = d / (p as i128).pow(vd);
        let inv = inv_mod(pk.residue(unit))?;
        let num = (pk.residue(n) * inv).value();
        Ok(Self::new(num as i128, vd, p))
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator == 0
    }

    /// Numerator after rewriting over `p^level` for `level >= self.level()`.
    pub fn numerator_at(&self, level: u32) -> u64 {
        assert!(level >= self.level, "cannot lower the level of a fraction");
        self.numerator * self.p.pow(level - self.level)
    }

    pub fn scale(self, k: i128) -> Self {
        Self::new(
            self.numerator as i128 * k.rem_euclid((self.p as i128).pow(self.level)),
            self.level,
            self.p,
        )
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator as f64 / (self.p as f64).powi(self.level as i32)
    }
}

impl std::ops::Add for FractionModOne {
    type Output = Self;

    fn add(self, other: Self) -> Self {
        assert_eq!(self.p, other.p, "prime mismatch");
        let l = self.level.max(other.level);
        Self::new(
            self.numerator_at(l) as i128 + other.numerator_at(l) as i128,
            l,
            self.p,
        )
    }
}

impl fmt::Display for FractionModOne {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.level == 0 {
            f.write_str("0")
        } else {
            write!(f, "{}/{}^{}", self.numerator, self.p, self.level)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical() {
        assert_eq!(FractionModOne::new(3, 2, 3), FractionModOne::new(1, 1, 3));
        assert_eq!(FractionModOne::new(9, 2, 3), FractionModOne::zero(3));
        assert_eq!(FractionModOne::new(-1, 1, 5).numerator(), 4);
    }

    #[test]
    fn ratios() {
        // 1/6 in Q_3/Z_3: 1/(3*2) = 2^{-1}/3 = 2/3
        let f = FractionModOne::from_ratio(1, 6, 3).unwrap();
        assert_eq!(f, FractionModOne::new(2, 1, 3));
        assert!(FractionModOne::from_ratio(5, 7, 3).unwrap().is_zero());
    }

    #[test]
    fn arithmetic() {
        let a = FractionModOne::new(1, 1, 3);
        let b = FractionModOne::new(2, 1, 3);
        assert!((a + b).is_zero());
        assert_eq!(a.scale(2), b);
        assert_eq!(a.scale(-1), b);
        assert_eq!(FractionModOne::new(1, 2, 2).numerator_at(3), 2);
    }
}
