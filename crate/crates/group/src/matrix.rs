use std::fmt;
use std::ops::Mul;

use klsp4_padic::{valuation, FractionModOne, PadicError};
use num_rational::Ratio;
use num_traits::{One, Zero};

/// Exact rationals. Entries met here are p-adic numbers with small height.
pub type Q = Ratio<i128>;

pub fn q(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

pub fn q_int(n: i128) -> Q {
    Q::from_integer(n)
}

/// `p^e` for any integer exponent.
pub fn q_pow(p: u64, e: i32) -> Q {
    let base = (p as i128).pow(e.unsigned_abs());
    if e >= 0 {
        Q::from_integer(base)
    } else {
        Q::new(1, base)
    }
}

/// p-adic valuation of a rational; `None` for zero.
pub fn rational_valuation(x: &Q, p: u64) -> Option<i32> {
    if x.is_zero() {
        return None;
    }
    let vn = valuation(*x.numer(), p).finite()? as i32;
    let vd = valuation(*x.denom(), p).finite()? as i32;
    Some(vn - vd)
}

pub fn is_p_integral(x: &Q, p: u64) -> bool {
    rational_valuation(x, p).is_none_or(|v| v >= 0)
}

/// The class of `x` in `Q_p / Z_p`.
pub fn frac_mod_one(x: &Q, p: u64) -> Result<FractionModOne, PadicError> {
    FractionModOne::from_ratio(*x.numer(), *x.denom(), p)
}

/// The representative of `x mod Z_p` in `[0, 1)` with a `p`-power denominator.
pub fn frac_part(x: &Q, p: u64) -> Result<Q, PadicError> {
    let f = frac_mod_one(x, p)?;
    Ok(Q::new(f.numerator() as i128, (p as i128).pow(f.level())))
}

/// A 4×4 matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix(pub [[Q; 4]; 4]);

impl RationalMatrix {
    pub fn zero() -> Self {
        RationalMatrix(std::array::from_fn(|_| std::array::from_fn(|_| Q::zero())))
    }

    pub fn identity() -> Self {
        Self::diag([Q::one(), Q::one(), Q::one(), Q::one()])
    }

    pub fn diag(d: [Q; 4]) -> Self {
        let mut m = Self::zero();
        for (i, x) in d.into_iter().enumerate() {
            m.0[i][i] = x;
        }
        m
    }

    /// The symplectic form `[[0, I], [-I, 0]]`.
    pub fn j() -> Self {
        let mut m = Self::zero();
        m.0[0][2] = Q::one();
        m.0[1][3] = Q::one();
        m.0[2][0] = -Q::one();
        m.0[3][1] = -Q::one();
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.0[i][j]
    }

    pub fn row(&self, i: usize) -> &[Q; 4] {
        &self.0[i]
    }

    pub fn transpose(&self) -> Self {
        RationalMatrix(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[j][i])
        }))
    }

    pub fn is_symplectic(&self) -> bool {
        let j = Self::j();
        &(&self.transpose() * &j) * self == j
    }

    pub fn is_p_integral(&self, p: u64) -> bool {
        self.0.iter().flatten().all(|x| is_p_integral(x, p))
    }

    /// Gauss–Jordan inverse.
    pub fn inverse(&self) -> Option<Self> {
        let mut a = self.0;
        let mut inv = Self::identity().0;
        for col in 0..4 {
            let piv = (col..4).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let d = a[col][col];
            for k in 0..4 {
                a[col][k] /= d;
                inv[col][k] /= d;
            }
            for r in 0..4 {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col];
                    for k in 0..4 {
                        let (x, y) = (a[col][k], inv[col][k]);
                        a[r][k] -= f * x;
                        inv[r][k] -= f * y;
                    }
                }
            }
        }
        Some(RationalMatrix(inv))
    }

    /// For a monomial matrix, `sigma` with `n e_j ∈ Q e_{sigma[j]}`.
    pub fn monomial_permutation(&self) -> Option<[usize; 4]> {
        let mut sigma = [0; 4];
        for (j, s) in sigma.iter_mut().enumerate() {
            let rows: Vec<usize> = (0..4).filter(|&i| !self.0[i][j].is_zero()).collect();
            if rows.len() != 1 {
                return None;
            }
            *s = rows[0];
        }
        let mut seen = [false; 4];
        for &s in &sigma {
            if std::mem::replace(&mut seen[s], true) {
                return None;
            }
        }
        Some(sigma)
    }

    /// True when every nonzero entry has a pure p-power denominator.
    pub fn has_p_power_denominators(&self, p: u64) -> bool {
        self.0.iter().flatten().all(|x| {
            let mut d = *x.denom();
            while d % p as i128 == 0 {
                d /= p as i128;
            }
            d == 1
        })
    }
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;

    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        let mut out = RationalMatrix::zero();
        for i in 0..4 {
            for k in 0..4 {
                let a = self.0[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..4 {
                    if !rhs.0[k][j].is_zero() {
                        out.0[i][j] += a * rhs.0[k][j];
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.0.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", cells.join(", "))?;
            if i < 3 {
                f.write_str("\n")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations_of_rationals() {
        assert_eq!(rational_valuation(&q(9, 2), 3), Some(2));
        assert_eq!(rational_valuation(&q(5, 12), 2), Some(-2));
        assert_eq!(rational_valuation(&Q::zero(), 2), None);
        assert!(is_p_integral(&q(1, 2), 3));
        assert!(!is_p_integral(&q(1, 3), 3));
    }

    #[test]
    fn inverse_round_trip() {
        let mut m = RationalMatrix::j();
        m.0[0][1] = q(1, 3);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, RationalMatrix::identity());
        assert!(RationalMatrix::zero().inverse().is_none());
    }

    #[test]
    fn j_is_symplectic() {
        assert!(RationalMatrix::j().is_symplectic());
        assert!(!RationalMatrix::diag([q_int(2), q_int(1), q_int(1), q_int(1)]).is_symplectic());
        assert!(RationalMatrix::diag([q_int(2), q_int(3), q(1, 2), q(1, 3)]).is_symplectic());
    }
}
