use std::f64::consts::TAU;
use std::fmt;

use sha2::{Digest, Sha256};

use crate::{FractionModOne, PadicError};

/// A finite sum `Σ c_t e(t / p^L)` stored as the integer counts `c_t`.
///
/// Two tallies represent the same algebraic number iff their canonical forms
/// agree at a common level: the only Z-linear relations among the p^L-th
/// roots of unity are the orbit sums `Σ_j e((t + j p^{L-1}) / p^L) = 0`, and
/// the canonical form subtracts the orbit minimum from each orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicTally {
    p: u64,
    level: u32,
    counts: Vec<i64>,
}

impl CyclotomicTally {
    pub fn zero(p: u64) -> Self {
        Self::with_capacity_level(p, 0)
    }

    pub fn one(p: u64) -> Self {
        Self::from_integer(p, 1)
    }

    pub fn from_integer(p: u64, n: i64) -> Self {
        let mut t = Self::zero(p);
        t.counts[0] = n;
        t
    }

    /// The zero tally at `level`.
    pub fn with_capacity_level(p: u64, level: u32) -> Self {
        CyclotomicTally {
            p,
            level,
            counts: vec![0; p.pow(level) as usize],
        }
    }

    /// Builds a tally directly from a count vector of length `p^level`.
    pub fn from_counts(p: u64, level: u32, counts: Vec<i64>) -> Result<Self, PadicError> {
        if counts.len() as u64 != p.pow(level) {
            return Err(PadicError::InvalidInput(format!(
                "expected {} counts, got {}",
                p.pow(level),
                counts.len()
            )));
        }
        Ok(CyclotomicTally { p, level, counts })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    /// Nonzero `(residue, count)` pairs.
    pub fn support(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(t, c)| (t as u64, *c))
    }

    pub fn l1_norm(&self) -> i64 {
        self.counts.iter().map(|c| c.abs()).sum()
    }

    /// The same number written over `p^level`, `level >= self.level()`.
    pub fn lifted(&self, level: u32) -> Self {
        assert!(level >= self.level, "cannot lower a tally's level");
        if level == self.level {
            return self.clone();
        }
        let step = self.p.pow(level - self.level) as usize;
        let mut out = Self::with_capacity_level(self.p, level);
        for (t, c) in self.counts.iter().enumerate() {
            out.counts[t * step] = *c;
        }
        out
    }

    fn raise_to(&mut self, level: u32) {
        if level > self.level {
            *self = self.lifted(level);
        }
    }

    /// Adds `weight · e(phase)`, raising the level if the phase needs it.
    pub fn add_term(&mut self, phase: &FractionModOne, weight: i64) -> Result<(), PadicError> {
        if phase.prime() != self.p {
            return Err(PadicError::InvalidInput(format!(
                "phase prime {} differs from tally prime {}",
                phase.prime(),
                self.p
            )));
        }
        self.raise_to(phase.level());
        let t = phase.numerator_at(self.level) as usize;
        self.counts[t] += weight;
        Ok(())
    }

    /// Adds `weight · e(t / p^level)` for a residue already at this tally's level.
    #[inline]
    pub fn add_residue(&mut self, t: u64, weight: i64) {
        self.counts[t as usize] += weight;
    }

    pub fn merge(&mut self, other: &CyclotomicTally) {
        assert_eq!(self.p, other.p, "prime mismatch");
        self.raise_to(other.level);
        let o = other.lifted(self.level);
        for (a, b) in self.counts.iter_mut().zip(&o.counts) {
            *a += b;
        }
    }

    pub fn sum(&self, other: &CyclotomicTally) -> CyclotomicTally {
        let mut out = self.clone();
        out.merge(other);
        out
    }

    pub fn scaled(&self, k: i64) -> CyclotomicTally {
        CyclotomicTally {
            p: self.p,
            level: self.level,
            counts: self.counts.iter().map(|c| c * k).collect(),
        }
    }

    pub fn negated(&self) -> CyclotomicTally {
        self.scaled(-1)
    }

    /// Product of the represented numbers.
    pub fn product(&self, other: &CyclotomicTally) -> CyclotomicTally {
        assert_eq!(self.p, other.p, "prime mismatch");
        let level = self.level.max(other.level);
        let a = self.lifted(level);
        let b = other.lifted(level);
        let q = a.counts.len();
        let mut out = Self::with_capacity_level(self.p, level);
        for (i, ci) in a.counts.iter().enumerate().filter(|(_, c)| **c != 0) {
            for (j, cj) in b.counts.iter().enumerate().filter(|(_, c)| **c != 0) {
                out.counts[(i + j) % q] += ci * cj;
            }
        }
        out
    }

    /// Canonical form at the current level.
    pub fn canonical(&self) -> CyclotomicTally {
        let mut out = self.clone();
        if self.level == 0 {
            return out;
        }
        let q = self.p.pow(self.level - 1) as usize;
        for t in 0..q {
            let m = (0..self.p as usize)
                .map(|j| out.counts[t + j * q])
                .min()
                .unwrap_or(0);
            if m != 0 {
                for j in 0..self.p as usize {
                    out.counts[t + j * q] -= m;
                }
            }
        }
        out
    }

    /// Canonical form at the lowest level `>= 1` that can hold it.
    ///
    /// Level 0 carries no orbit relation, so lifting a level-0 canonical form
    /// is not canonical at level 1; from level 1 upward lifting is canonical,
    /// which makes this form unique.
    pub fn normalized(&self) -> CyclotomicTally {
        let mut out = self.lifted(self.level.max(1)).canonical();
        while out.level > 1 && out.support().all(|(t, _)| t % out.p == 0) {
            let counts = out.counts.iter().step_by(out.p as usize).copied().collect();
            out = CyclotomicTally {
                p: out.p,
                level: out.level - 1,
                counts,
            };
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.canonical().counts.iter().all(|c| *c == 0)
    }

    /// The value as an ordinary integer, when it is one.
    pub fn to_integer(&self) -> Option<i64> {
        let n = self.normalized();
        if n.level != 1 {
            return None;
        }
        let rest = &n.counts[1..];
        if rest.iter().all(|c| *c == 0) {
            Some(n.counts[0])
        } else if n.counts[0] == 0 && rest.iter().all(|c| *c == rest[0]) {
            Some(-rest[0])
        } else {
            None
        }
    }

    /// Exact equality of the represented numbers.
    pub fn eq_exact(&self, other: &CyclotomicTally) -> bool {
        if self.p != other.p {
            return match (self.to_integer(), other.to_integer()) {
                (Some(a), Some(b)) => a == b,
                _ => false,
            };
        }
        self.normalized() == other.normalized()
    }

    /// `self / d` when every canonical count is divisible by `d`.
    pub fn divided_exact(&self, d: i64) -> Option<CyclotomicTally> {
        if d == 0 {
            return None;
        }
        let c = self.canonical();
        if c.counts.iter().any(|x| x % d != 0) {
            return None;
        }
        Some(CyclotomicTally {
            p: c.p,
            level: c.level,
            counts: c.counts.iter().map(|x| x / d).collect(),
        })
    }

    /// Real and imaginary parts, evaluated from the exact counts.
    pub fn to_complex(&self) -> (f64, f64) {
        let q = self.counts.len() as f64;
        let (mut re, mut im) = (0.0, 0.0);
        for (t, c) in self.support() {
            let theta = TAU * t as f64 / q;
            re += c as f64 * theta.cos();
            im += c as f64 * theta.sin();
        }
        (re, im)
    }

    /// `|Σ c_t e(t/p^L)|` in double precision; absolute error well under
    /// `1e-9 · Σ|c_t|` for the levels used here; exact for integer sums.
    pub fn magnitude(&self) -> f64 {
        let c = self.canonical();
        if let Some(k) = c.to_integer() {
            return k.unsigned_abs() as f64;
        }
        let (re, im) = c.to_complex();
        re.hypot(im)
    }

    /// SHA-256 over the normalized form: `p` and `level` as little-endian
    /// `u64`/`u32`, then each count as little-endian `i64`.
    pub fn digest(&self) -> String {
        let n = self.normalized();
        let mut h = Sha256::new();
        h.update(n.p.to_le_bytes());
        h.update(n.level.to_le_bytes());
        for c in &n.counts {
            h.update(c.to_le_bytes());
        }
        hex::encode(h.finalize())
    }
}

impl fmt::Display for CyclotomicTally {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.normalized();
        if let Some(k) = n.to_integer() {
            return write!(f, "{k}");
        }
        let q = n.p.pow(n.level);
        let mut first = true;
        for (t, c) in n.support() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{c}·e({t}/{q})")?;
        }
        Ok(())
    }
}
