use klsp4_padic::{CyclotomicTally, FractionModOne};

use crate::CharacterPair;

/// An exactly evaluated Kloosterman sum.
///
/// `term_count` is the number of summands; `skipped_unsolvable` counts tuples
/// that passed every stated condition but whose implicit congruences had no
/// solution (zero whenever the parametrisation is exact).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KloostermanValue {
    pub tally: CyclotomicTally,
    pub term_count: u64,
    pub skipped_unsolvable: u64,
}

impl KloostermanValue {
    pub fn trivial(p: u64) -> Self {
        KloostermanValue {
            tally: CyclotomicTally::one(p),
            term_count: 1,
            skipped_unsolvable: 0,
        }
    }

    pub fn magnitude(&self) -> f64 {
        self.tally.magnitude()
    }

    pub fn eq_exact(&self, other: &KloostermanValue) -> bool {
        self.tally.eq_exact(&other.tally)
    }
}

/// The summands of a Kloosterman sum with the character left free: each term
/// stores `(x_alpha, x_beta, x'_alpha, x'_beta)` as numerators over `p^level`,
/// so that a character contributes `e((m1 a + m2 b + n1 c + n2 d) / p^level)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermList {
    p: u64,
    level: u32,
    terms: Vec<[u64; 4]>,
    skipped_unsolvable: u64,
}

impl TermList {
    pub fn new(p: u64, level: u32) -> Self {
        TermList {
            p,
            level,
            terms: Vec::new(),
            skipped_unsolvable: 0,
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[[u64; 4]] {
        &self.terms
    }

    pub fn skipped_unsolvable(&self) -> u64 {
        self.skipped_unsolvable
    }

    pub fn note_skipped(&mut self) {
        self.skipped_unsolvable += 1;
    }

    fn raise_to(&mut self, level: u32) {
        if level <= self.level {
            return;
        }
        let f = self.p.pow(level - self.level);
        for t in &mut self.terms {
            for x in t.iter_mut() {
                *x *= f;
            }
        }
        self.level = level;
    }

    pub fn push(&mut self, phases: [FractionModOne; 4]) {
        let need = phases.iter().map(|f| f.level()).max().unwrap_or(0);
        self.raise_to(need);
        self.terms.push(phases.map(|f| f.numerator_at(self.level)));
    }

    /// Pushes numerators that are already over `p^level` (reduced mod `p^level`).
    pub fn push_raw(&mut self, nums: [u64; 4]) {
        debug_assert!(nums.iter().all(|x| *x < self.p.pow(self.level)));
        self.terms.push(nums);
    }

    pub fn extend(&mut self, other: TermList) {
        assert_eq!(self.p, other.p);
        let mut other = other;
        let l = self.level.max(other.level);
        self.raise_to(l);
        other.raise_to(l);
        self.terms.extend(other.terms);
        self.skipped_unsolvable += other.skipped_unsolvable;
    }

    pub fn evaluate(&self, ch: &CharacterPair) -> KloostermanValue {
        let q = self.p.pow(self.level);
        let red = |m: i64| (m as i128).rem_euclid(q as i128) as u128;
        let c = ch.as_array().map(red);
        let q128 = q as u128;
        let mut tally = CyclotomicTally::with_capacity_level(self.p, self.level);
        for t in &self.terms {
            let idx = (c[0] * t[0] as u128 % q128
                + c[1] * t[1] as u128 % q128
                + c[2] * t[2] as u128 % q128
                + c[3] * t[3] as u128 % q128)
                % q128;
            tally.add_residue(idx as u64, 1);
        }
        KloostermanValue {
            tally,
            term_count: self.terms.len() as u64,
            skipped_unsolvable: self.skipped_unsolvable,
        }
    }

    /// Sorted copy of the terms, for multiset comparisons.
    pub fn sorted(&self) -> Vec<[u64; 4]> {
        let mut v = self.terms.clone();
        v.sort_unstable();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation() {
        // two terms: x_alpha = 1/3 and x_alpha = 2/3
        let mut t = TermList::new(3, 1);
        t.push([
            FractionModOne::new(1, 1, 3),
            FractionModOne::zero(3),
            FractionModOne::zero(3),
            FractionModOne::zero(3),
        ]);
        t.push([
            FractionModOne::new(2, 1, 3),
            FractionModOne::zero(3),
            FractionModOne::zero(3),
            FractionModOne::zero(3),
        ]);
        let v = t.evaluate(&CharacterPair::new(1, 0, 0, 0));
        assert_eq!(v.term_count, 2);
        assert_eq!(v.tally.to_integer(), Some(-1));
        let v = t.evaluate(&CharacterPair::new(3, 5, 5, 5));
        assert_eq!(v.tally.to_integer(), Some(2));
    }

    #[test]
    fn raising_levels() {
        let mut t = TermList::new(2, 0);
        t.push([
            FractionModOne::new(1, 1, 2),
            FractionModOne::zero(2),
            FractionModOne::zero(2),
            FractionModOne::zero(2),
        ]);
        t.push([
            FractionModOne::new(1, 2, 2),
            FractionModOne::zero(2),
            FractionModOne::zero(2),
            FractionModOne::zero(2),
        ]);
        assert_eq!(t.level(), 2);
        assert_eq!(t.terms()[0][0], 2);
        assert_eq!(t.terms()[1][0], 1);
    }
}
