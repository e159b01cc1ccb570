use std::fmt;

use klsp4_padic::PrimePower;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::{q_pow, GroupError, RationalMatrix, WeylWord, Q};

/// A Weyl cell `n_{w,r,s}` at the prime `p`, checked admissible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CellParams {
    w: WeylWord,
    p: u64,
    r: u32,
    s: u32,
}

impl CellParams {
    /// `s` is ignored for `s_alpha` and `r` for `s_beta`; both are stored as 0.
    pub fn new(w: WeylWord, p: u64, r: u32, s: u32) -> Result<Self, GroupError> {
        let (r, s) = match w {
            WeylWord::SAlpha => (r, 0),
            WeylWord::SBeta => (0, s),
            _ => (r, s),
        };
        let bad = |rule| Err(GroupError::InadmissibleCell { w, r, s, rule });
        match w {
            WeylWord::Id if r != 0 || s != 0 => return bad("r = s = 0"),
            WeylWord::SAlphaSBeta if s > r => return bad("s <= r"),
            WeylWord::SBetaSAlpha if 2 * r > s => return bad("2r <= s"),
            WeylWord::SAlphaSBetaSAlpha if s > 2 * r => return bad("s <= 2r"),
            WeylWord::SBetaSAlphaSBeta if r > s => return bad("r <= s"),
            _ => {}
        }
        PrimePower::new(p, r + s)?;
        Ok(CellParams { w, p, r, s })
    }

    pub fn w(&self) -> WeylWord {
        self.w
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// Every admissible `(r, s)` for `w` with `r + s <= max_sum`.
    pub fn admissible(w: WeylWord, p: u64, max_sum: u32) -> Vec<CellParams> {
        let mut out = Vec::new();
        for total in 0..=max_sum {
            for r in 0..=total {
                let s = total - r;
                let Ok(c) = CellParams::new(w, p, r, s) else {
                    continue;
                };
                if c.r == r && c.s == s {
                    out.push(c);
                }
            }
        }
        out
    }
}

impl fmt::Display for CellParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[p={}, r={}, s={}]", self.w, self.p, self.r, self.s)
    }
}

/// Character data `psi = psi_{m1,m2}`, `psi' = psi_{n1,n2}`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default,
)]
pub struct CharacterPair {
    pub m1: i64,
    pub m2: i64,
    pub n1: i64,
    pub n2: i64,
}

impl CharacterPair {
    pub fn new(m1: i64, m2: i64, n1: i64, n2: i64) -> Self {
        CharacterPair { m1, m2, n1, n2 }
    }

    /// `(psi', psi)`.
    pub fn swapped(self) -> Self {
        CharacterPair::new(self.n1, self.n2, self.m1, self.m2)
    }

    pub fn as_array(self) -> [i64; 4] {
        [self.m1, self.m2, self.n1, self.n2]
    }

    /// All tuples with entries drawn from `values`, in lexicographic order.
    pub fn grid(values: &[i64]) -> Vec<CharacterPair> {
        let mut out = Vec::with_capacity(values.len().pow(4));
        for &m1 in values {
            for &m2 in values {
                for &n1 in values {
                    for &n2 in values {
                        out.push(CharacterPair::new(m1, m2, n1, n2));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for CharacterPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(m1={}, m2={}, n1={}, n2={})",
            self.m1, self.m2, self.n1, self.n2
        )
    }
}

/// `n_{w,r,s} = diag(p^{-r}, p^{r-s}, p^r, p^{s-r}) · w` with the sign
/// conventions of the explicit cell formulas.
pub fn build_cell_matrix(c: &CellParams) -> RationalMatrix {
    let (p, r, s) = (c.p, c.r as i32, c.s as i32);
    let e = |k: i32| q_pow(p, k);
    let mut m = RationalMatrix::zero();
    let mut set = |i: usize, j: usize, x: Q| m.0[i][j] = x;
    match c.w {
        WeylWord::Id => {
            for i in 0..4 {
                set(i, i, e(0));
            }
        }
        WeylWord::SAlpha => {
            set(0, 1, e(-r));
            set(1, 0, -e(r));
            set(2, 3, e(r));
            set(3, 2, -e(-r));
        }
        WeylWord::SBeta => {
            set(0, 0, e(0));
            set(1, 3, e(-s));
            set(2, 2, e(0));
            set(3, 1, -e(s));
        }
        WeylWord::SAlphaSBeta => {
            set(0, 3, -e(-r));
            set(1, 0, e(r - s));
            set(2, 1, e(r));
            set(3, 2, e(s - r));
        }
        WeylWord::SBetaSAlpha => {
            set(0, 1, e(-r));
            set(1, 2, e(r - s));
            set(2, 3, e(r));
            set(3, 0, -e(s - r));
        }
        WeylWord::SAlphaSBetaSAlpha => {
            set(0, 2, -e(-r));
            set(1, 1, e(r - s));
            set(2, 0, e(r));
            set(3, 3, e(s - r));
        }
        WeylWord::SBetaSAlphaSBeta => {
            set(0, 3, -e(-r));
            set(1, 2, e(r - s));
            set(2, 1, e(r));
            set(3, 0, -e(s - r));
        }
        WeylWord::W0 => {
            set(0, 2, -e(-r));
            set(1, 3, -e(r - s));
            set(2, 0, e(r));
            set(3, 1, e(s - r));
        }
    }
    debug_assert!(m.0.iter().flatten().filter(|x| !x.is_zero()).count() == 4);
    m
}
