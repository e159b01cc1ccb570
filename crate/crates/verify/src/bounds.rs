use std::fmt;
use std::str::FromStr;

use klsp4_group::{CellParams, CharacterPair, WeylWord};
use klsp4_padic::valuation;
use serde::{Deserialize, Serialize};

use crate::{HarnessError, Result};

/// Which closed-form bound to evaluate. The nontrivial ones are named after
/// the cell they govern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundId {
    Trivial,
    /// `2 p^{k/2} (m, n, p^k)^{1/2}` on the rank-one cells.
    Weil,
    Ab,
    Ba,
    Aba,
    Bab,
    W0,
}

impl BoundId {
    pub const NONTRIVIAL: [BoundId; 5] = [
        BoundId::Ab,
        BoundId::Ba,
        BoundId::Aba,
        BoundId::Bab,
        BoundId::W0,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundId::Trivial => "trivial",
            BoundId::Weil => "weil",
            BoundId::Ab => "ab",
            BoundId::Ba => "ba",
            BoundId::Aba => "aba",
            BoundId::Bab => "bab",
            BoundId::W0 => "w0",
        }
    }

    /// The sharpest bound available for cells of type `w`.
    pub fn for_word(w: WeylWord) -> BoundId {
        match w {
            WeylWord::Id => BoundId::Trivial,
            WeylWord::SAlpha | WeylWord::SBeta => BoundId::Weil,
            WeylWord::SAlphaSBeta => BoundId::Ab,
            WeylWord::SBetaSAlpha => BoundId::Ba,
            WeylWord::SAlphaSBetaSAlpha => BoundId::Aba,
            WeylWord::SBetaSAlphaSBeta => BoundId::Bab,
            WeylWord::W0 => BoundId::W0,
        }
    }

    pub fn applies_to(self, w: WeylWord) -> bool {
        self == BoundId::Trivial || self == BoundId::for_word(w)
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundId {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        [
            BoundId::Trivial,
            BoundId::Weil,
            BoundId::Ab,
            BoundId::Ba,
            BoundId::Aba,
            BoundId::Bab,
            BoundId::W0,
        ]
        .into_iter()
        .find(|b| b.name() == s)
        .ok_or_else(|| HarnessError::InvalidInput(format!("unknown bound {s:?}")))
    }
}

/// A bound without its implied constant. `alternate` holds the neighbouring
/// case's value on cells where two case descriptions meet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub id: BoundId,
    pub value: f64,
    pub alternate: Option<f64>,
}

/// `ord_p` of each character entry, with 0 saturating at `r` (first
/// coordinates) or `s` (second coordinates).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CharacterOrders {
    pub m1: u32,
    pub m2: u32,
    pub n1: u32,
    pub n2: u32,
}

impl CharacterOrders {
    pub fn of(c: &CellParams, ch: &CharacterPair) -> Self {
        let o = |x: i64, cap: u32| valuation(x as i128, c.p()).saturate(cap);
        CharacterOrders {
            m1: o(ch.m1, c.r()),
            m2: o(ch.m2, c.s()),
            n1: o(ch.n1, c.r()),
            n2: o(ch.n2, c.s()),
        }
    }
}

pub fn bound_value(id: BoundId, c: &CellParams, ch: &CharacterPair) -> Result<BoundValue> {
    if !id.applies_to(c.w()) {
        return Err(HarnessError::InadmissibleCell { id, cell: *c });
    }
    let p = c.p() as f64;
    let pw = |e: f64| p.powf(e);
    let (r, s) = (c.r() as f64, c.s() as f64);
    let o = CharacterOrders::of(c, ch);
    let (m1, m2, n1, n2) = (o.m1 as f64, o.m2 as f64, o.n1 as f64, o.n2 as f64);
    let mut alternate = None;
    let value = match id {
        BoundId::Trivial => pw(r + s),
        BoundId::Weil => {
            let (k, a, b) = if c.w() == WeylWord::SAlpha {
                (r, m1, n1)
            } else {
                (s, m2, n2)
            };
            2.0 * pw(k / 2.0) * pw(a.min(b).min(k) / 2.0)
        }
        BoundId::Ab => {
            let first = pw(2.0 * s) * pw(m1.min(r - s));
            let second = pw(r) * pw(m2.min(s) / 2.0) * pw(n2.min(s) / 2.0);
            first.min(second)
        }
        BoundId::Ba => {
            let first = pw(3.0 * r) * pw(m2.min(s - 2.0 * r));
            let second = pw(s) * pw(m1.min(n1).min(r));
            first.min(second)
        }
        BoundId::Aba => {
            let low = || pw(r / 3.0 + 2.0 * s / 3.0 + 2.0 / 3.0 * (m1 + s).min(n1 + r) + m2 / 3.0);
            let top = || pw(r + m2.min(r + n1));
            let mid = || top() + pw(r + (s / 2.0 + m1).min(r - s / 2.0 + n1));
            let (ri, si) = (c.r(), c.s());
            let mut cases: Vec<f64> = Vec::new();
            if si <= ri {
                cases.push(low());
            }
            if ri < si && si < 2 * ri {
                cases.push(mid());
            }
            if si == 2 * ri {
                cases.push(top());
            }
            if cases.len() == 1 && ri > 0 && (si == ri || si == 2 * ri) {
                cases.push(mid());
            }
            alternate = cases.get(1).copied();
            cases[0]
        }
        BoundId::Bab => {
            let tail = 0.5 * m1 + 0.5 * (2.0 * r + m2).min(s + n2);
            let (ri, si) = (c.r(), c.s());
            let low = || pw(s / 2.0 + r / 2.0 + tail);
            let mid = || pw(s - r / 2.0 + tail);
            let top = || pw(s + m1.min(n2));
            let mut cases: Vec<f64> = Vec::new();
            if 2 * ri <= si {
                cases.push(low());
            }
            if si < 2 * ri && ri < si {
                cases.push(mid());
            }
            if ri == si {
                cases.push(top());
            }
            if cases.len() == 1 && si > 0 && (2 * ri == si || ri == si) {
                cases.push(mid());
            }
            alternate = cases.get(1).copied();
            cases[0]
        }
        BoundId::W0 => {
            let pre = pw((m1 + m2) / 2.0).min(pw((n1 + n2) / 2.0));
            pre * (s + 1.0) * pw(r / 2.0 + 3.0 * s / 4.0 + r.min(s) / 2.0)
        }
    };
    Ok(BoundValue {
        id,
        value,
        alternate,
    })
}

/// `|Kl| / bound`, with `0/0 = 0`.
pub fn ratio(magnitude: f64, bound: f64) -> f64 {
    if bound == 0.0 {
        if magnitude == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        magnitude / bound
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(w: WeylWord, p: u64, r: u32, s: u32) -> CellParams {
        CellParams::new(w, p, r, s).unwrap()
    }

    #[test]
    fn examples() {
        let ones = CharacterPair::new(1, 1, 1, 1);
        let w0 = bound_value(BoundId::W0, &cell(WeylWord::W0, 2, 1, 1), &ones).unwrap();
        assert!((w0.value - 2.0 * 2f64.powf(1.75)).abs() < 1e-12);
        assert!((w0.value - 6.7272).abs() < 1e-4);
        let ba = bound_value(BoundId::Ba, &cell(WeylWord::SBetaSAlpha, 3, 1, 2), &ones).unwrap();
        assert_eq!(ba.value, 9.0);
        let t = bound_value(
            BoundId::Trivial,
            &cell(WeylWord::SBetaSAlpha, 3, 1, 2),
            &ones,
        )
        .unwrap();
        assert_eq!(t.value, 27.0);
    }

    #[test]
    fn zero_characters_saturate() {
        let zero = CharacterPair::default();
        for (r, s) in [(1, 0), (2, 1), (3, 1), (3, 3)] {
            let c = cell(WeylWord::SAlphaSBeta, 5, r, s);
            let b = bound_value(BoundId::Ab, &c, &zero).unwrap().value;
            assert!((b - 5f64.powi((r + s) as i32)).abs() < 1e-9 * b);
        }
    }

    #[test]
    fn boundary_cells_report_both_cases() {
        let ch = CharacterPair::new(1, 1, 1, 1);
        let at = |w, r, s| bound_value(BoundId::for_word(w), &cell(w, 3, r, s), &ch).unwrap();
        assert!(at(WeylWord::SAlphaSBetaSAlpha, 2, 2).alternate.is_some());
        assert!(at(WeylWord::SAlphaSBetaSAlpha, 2, 4).alternate.is_some());
        assert!(at(WeylWord::SAlphaSBetaSAlpha, 2, 3).alternate.is_none());
        assert!(at(WeylWord::SBetaSAlphaSBeta, 1, 2).alternate.is_some());
        assert!(at(WeylWord::SBetaSAlphaSBeta, 2, 2).alternate.is_some());
        assert!(at(WeylWord::SBetaSAlphaSBeta, 2, 3).alternate.is_none());
        // r = s: the labelled case is p^{s + min(ord m1, ord n2)}
        assert_eq!(at(WeylWord::SBetaSAlphaSBeta, 2, 2).value, 9.0);
    }

    #[test]
    fn wrong_cell_is_rejected() {
        let c = cell(WeylWord::SAlphaSBeta, 3, 1, 1);
        assert!(matches!(
            bound_value(BoundId::W0, &c, &CharacterPair::default()),
            Err(HarnessError::InadmissibleCell { .. })
        ));
    }
}
