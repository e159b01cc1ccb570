use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{build_cell_matrix, CellParams, GroupError};

/// The eight elements of the Weyl group of Sp(4), as reduced words in the
/// simple reflections `s_alpha`, `s_beta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WeylWord {
    #[serde(rename = "id")]
    Id,
    #[serde(rename = "a")]
    SAlpha,
    #[serde(rename = "b")]
    SBeta,
    #[serde(rename = "ab")]
    SAlphaSBeta,
    #[serde(rename = "ba")]
    SBetaSAlpha,
    #[serde(rename = "aba")]
    SAlphaSBetaSAlpha,
    #[serde(rename = "bab")]
    SBetaSAlphaSBeta,
    /// `s_alpha s_beta s_alpha s_beta`
    #[serde(rename = "w0")]
    W0,
}

impl WeylWord {
    pub const ALL: [WeylWord; 8] = [
        WeylWord::Id,
        WeylWord::SAlpha,
        WeylWord::SBeta,
        WeylWord::SAlphaSBeta,
        WeylWord::SBetaSAlpha,
        WeylWord::SAlphaSBetaSAlpha,
        WeylWord::SBetaSAlphaSBeta,
        WeylWord::W0,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            WeylWord::Id => "id",
            WeylWord::SAlpha => "a",
            WeylWord::SBeta => "b",
            WeylWord::SAlphaSBeta => "ab",
            WeylWord::SBetaSAlpha => "ba",
            WeylWord::SAlphaSBetaSAlpha => "aba",
            WeylWord::SBetaSAlphaSBeta => "bab",
            WeylWord::W0 => "w0",
        }
    }

    pub fn length(self) -> usize {
        match self {
            WeylWord::Id => 0,
            WeylWord::W0 => 4,
            w => w.short_name().len(),
        }
    }
}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for WeylWord {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s
            .to_ascii_lowercase()
            .replace("s_alpha", "a")
            .replace("s_beta", "b")
            .replace("salpha", "a")
            .replace("sbeta", "b")
            .chars()
            .filter(|c| !matches!(c, ' ' | '_' | '-' | '*'))
            .collect();
        let w = match norm.as_str() {
            "id" | "e" | "1" | "" => WeylWord::Id,
            "a" => WeylWord::SAlpha,
            "b" => WeylWord::SBeta,
            "ab" => WeylWord::SAlphaSBeta,
            "ba" => WeylWord::SBetaSAlpha,
            "aba" => WeylWord::SAlphaSBetaSAlpha,
            "bab" => WeylWord::SBetaSAlphaSBeta,
            "w0" | "abab" | "baba" | "long" => WeylWord::W0,
            _ => return Err(GroupError::UnknownWeylWord(s.to_string())),
        };
        Ok(w)
    }
}

/// Positive roots of Sp(4) with `alpha` short and `beta` long.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Root {
    Alpha,
    Beta,
    AlphaBeta,
    TwoAlphaBeta,
}

impl Root {
    pub const ALL: [Root; 4] = [Root::Alpha, Root::Beta, Root::AlphaBeta, Root::TwoAlphaBeta];

    /// The matrix entry (0-indexed) carrying the root coordinate.
    pub fn position(self) -> (usize, usize) {
        match self {
            Root::Alpha => (0, 1),
            Root::TwoAlphaBeta => (0, 2),
            Root::AlphaBeta => (0, 3),
            Root::Beta => (1, 3),
        }
    }

    pub fn is_simple(self) -> bool {
        matches!(self, Root::Alpha | Root::Beta)
    }

    pub fn name(self) -> &'static str {
        match self {
            Root::Alpha => "alpha",
            Root::Beta => "beta",
            Root::AlphaBeta => "alpha+beta",
            Root::TwoAlphaBeta => "2alpha+beta",
        }
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Rank of each row in the order that makes `U` upper triangular.
const ROW_RANK: [usize; 4] = [0, 1, 3, 2];

/// Splits the positive roots into those `w` sends negative (the roots of
/// `U_w`) and those it keeps positive (the roots of `Ū_w`).
pub fn root_subgroup_data(w: WeylWord) -> (Vec<Root>, Vec<Root>) {
    let cell = CellParams::new(w, 2, 0, 0).expect("r = s = 0 is admissible for every w");
    let n = build_cell_matrix(&cell);
    let sigma = n
        .monomial_permutation()
        .expect("cell matrices are monomial");
    let mut moved = Vec::new();
    let mut kept = Vec::new();
    for root in Root::ALL {
        let (i, j) = root.position();
        // n E_ij n^{-1} is a multiple of E_{sigma(i) sigma(j)}
        if ROW_RANK[sigma[i]] > ROW_RANK[sigma[j]] {
            moved.push(root);
        } else {
            kept.push(root);
        }
    }
    (moved, kept)
}
