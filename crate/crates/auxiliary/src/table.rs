use klsp4_group::{rational_valuation, CellParams, WeylWord, Q};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::{ubar_root_flows, RootFlow};

#[derive(Debug, Error)]
pub enum WelldefinedError {
    #[error("{w}: flows change shape across (r, s)")]
    Inconsistent { w: WeylWord },
    #[error("{w}: no linear exponent fits the samples")]
    NoFit { w: WeylWord },
}

/// One conjunct of a table entry. Indices are 1-based as in `m_1, n_2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConditionTerm {
    /// `m_i = 0` (`side = "m"`) or `n_i = 0`.
    Zero { side: char, index: u8 },
    /// `m_i = n_j`
    Equal { m: u8, n: u8 },
    /// `n_j = sign m_i p^{er r + es s + e0}`
    Scaled {
        n: u8,
        m: u8,
        sign: i8,
        er: i32,
        es: i32,
        e0: i32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub w: WeylWord,
    pub condition: String,
    pub terms: Vec<ConditionTerm>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Zero(char, u8),
    Link { n: u8, m: u8 },
}

fn single(coeffs: &[Q; 2]) -> Option<(u8, Q)> {
    let nz: Vec<usize> = (0..2).filter(|i| !coeffs[*i].is_zero()).collect();
    (nz.len() == 1).then(|| (nz[0] as u8 + 1, coeffs[nz[0]]))
}

fn shape(f: &RootFlow) -> Option<(Shape, Q)> {
    match (single(&f.m_coeffs), single(&f.n_coeffs)) {
        (None, Some((j, _))) if f.m_coeffs.iter().all(Q::is_zero) => {
            Some((Shape::Zero('n', j), Q::one()))
        }
        (Some((i, _)), None) if f.n_coeffs.iter().all(Q::is_zero) => {
            Some((Shape::Zero('m', i), Q::one()))
        }
        (Some((i, a)), Some((j, b))) => Some((Shape::Link { n: j, m: i }, a / b)),
        _ => None,
    }
}

fn fit(samples: &[(u32, u32, i32)]) -> Option<(i32, i32, i32)> {
    let mut best: Option<(i32, i32, i32)> = None;
    for er in -4..=4 {
        for es in -4..=4 {
            for e0 in -4..=4 {
                let ok = samples
                    .iter()
                    .all(|&(r, s, e)| er * r as i32 + es * s as i32 + e0 == e);
                let norm = |t: (i32, i32, i32)| t.0.abs() + t.1.abs() + t.2.abs();
                if ok && best.is_none_or(|b| norm((er, es, e0)) < norm(b)) {
                    best = Some((er, es, e0));
                }
            }
        }
    }
    best
}

fn sample_cells(w: WeylWord, p: u64) -> Vec<CellParams> {
    CellParams::admissible(w, p, 6)
        .into_iter()
        .filter(|c| c.r() + c.s() > 0 || w == WeylWord::Id)
        .collect()
}

fn derive_row(w: WeylWord, p: u64) -> Result<TableRow, WelldefinedError> {
    let cells = sample_cells(w, p);
    let per_cell: Vec<Vec<(Shape, Q)>> = cells
        .iter()
        .map(|c| {
            ubar_root_flows(c)
                .iter()
                .filter(|f| !f.is_vacuous())
                .map(|f| shape(f).ok_or(WelldefinedError::Inconsistent { w }))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let shapes: Vec<Shape> = per_cell[0].iter().map(|x| x.0).collect();
    if per_cell
        .iter()
        .any(|v| v.iter().map(|x| x.0).collect::<Vec<_>>() != shapes)
    {
        return Err(WelldefinedError::Inconsistent { w });
    }
    let mut terms = Vec::new();
    for (k, sh) in shapes.iter().enumerate() {
        match *sh {
            Shape::Zero(side, index) => terms.push(ConditionTerm::Zero { side, index }),
            Shape::Link { n, m } => {
                let ratios: Vec<Q> = per_cell.iter().map(|v| v[k].1).collect();
                let sign = if ratios[0].is_negative() { -1 } else { 1 };
                if ratios.iter().any(|x| x.is_negative() != (sign < 0)) {
                    return Err(WelldefinedError::Inconsistent { w });
                }
                let mut samples = Vec::new();
                for (c, x) in cells.iter().zip(&ratios) {
                    let e = rational_valuation(x, p).expect("nonzero");
                    if x.abs() != klsp4_group::q_pow(p, e) {
                        return Err(WelldefinedError::Inconsistent { w });
                    }
                    samples.push((c.r(), c.s(), e));
                }
                let (er, es, e0) = fit(&samples).ok_or(WelldefinedError::NoFit { w })?;
                if (er, es, e0) == (0, 0, 0) && sign > 0 {
                    terms.push(ConditionTerm::Equal { m, n });
                } else {
                    terms.push(ConditionTerm::Scaled {
                        n,
                        m,
                        sign,
                        er,
                        es,
                        e0,
                    });
                }
            }
        }
    }
    Ok(TableRow {
        w,
        condition: render(&terms),
        terms,
    })
}

fn render_exponent(er: i32, es: i32, e0: i32) -> String {
    let parts = [(er, "r"), (es, "s"), (e0, "")];
    let mut out = String::new();
    let ordered = parts
        .iter()
        .filter(|t| t.0 > 0)
        .chain(parts.iter().filter(|t| t.0 < 0));
    for (k, name) in ordered {
        let mag = k.abs();
        if *k < 0 {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if mag != 1 || name.is_empty() {
            out.push_str(&mag.to_string());
        }
        out.push_str(name);
    }
    out
}

fn render(terms: &[ConditionTerm]) -> String {
    if terms.is_empty() {
        return "-".into();
    }
    let mut zeros: Vec<(char, u8)> = Vec::new();
    let mut pieces = Vec::new();
    let mut equal: Vec<(u8, u8)> = Vec::new();
    for t in terms {
        match t {
            ConditionTerm::Zero { side, index } => zeros.push((*side, *index)),
            ConditionTerm::Equal { m, n } => equal.push((*m, *n)),
            ConditionTerm::Scaled {
                n,
                m,
                sign,
                er,
                es,
                e0,
            } => {
                let s = if *sign < 0 { "-" } else { "" };
                pieces.push(format!(
                    "n_{n} = {s}m_{m} p^{{{}}}",
                    render_exponent(*er, *es, *e0)
                ));
            }
        }
    }
    if !zeros.is_empty() {
        zeros.sort();
        let vars: Vec<String> = zeros.iter().map(|(s, i)| format!("{s}_{i}")).collect();
        pieces.insert(0, format!("{}=0", vars.join("=")));
    }
    equal.sort();
    for (m, n) in equal.into_iter().rev() {
        pieces.insert(0, format!("m_{m}=n_{n}"));
    }
    pieces.join(", ")
}

/// The table for all eight Weyl elements, derived from the flows at `p`.
pub fn table_rows(p: u64) -> Result<Vec<TableRow>, WelldefinedError> {
    WeylWord::ALL.iter().map(|w| derive_row(*w, p)).collect()
}

pub fn table_to_markdown(rows: &[TableRow]) -> String {
    let mut s = String::from("| w | condition |\n|---|---|\n");
    for r in rows {
        s.push_str(&format!("| {} | {} |\n", r.w, r.condition));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponents() {
        assert_eq!(render_exponent(2, -2, 0), "2r-2s");
        assert_eq!(render_exponent(-2, 1, 0), "s-2r");
        assert_eq!(render_exponent(0, 0, 3), "3");
        assert_eq!(fit(&[(1, 0, 2), (2, 0, 4)]), Some((2, 0, 0)));
    }
}
