use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use klsp4_explicit::terms;
use klsp4_group::{CellParams, CharacterPair, TermList, WeylWord};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{bound_value, ratio, BoundId, BoundValue, HarnessError, Result};

/// Default ceiling on the estimated loop count of one explicit evaluation.
pub const DEFAULT_TERM_BUDGET: u128 = 50_000_000;

/// Reads `KLSP4_BUDGET`, falling back to [`DEFAULT_TERM_BUDGET`].
pub fn budget_from_env() -> Result<u128> {
    parse_budget(std::env::var("KLSP4_BUDGET").ok().as_deref())
}

pub fn parse_budget(value: Option<&str>) -> Result<u128> {
    match value {
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| HarnessError::InvalidInput(format!("KLSP4_BUDGET={v:?} is not a count"))),
        None => Ok(DEFAULT_TERM_BUDGET),
    }
}

/// Loop count of the explicit enumeration for `c`, before any filtering.
pub fn work_estimate(c: &CellParams) -> u128 {
    let p = c.p() as u128;
    let (r, s) = (c.r(), c.s());
    match c.w() {
        WeylWord::Id => 1,
        WeylWord::SAlpha => p.pow(r),
        WeylWord::SBeta => p.pow(s),
        WeylWord::SAlphaSBeta | WeylWord::SBetaSAlpha => p.pow(r + s),
        WeylWord::SAlphaSBetaSAlpha => (s.saturating_sub(r)..=s / 2)
            .map(|a| p.pow(a + 2 * r))
            .sum(),
        WeylWord::SBetaSAlphaSBeta => p.pow(3 * s),
        WeylWord::W0 => p.pow(3 * r + s),
    }
}

/// Explicit term list for `c`, refusing cells whose enumeration exceeds `budget`.
pub fn budgeted_terms(c: &CellParams, budget: u128) -> Result<TermList> {
    let required = work_estimate(c);
    if required > budget {
        return Err(HarnessError::BudgetExceeded {
            cell: c.to_string(),
            required,
            budget,
        });
    }
    Ok(terms(c)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellRange {
    pub w: WeylWord,
    #[serde(default)]
    pub r: [u32; 2],
    #[serde(default)]
    pub s: [u32; 2],
    /// Bounds to report; empty means the one attached to `w`.
    #[serde(default)]
    pub bounds: Vec<BoundId>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub primes: Vec<u64>,
    #[serde(default)]
    pub cells: Vec<CellRange>,
    /// Skip cells with `r + s` outside `[min_exponent, max_exponent]`.
    #[serde(default)]
    pub min_exponent: Option<u32>,
    #[serde(default)]
    pub max_exponent: Option<u32>,
    /// Every 4-tuple over these values is used as a character.
    #[serde(default)]
    pub char_values: Vec<i64>,
    /// Extra characters `[m1, m2, n1, n2]`.
    #[serde(default)]
    pub characters: Vec<[i64; 4]>,
    #[serde(default)]
    pub budget_terms: Option<u64>,
    /// Record per-row wall time; off by default so reports are reproducible.
    #[serde(default)]
    pub timings: bool,
    #[serde(default)]
    pub jsonl: Option<PathBuf>,
    #[serde(default)]
    pub csv: Option<PathBuf>,
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    /// The grid the bound-ratio regression is pinned on: every nontrivial
    /// cell type with `1 <= r + s <= 3` at `p` in {2, 3, 5}, characters over
    /// {0, 1, 2, 3, 5} so that each prime sees both unit and divisible entries.
    pub fn default_grid() -> Self {
        let cells = [
            WeylWord::SAlphaSBeta,
            WeylWord::SBetaSAlpha,
            WeylWord::SAlphaSBetaSAlpha,
            WeylWord::SBetaSAlphaSBeta,
            WeylWord::W0,
        ]
        .into_iter()
        .map(|w| CellRange {
            w,
            r: [0, 3],
            s: [0, 3],
            bounds: Vec::new(),
        })
        .collect();
        SweepConfig {
            primes: vec![2, 3, 5],
            cells,
            min_exponent: Some(1),
            max_exponent: Some(3),
            char_values: vec![0, 1, 2, 3, 5],
            ..Default::default()
        }
    }

    pub fn characters(&self) -> Vec<CharacterPair> {
        let mut out: BTreeSet<CharacterPair> = if self.char_values.is_empty() {
            BTreeSet::new()
        } else {
            CharacterPair::grid(&self.char_values).into_iter().collect()
        };
        out.extend(
            self.characters
                .iter()
                .map(|&[a, b, c, d]| CharacterPair::new(a, b, c, d)),
        );
        out.into_iter().collect()
    }

    /// Admissible cells with their bounds, and the requested ones that were dropped.
    pub fn expand(&self) -> (Vec<(CellParams, Vec<BoundId>)>, Vec<SkippedCell>) {
        let mut cells: BTreeMap<CellParams, BTreeSet<BoundId>> = BTreeMap::new();
        let mut skipped = Vec::new();
        for &p in &self.primes {
            for range in &self.cells {
                for r in range.r[0]..=range.r[1] {
                    for s in range.s[0]..=range.s[1] {
                        let key = CellKey {
                            w: range.w,
                            p,
                            r,
                            s,
                        };
                        if self.max_exponent.is_some_and(|m| r + s > m)
                            || self.min_exponent.is_some_and(|m| r + s < m)
                        {
                            continue;
                        }
                        let c = match CellParams::new(range.w, p, r, s) {
                            Ok(c) => c,
                            Err(e) => {
                                skipped.push(SkippedCell {
                                    cell: key,
                                    reason: e.to_string(),
                                });
                                continue;
                            }
                        };
                        if (c.r(), c.s()) != (r, s) {
                            // s_alpha ignores s and s_beta ignores r
                            continue;
                        }
                        let wanted: Vec<BoundId> = if range.bounds.is_empty() {
                            vec![BoundId::for_word(range.w)]
                        } else {
                            range.bounds.clone()
                        };
                        for id in wanted {
                            if id.applies_to(range.w) {
                                cells.entry(c).or_default().insert(id);
                            } else {
                                skipped.push(SkippedCell {
                                    cell: key,
                                    reason: format!("bound {id} does not apply to {}", range.w),
                                });
                            }
                        }
                    }
                }
            }
        }
        let cells = cells
            .into_iter()
            .map(|(c, b)| (c, b.into_iter().collect()))
            .collect();
        (cells, skipped)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellKey {
    pub w: WeylWord,
    pub p: u64,
    pub r: u32,
    pub s: u32,
}

impl From<&CellParams> for CellKey {
    fn from(c: &CellParams) -> Self {
        CellKey {
            w: c.w(),
            p: c.p(),
            r: c.r(),
            s: c.s(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedCell {
    pub cell: CellKey,
    pub reason: String,
}

/// One evaluated `(cell, character, bound)`. Evaluation failures leave the
/// numeric fields empty and set `error`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub cell: CellKey,
    pub chars: CharacterPair,
    pub magnitude: Option<f64>,
    pub tally_digest: Option<String>,
    pub term_count: Option<u64>,
    pub bound: BoundValue,
    pub ratio: Option<f64>,
    pub ms: Option<f64>,
    pub error: Option<String>,
}

impl ReportRow {
    fn sort_key(&self) -> (CellKey, CharacterPair, BoundId) {
        (self.cell, self.chars, self.bound.id)
    }

    /// `|Kl| <= p^{r+s}`, checked with a relative slack of `1e-9`.
    pub fn within_trivial_bound(&self) -> bool {
        let Some(m) = self.magnitude else { return true };
        let t = (self.cell.p as f64).powi((self.cell.r + self.cell.s) as i32);
        m <= t * (1.0 + 1e-9)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxRatio {
    pub ratio: f64,
    pub cell: CellKey,
    pub chars: CharacterPair,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<ReportRow>,
    pub skipped: Vec<SkippedCell>,
}

impl SweepReport {
    /// Largest ratio per bound; ties keep the first row in report order.
    pub fn max_ratios(&self) -> BTreeMap<BoundId, MaxRatio> {
        let mut out: BTreeMap<BoundId, MaxRatio> = BTreeMap::new();
        for row in &self.rows {
            let Some(ratio) = row.ratio else { continue };
            let cand = MaxRatio {
                ratio,
                cell: row.cell,
                chars: row.chars,
            };
            out.entry(row.bound.id)
                .and_modify(|m| {
                    if ratio > m.ratio {
                        *m = cand;
                    }
                })
                .or_insert(cand);
        }
        out
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| r.error.is_some())
    }

    pub fn trivial_violations(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| !r.within_trivial_bound())
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for row in &self.rows {
            serde_json::to_writer(&mut out, row)?;
            out.write_all(b"\n")?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for row in &self.rows {
            w.write_record(csv_record(row))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// The JSON fields flattened in order.
pub const CSV_HEADER: [&str; 17] = [
    "w",
    "p",
    "r",
    "s",
    "m1",
    "m2",
    "n1",
    "n2",
    "magnitude",
    "tally_digest",
    "term_count",
    "bound_id",
    "bound_value",
    "bound_alternate",
    "ratio",
    "ms",
    "error",
];

fn csv_record(row: &ReportRow) -> Vec<String> {
    fn opt<T: ToString>(x: &Option<T>) -> String {
        x.as_ref().map(T::to_string).unwrap_or_default()
    }
    vec![
        row.cell.w.short_name().to_string(),
        row.cell.p.to_string(),
        row.cell.r.to_string(),
        row.cell.s.to_string(),
        row.chars.m1.to_string(),
        row.chars.m2.to_string(),
        row.chars.n1.to_string(),
        row.chars.n2.to_string(),
        opt(&row.magnitude),
        opt(&row.tally_digest),
        opt(&row.term_count),
        row.bound.id.to_string(),
        row.bound.value.to_string(),
        opt(&row.bound.alternate),
        opt(&row.ratio),
        opt(&row.ms),
        opt(&row.error),
    ]
}

fn eval_rows(
    c: &CellParams,
    terms: &Result<TermList>,
    bounds: &[BoundId],
    chars: &[CharacterPair],
    timings: bool,
) -> Vec<ReportRow> {
    let key = CellKey::from(c);
    let mut rows = Vec::with_capacity(chars.len() * bounds.len());
    for ch in chars {
        let start = Instant::now();
        let value = terms.as_ref().map(|t| t.evaluate(ch));
        let ms = timings.then(|| start.elapsed().as_secs_f64() * 1e3);
        for &id in bounds {
            let bound = bound_value(id, c, ch).expect("bounds are filtered by cell type");
            let row = match &value {
                Ok(v) => {
                    let magnitude = v.magnitude();
                    ReportRow {
                        cell: key,
                        chars: *ch,
                        magnitude: Some(magnitude),
                        tally_digest: Some(v.tally.digest()),
                        term_count: Some(v.term_count),
                        bound,
                        ratio: Some(ratio(magnitude, bound.value)),
                        ms,
                        error: None,
                    }
                }
                Err(e) => ReportRow {
                    cell: key,
                    chars: *ch,
                    magnitude: None,
                    tally_digest: None,
                    term_count: None,
                    bound,
                    ratio: None,
                    ms,
                    error: Some(e.to_string()),
                },
            };
            rows.push(row);
        }
    }
    rows
}

/// Evaluates every cell of `cfg` in parallel; rows come back sorted by cell,
/// then character, then bound.
pub fn sweep(cfg: &SweepConfig, budget: u128) -> SweepReport {
    let (cells, skipped) = cfg.expand();
    let chars = cfg.characters();
    let mut rows: Vec<ReportRow> = cells
        .par_iter()
        .flat_map_iter(|(c, bounds)| {
            eval_rows(c, &budgeted_terms(c, budget), bounds, &chars, cfg.timings)
        })
        .collect();
    rows.sort_by_key(ReportRow::sort_key);
    SweepReport { rows, skipped }
}

/// Runs the sweep and writes the configured JSON lines and CSV files.
pub fn sweep_to_files(cfg: &SweepConfig, budget: u128) -> Result<SweepReport> {
    let report = sweep(cfg, budget);
    if let Some(path) = &cfg.jsonl {
        report.write_jsonl(std::io::BufWriter::new(std::fs::File::create(path)?))?;
    }
    if let Some(path) = &cfg.csv {
        report.write_csv(std::io::BufWriter::new(std::fs::File::create(path)?))?;
    }
    Ok(report)
}

/// A single-cell row, as printed by `compute`.
pub fn compute(
    c: &CellParams,
    ch: &CharacterPair,
    id: BoundId,
    budget: u128,
    timings: bool,
) -> Result<ReportRow> {
    bound_value(id, c, ch)?;
    let terms = Ok(budgeted_terms(c, budget)?);
    let mut rows = eval_rows(c, &terms, &[id], std::slice::from_ref(ch), timings);
    Ok(rows.remove(0))
}
