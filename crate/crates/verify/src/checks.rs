use klsp4_auxiliary::aux_kl;
use klsp4_explicit::{gl2_kloosterman, ramanujan, terms};
use klsp4_group::{CellParams, CharacterPair, TermList, WeylWord};
use klsp4_oracle::{enumerate_x, oracle_terms, DenominatorCap};
use klsp4_padic::{is_prime, valuation, CyclotomicTally, PrimePower};
use klsp4_strata::{Factorization, Stratification};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    OracleEquivalence,
    TrivialBound,
    Reductions,
    SwapSymmetry,
    Scaling,
    OrbitIdentity,
    Factorization,
    Weil,
    AuxiliaryAgreement,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: CheckName,
    pub passed: bool,
    pub cases: u64,
    pub failures: u64,
    pub counterexample: Option<Value>,
}

impl CheckOutcome {
    fn new(name: CheckName) -> Self {
        CheckOutcome {
            name,
            passed: true,
            cases: 0,
            failures: 0,
            counterexample: None,
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> Value) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            self.passed = false;
            if self.counterexample.is_none() {
                self.counterexample = Some(detail());
            }
        }
    }

    fn merge(mut self, other: CheckOutcome) -> Self {
        self.cases += other.cases;
        self.failures += other.failures;
        self.passed &= other.passed;
        if self.counterexample.is_none() {
            self.counterexample = other.counterexample;
        }
        self
    }
}

/// A deliberate corruption of the explicit evaluator, to show the suite notices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fault {
    /// Shift the `x_alpha` phase of the first term of every explicit `w` cell
    /// by `1/p^level`, as if one hat congruence were solved wrongly.
    PerturbHat { w: WeylWord },
}

fn explicit_terms(c: &CellParams, fault: Option<Fault>) -> Result<TermList> {
    let t = terms(c)?;
    match fault {
        Some(Fault::PerturbHat { w }) if w == c.w() && t.level() > 0 && !t.is_empty() => {
            let mut out = TermList::new(t.prime(), t.level());
            for (i, &term) in t.terms().iter().enumerate() {
                let mut term = term;
                if i == 0 {
                    term[0] = (term[0] + 1) % t.prime().pow(t.level());
                }
                out.push_raw(term);
            }
            Ok(out)
        }
        _ => Ok(t),
    }
}

/// Parameters of [`run_all_identity_checks`]. Each family reads only its own fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IdentityGrid {
    /// Oracle, trivial bound, swap, orbit identity and auxiliary agreement run
    /// over every admissible cell with `p^{r+s} <= max_modulus`.
    pub primes: Vec<u64>,
    pub max_modulus: u64,
    /// Character entries; `p` itself is appended per prime when `with_prime` is set.
    pub char_values: Vec<i64>,
    pub with_prime: bool,
    pub reduction_primes: Vec<u64>,
    pub reduction_max_exponent: u32,
    pub scaling_primes: Vec<u64>,
    pub scaling_max_r: u32,
    pub factor_primes: Vec<u64>,
    pub factor_max_level: u32,
    pub weil_max_modulus: u64,
    pub weil_range: i64,
}

impl Default for IdentityGrid {
    fn default() -> Self {
        IdentityGrid {
            primes: vec![2, 3],
            max_modulus: 81,
            char_values: vec![0, 1, 2],
            with_prime: true,
            reduction_primes: vec![2, 3, 5],
            reduction_max_exponent: 3,
            scaling_primes: vec![2, 3],
            scaling_max_r: 3,
            factor_primes: vec![2, 3, 5],
            factor_max_level: 2,
            weil_max_modulus: 81,
            weil_range: 4,
        }
    }
}

impl IdentityGrid {
    pub fn empty() -> Self {
        IdentityGrid {
            primes: Vec::new(),
            max_modulus: 0,
            char_values: Vec::new(),
            with_prime: false,
            reduction_primes: Vec::new(),
            reduction_max_exponent: 0,
            scaling_primes: Vec::new(),
            scaling_max_r: 0,
            factor_primes: Vec::new(),
            factor_max_level: 0,
            weil_max_modulus: 0,
            weil_range: 0,
        }
    }

    /// Admissible cells of every type with `p^{r+s} <= max_modulus`.
    pub fn cells(&self) -> Vec<CellParams> {
        let mut out = Vec::new();
        for &p in &self.primes {
            let mut max_sum = 0;
            while p.pow(max_sum + 1) <= self.max_modulus {
                max_sum += 1;
            }
            if self.max_modulus == 0 {
                continue;
            }
            for w in WeylWord::ALL {
                out.extend(CellParams::admissible(w, p, max_sum));
            }
        }
        out
    }

    pub fn characters(&self, p: u64) -> Vec<CharacterPair> {
        let mut values = self.char_values.clone();
        if self.with_prime && !values.contains(&(p as i64)) {
            values.push(p as i64);
        }
        if values.is_empty() {
            return Vec::new();
        }
        CharacterPair::grid(&values)
    }

    fn is_empty(&self) -> bool {
        self.cells().is_empty()
            && self.reduction_primes.is_empty()
            && self.scaling_primes.is_empty()
            && self.factor_primes.is_empty()
            && self.weil_max_modulus < 2
    }
}

fn cell_json(c: &CellParams) -> Value {
    json!({"w": c.w(), "p": c.p(), "r": c.r(), "s": c.s()})
}

fn failed(name: CheckName, what: String) -> CheckOutcome {
    let mut o = CheckOutcome::new(name);
    o.record(false, || json!({ "error": what }));
    o
}

fn per_cell(
    name: CheckName,
    cells: &[CellParams],
    f: impl Fn(&CellParams) -> Result<CheckOutcome> + Sync,
) -> CheckOutcome {
    let parts: Vec<CheckOutcome> = cells
        .par_iter()
        .map(|c| f(c).unwrap_or_else(|e| failed(name, format!("{c}: {e}"))))
        .collect();
    parts
        .into_iter()
        .fold(CheckOutcome::new(name), CheckOutcome::merge)
}

/// Explicit sums against the brute-force oracle, including `skipped_unsolvable = 0`.
pub fn oracle_equivalence(grid: &IdentityGrid, fault: Option<Fault>) -> CheckOutcome {
    per_cell(CheckName::OracleEquivalence, &grid.cells(), |c| {
        let mut o = CheckOutcome::new(CheckName::OracleEquivalence);
        let ex = explicit_terms(c, fault)?;
        let or = oracle_terms(c)?;
        o.record(
            ex.skipped_unsolvable() == 0,
            || json!({"cell": cell_json(c), "skipped_unsolvable": ex.skipped_unsolvable()}),
        );
        for ch in grid.characters(c.p()) {
            let (a, b) = (ex.evaluate(&ch), or.evaluate(&ch));
            o.record(a.eq_exact(&b), || {
                json!({"cell": cell_json(c), "chars": ch, "explicit": a.tally.to_string(), "oracle": b.tally.to_string()})
            });
        }
        Ok(o)
    })
}

/// `|X(n)| <= p^{r+s}` on every enumerated cell.
pub fn trivial_bound(grid: &IdentityGrid) -> CheckOutcome {
    per_cell(CheckName::TrivialBound, &grid.cells(), |c| {
        let mut o = CheckOutcome::new(CheckName::TrivialBound);
        let n = enumerate_x(c, DenominatorCap::default_for(c))?.len() as u64;
        let bound = c.p().pow(c.r() + c.s());
        o.record(
            n <= bound,
            || json!({"cell": cell_json(c), "size": n, "bound": bound}),
        );
        Ok(o)
    })
}

/// The six degenerate cells that collapse to Ramanujan or `GL(2)` Kloosterman sums.
pub fn reductions(grid: &IdentityGrid) -> CheckOutcome {
    let mut o = CheckOutcome::new(CheckName::Reductions);
    for &p in &grid.reduction_primes {
        for k in 0..=grid.reduction_max_exponent {
            let run = |o: &mut CheckOutcome| -> Result<()> {
                let t = |w, r, s| -> Result<TermList> { Ok(terms(&CellParams::new(w, p, r, s)?)?) };
                let w0r = t(WeylWord::W0, k, 0)?;
                let w0s = t(WeylWord::W0, 0, k)?;
                let ab = t(WeylWord::SAlphaSBeta, k, 0)?;
                let aba = t(WeylWord::SAlphaSBetaSAlpha, k, 0)?;
                let ba = t(WeylWord::SBetaSAlpha, 0, k)?;
                let bab = t(WeylWord::SBetaSAlphaSBeta, 0, k)?;
                let q = PrimePower::new(p, k)?;
                for ch in CharacterPair::grid(&[0, 1, 2, p as i64, -1]) {
                    let ram1 = CyclotomicTally::from_integer(p, ramanujan(q.value(), ch.m1));
                    let ram2 = CyclotomicTally::from_integer(p, ramanujan(q.value(), ch.m2));
                    let s1 = gl2_kloosterman(ch.m1, ch.n1, q);
                    let s2 = gl2_kloosterman(ch.m2, ch.n2, q);
                    for (name, lhs, rhs) in [
                        ("w0 (r,0)", &w0r, &s1),
                        ("w0 (0,s)", &w0s, &s2),
                        ("aba (r,0)", &aba, &ram1),
                        ("bab (0,s)", &bab, &ram2),
                        ("ab (r,0)", &ab, &ram1),
                        ("ba (0,s)", &ba, &ram2),
                    ] {
                        let v = lhs.evaluate(&ch);
                        o.record(v.tally.eq_exact(rhs), || {
                            json!({"identity": name, "p": p, "k": k, "chars": ch,
                                   "lhs": v.tally.to_string(), "rhs": rhs.to_string()})
                        });
                    }
                }
                Ok(())
            };
            if let Err(e) = run(&mut o) {
                o = o.merge(failed(CheckName::Reductions, format!("p={p} k={k}: {e}")));
            }
        }
    }
    o
}

/// `Kl(w0; psi, psi') = Kl(w0; psi', psi)`.
pub fn swap_symmetry(grid: &IdentityGrid) -> CheckOutcome {
    let cells: Vec<CellParams> = grid
        .cells()
        .into_iter()
        .filter(|c| c.w() == WeylWord::W0)
        .collect();
    per_cell(CheckName::SwapSymmetry, &cells, |c| {
        let mut o = CheckOutcome::new(CheckName::SwapSymmetry);
        let t = terms(c)?;
        for ch in grid.characters(c.p()) {
            let (a, b) = (t.evaluate(&ch), t.evaluate(&ch.swapped()));
            o.record(a.eq_exact(&b), || {
                json!({"cell": cell_json(c), "chars": ch, "lhs": a.tally.to_string(), "rhs": b.tally.to_string()})
            });
        }
        Ok(o)
    })
}

/// `Kl(ab, r, s; m1, m2, n1, n2) = p^{k+2l} Kl(ab, r-k-l, s-l; m1/p^k, m2/p^l, n1, n2/p^l)`
/// for every `0 <= k <= r - s`, `0 <= l <= s`.
pub fn scaling(grid: &IdentityGrid) -> CheckOutcome {
    let mut o = CheckOutcome::new(CheckName::Scaling);
    for &p in &grid.scaling_primes {
        for r in 0..=grid.scaling_max_r {
            for s in 0..=r {
                let run = |o: &mut CheckOutcome| -> Result<()> {
                    let big = terms(&CellParams::new(WeylWord::SAlphaSBeta, p, r, s)?)?;
                    for k in 0..=r - s {
                        for l in 0..=s {
                            let small = terms(&CellParams::new(
                                WeylWord::SAlphaSBeta,
                                p,
                                r - k - l,
                                s - l,
                            )?)?;
                            let f = p.pow(k + 2 * l) as i64;
                            let (pk, pl) = (p.pow(k) as i64, p.pow(l) as i64);
                            for base in CharacterPair::grid(&[0, 1, 2]) {
                                let lhs = big.evaluate(&CharacterPair::new(
                                    base.m1 * pk,
                                    base.m2 * pl,
                                    base.n1,
                                    base.n2 * pl,
                                ));
                                let rhs = small.evaluate(&base).tally.scaled(f);
                                o.record(lhs.tally.eq_exact(&rhs), || {
                                    json!({"p": p, "r": r, "s": s, "k": k, "l": l, "reduced_chars": base,
                                           "lhs": lhs.tally.to_string(), "rhs": rhs.to_string()})
                                });
                            }
                        }
                    }
                    Ok(())
                };
                if let Err(e) = run(&mut o) {
                    o = o.merge(failed(
                        CheckName::Scaling,
                        format!("p={p} r={r} s={s}: {e}"),
                    ));
                }
            }
        }
    }
    o
}

/// The orbit decomposition at levels `max(r, s)` and `max(r, s) + 1`.
pub fn orbit_identity(grid: &IdentityGrid) -> CheckOutcome {
    per_cell(CheckName::OrbitIdentity, &grid.cells(), |c| {
        let mut o = CheckOutcome::new(CheckName::OrbitIdentity);
        let l = c.r().max(c.s());
        for level in [l, l + 1] {
            let st = Stratification::new(c, level)?;
            for ch in grid.characters(c.p()) {
                let res = st.check(&ch);
                o.record(matches!(res, Ok(true)), || {
                    json!({"cell": cell_json(c), "level": level, "chars": ch,
                           "result": match &res { Ok(b) => b.to_string(), Err(e) => e.to_string() }})
                });
            }
        }
        Ok(o)
    })
}

/// `S_w(theta; l)` as products of `GL(2)` sums, for all character data mod `p^l`.
pub fn factorization(grid: &IdentityGrid) -> CheckOutcome {
    let mut jobs = Vec::new();
    for &p in &grid.factor_primes {
        for level in 1..=grid.factor_max_level {
            for w in [
                WeylWord::W0,
                WeylWord::SAlphaSBetaSAlpha,
                WeylWord::SBetaSAlphaSBeta,
            ] {
                jobs.push((w, p, level));
            }
        }
    }
    let parts: Vec<CheckOutcome> = jobs
        .par_iter()
        .map(|&(w, p, level)| {
            let mut o = CheckOutcome::new(CheckName::Factorization);
            let f = match Factorization::new(w, p, level) {
                Ok(f) => f,
                Err(e) => return failed(CheckName::Factorization, format!("{w} p={p} level={level}: {e}")),
            };
            let q = p.pow(level) as i64;
            for a in 0..q {
                for b in 0..q {
                    for c in 0..q {
                        for d in 0..q {
                            let res = f.check([a, b, c, d]);
                            o.record(matches!(res, Ok(true)), || {
                                json!({"w": w, "p": p, "level": level, "chars": [a, b, c, d],
                                       "result": match &res { Ok(b) => b.to_string(), Err(e) => e.to_string() }})
                            });
                        }
                    }
                }
            }
            o
        })
        .collect();
    parts.into_iter().fold(
        CheckOutcome::new(CheckName::Factorization),
        CheckOutcome::merge,
    )
}

/// `|S(m, n; p^k)| <= 2 p^{k/2} (m, n, p^k)^{1/2}` with absolute tolerance `1e-6`.
pub fn weil(grid: &IdentityGrid) -> CheckOutcome {
    let mut o = CheckOutcome::new(CheckName::Weil);
    for p in (2..=grid.weil_max_modulus).filter(|&p| is_prime(p)) {
        let mut k = 1;
        while p.pow(k) <= grid.weil_max_modulus {
            let q = PrimePower::new(p, k).expect("small modulus");
            for m in -grid.weil_range..=grid.weil_range {
                for n in -grid.weil_range..=grid.weil_range {
                    let mag = gl2_kloosterman(m, n, q).magnitude();
                    let g = |x: i64| valuation(x as i128, p).saturate(k);
                    let gcd = g(m).min(g(n));
                    let bound =
                        2.0 * (p as f64).powf(k as f64 / 2.0) * (p as f64).powf(gcd as f64 / 2.0);
                    o.record(mag <= bound + 1e-6, || {
                        json!({"p": p, "k": k, "m": m, "n": n, "magnitude": mag, "bound": bound})
                    });
                }
            }
            k += 1;
        }
    }
    o
}

/// The auxiliary sum equals the ordinary one wherever the criterion holds.
pub fn auxiliary_agreement(grid: &IdentityGrid) -> CheckOutcome {
    per_cell(CheckName::AuxiliaryAgreement, &grid.cells(), |c| {
        let mut o = CheckOutcome::new(CheckName::AuxiliaryAgreement);
        let t = terms(c)?;
        for ch in grid.characters(c.p()) {
            let aux = aux_kl(c, &ch)?;
            if aux.term_count == 0 && !klsp4_auxiliary::is_well_defined(c, &ch) {
                continue;
            }
            let v = t.evaluate(&ch);
            o.record(aux.eq_exact(&v), || {
                json!({"cell": cell_json(c), "chars": ch, "aux": aux.tally.to_string(), "kl": v.tally.to_string()})
            });
        }
        Ok(o)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentitySummary {
    pub outcomes: Vec<CheckOutcome>,
    pub warnings: Vec<String>,
}

impl IdentitySummary {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn get(&self, name: CheckName) -> Option<&CheckOutcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }
}

pub fn run_all_identity_checks(grid: &IdentityGrid, fault: Option<Fault>) -> IdentitySummary {
    let mut warnings = Vec::new();
    if grid.is_empty() {
        warnings.push("empty grid: every check passes vacuously".to_string());
    }
    let outcomes = vec![
        oracle_equivalence(grid, fault),
        trivial_bound(grid),
        reductions(grid),
        swap_symmetry(grid),
        scaling(grid),
        orbit_identity(grid),
        factorization(grid),
        weil(grid),
        auxiliary_agreement(grid),
    ];
    IdentitySummary { outcomes, warnings }
}
