use crate::*;
use klsp4_explicit::kl;
use klsp4_group::{CellParams, CharacterPair, WeylWord};
use proptest::prelude::*;

fn cell(w: WeylWord, p: u64, r: u32, s: u32) -> CellParams {
    CellParams::new(w, p, r, s).unwrap()
}

#[test]
fn trivial_bound_values() {
    for w in WeylWord::ALL {
        for c in CellParams::admissible(w, 3, 3) {
            let b = bound_value(BoundId::Trivial, &c, &CharacterPair::new(1, 2, 3, 4)).unwrap();
            assert_eq!(b.value, 3f64.powi((c.r() + c.s()) as i32));
        }
    }
}

#[test]
fn weil_bound_on_rank_one_cells() {
    let c = cell(WeylWord::SAlpha, 5, 2, 0);
    let b = bound_value(BoundId::Weil, &c, &CharacterPair::new(5, 0, 10, 0)).unwrap();
    assert!((b.value - 2.0 * 5.0 * 5f64.sqrt()).abs() < 1e-12);
    let c = cell(WeylWord::SBeta, 5, 0, 1);
    let b = bound_value(BoundId::Weil, &c, &CharacterPair::new(0, 1, 0, 1)).unwrap();
    assert!((b.value - 2.0 * 5f64.sqrt()).abs() < 1e-12);
}

#[test]
fn ratio_guards() {
    assert_eq!(ratio(0.0, 0.0), 0.0);
    assert_eq!(ratio(1.0, 0.0), f64::INFINITY);
    assert_eq!(ratio(3.0, 6.0), 0.5);
}

#[test]
fn stationary_phase_example() {
    let rec = stationary_phase_report(5, 1, 1, 1, 1, 2).unwrap();
    assert!(rec.d_points.is_empty());
    assert!(rec.generic);
    assert!(matches!(
        stationary_phase_report(2, 1, 1, 1, 1, 1),
        Err(HarnessError::InvalidInput(_))
    ));
}

#[test]
fn stationary_phase_holds_from_s_two() {
    for p in [3u64, 5] {
        for m1 in 1..p as i64 {
            for m2 in 1..p as i64 {
                for n2 in 1..p as i64 {
                    let rec = stationary_phase_report(p, m1, m2, n2, 1, 2).unwrap();
                    assert!(rec.d_points.len() <= 4);
                    assert!(rec.ranks.iter().all(|&r| r == 2));
                    assert!(rec.estimate_holds, "{rec:?}");
                }
            }
        }
    }
}

#[test]
fn stationary_phase_fails_at_s_one() {
    // 2x^3 = y and x^2 = 2y^2 mod 3 have no unit solution, yet S = -2
    let rec = stationary_phase_report(3, 1, 1, 2, 1, 1).unwrap();
    assert!(rec.d_points.is_empty());
    assert_eq!(rec.sum_magnitude, 2.0);
    assert!(!rec.estimate_holds);
}

#[test]
fn phase_sum_is_a_scaled_ab_sum() {
    for (p, s) in [(3u64, 1u32), (3, 2), (5, 1)] {
        let c = cell(WeylWord::SAlphaSBeta, p, 2 * s, s);
        for (m1, m2, n2) in [(1, 1, 1), (2, 1, 1), (1, 2, 4)] {
            let sum = phase_sum(p, m1, m2, n2, s).unwrap();
            let k = kl(&c, &CharacterPair::new(m1, m2, 0, n2)).unwrap();
            assert!(
                sum.scaled(p.pow(s) as i64).eq_exact(&k.tally),
                "p={p} s={s}"
            );
        }
    }
}

#[test]
fn katz_report() {
    let chars = CharacterPair::grid(&[1, 2, 3]);
    let rep = katz_ratio_report(&[3, 5, 7, 11, 13], &chars).unwrap();
    assert!(rep
        .excluded
        .iter()
        .all(|(p, ch)| *p == 3 && (ch.m1 * ch.m2 * ch.n2) % 3 == 0));
    assert!(rep
        .entries
        .iter()
        .all(|e| e.character_form_agrees == Some(true)));
    assert!(rep.entries.iter().all(|e| e.ratio.is_finite()));
    let max = rep.max_ratio.unwrap();
    assert!(max.is_finite() && max > 0.0);
    assert_eq!(rep.max_ratio_by_prime.len(), 5);
    let one = katz_ratio_report(&[5], &[CharacterPair::new(1, 1, 0, 1)]).unwrap();
    assert_eq!(one.entries.len(), 1);
    let e = &one.entries[0];
    assert!((e.ratio - e.magnitude / 25.0).abs() < 1e-15);
}

#[test]
fn empty_sweep() {
    let rep = sweep(&SweepConfig::default(), DEFAULT_TERM_BUDGET);
    assert!(rep.rows.is_empty() && rep.skipped.is_empty());
}

#[test]
fn ab_sweep_ratios_are_finite() {
    let cfg = SweepConfig::from_toml(
        r#"
        primes = [3]
        char_values = [0, 1]
        [[cells]]
        w = "ab"
        r = [0, 2]
        s = [0, 2]
        "#,
    )
    .unwrap();
    let rep = sweep(&cfg, DEFAULT_TERM_BUDGET);
    // (0,0), (1,0), (1,1), (2,0), (2,1), (2,2)
    assert_eq!(rep.rows.len(), 6 * 16);
    assert_eq!(rep.skipped.len(), 3);
    assert!(rep.rows.iter().all(|r| r.ratio.is_some_and(f64::is_finite)));
    assert_eq!(rep.trivial_violations().count(), 0);
    assert!(rep.max_ratios()[&BoundId::Ab].ratio > 0.0);
    let keys: Vec<_> = rep.rows.iter().map(|r| (r.cell, r.chars)).collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn budget_failures_stay_in_their_rows() {
    let cfg = SweepConfig::from_toml(
        r#"
        primes = [3]
        characters = [[1, 1, 1, 1]]
        [[cells]]
        w = "w0"
        r = [1, 2]
        s = [1, 1]
        bounds = ["w0", "trivial"]
        "#,
    )
    .unwrap();
    let rep = sweep(&cfg, 1000);
    assert_eq!(rep.rows.len(), 4);
    let failed: Vec<_> = rep.failures().collect();
    assert_eq!(failed.len(), 2);
    assert!(failed
        .iter()
        .all(|r| r.cell.r == 2 && r.magnitude.is_none()));
    assert!(matches!(
        compute(
            &cell(WeylWord::W0, 3, 2, 1),
            &CharacterPair::default(),
            BoundId::W0,
            1000,
            false
        ),
        Err(HarnessError::BudgetExceeded { .. })
    ));
}

#[test]
fn jsonl_and_csv_shapes() {
    let row = compute(
        &cell(WeylWord::SAlphaSBeta, 3, 1, 1),
        &CharacterPair::new(1, 1, 0, 1),
        BoundId::Ab,
        DEFAULT_TERM_BUDGET,
        false,
    )
    .unwrap();
    assert_eq!(row.magnitude, Some(3.0));
    let rep = SweepReport {
        rows: vec![row],
        skipped: Vec::new(),
    };
    let mut j = Vec::new();
    rep.write_jsonl(&mut j).unwrap();
    let line = String::from_utf8(j).unwrap();
    let keys: Vec<&str> = [
        "\"cell\"",
        "\"chars\"",
        "\"magnitude\"",
        "\"tally_digest\"",
        "\"term_count\"",
        "\"bound\"",
        "\"ratio\"",
        "\"ms\"",
    ]
    .into_iter()
    .collect();
    let mut last = 0;
    for k in keys {
        let at = line.find(k).unwrap();
        assert!(at >= last, "{k} out of order");
        last = at;
    }
    assert!(line.contains("\"ms\":null"));
    let mut c = Vec::new();
    rep.write_csv(&mut c).unwrap();
    let text = String::from_utf8(c).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
    assert!(lines.next().unwrap().starts_with("ab,3,1,1,1,1,0,1,3,"));
}

#[test]
fn fault_injection_is_caught() {
    let grid = IdentityGrid {
        primes: vec![2],
        max_modulus: 8,
        ..IdentityGrid::empty()
    };
    let grid = IdentityGrid {
        char_values: vec![0, 1],
        with_prime: true,
        ..grid
    };
    assert!(oracle_equivalence(&grid, None).passed);
    let bad = oracle_equivalence(&grid, Some(Fault::PerturbHat { w: WeylWord::W0 }));
    assert!(!bad.passed);
    let ce = bad.counterexample.unwrap();
    assert_eq!(ce["cell"]["w"], "w0");
}

#[test]
fn empty_grid_passes_with_a_warning() {
    let s = run_all_identity_checks(&IdentityGrid::empty(), None);
    assert!(s.passed());
    assert!(s.outcomes.iter().all(|o| o.cases == 0));
    assert_eq!(s.warnings.len(), 1);
}

#[test]
fn small_grid_summary() {
    let grid = IdentityGrid {
        primes: vec![2],
        max_modulus: 4,
        char_values: vec![0, 1],
        with_prime: true,
        reduction_primes: vec![3],
        reduction_max_exponent: 1,
        factor_primes: vec![3],
        factor_max_level: 1,
        ..IdentityGrid::empty()
    };
    let s = run_all_identity_checks(&grid, None);
    for name in [
        CheckName::OracleEquivalence,
        CheckName::Reductions,
        CheckName::SwapSymmetry,
        CheckName::OrbitIdentity,
        CheckName::Factorization,
        CheckName::AuxiliaryAgreement,
    ] {
        let o = s.get(name).unwrap();
        assert!(o.passed && o.cases > 0, "{name:?}");
    }
    assert!(s.warnings.is_empty());
}

proptest! {
    #[test]
    fn bounds_are_positive_and_saturate(p in prop::sample::select(vec![2u64, 3, 5, 7]), r in 0u32..4, s in 0u32..4,
                                        m1 in -50i64..50, m2 in -50i64..50, n1 in -50i64..50, n2 in -50i64..50) {
        let ch = CharacterPair::new(m1, m2, n1, n2);
        for w in WeylWord::ALL {
            let Ok(c) = CellParams::new(w, p, r, s) else { continue };
            let id = BoundId::for_word(w);
            let b = bound_value(id, &c, &ch).unwrap();
            prop_assert!(b.value.is_finite() && b.value > 0.0);
            // multiplying a character entry by p^(r+s) drives it to saturation
            let big = p.pow(c.r() + c.s()) as i64;
            let sat = CharacterPair::new(m1 * big, m2 * big, n1 * big, n2 * big);
            let zero = bound_value(id, &c, &CharacterPair::default()).unwrap();
            let b_sat = bound_value(id, &c, &sat).unwrap();
            prop_assert!((zero.value - b_sat.value).abs() <= 1e-9 * zero.value, "{} {}", zero.value, b_sat.value);
        }
    }

    #[test]
    fn ab_bound_with_zero_characters_is_trivial(p in prop::sample::select(vec![2u64, 3, 5]), r in 0u32..5, s in 0u32..5) {
        prop_assume!(s <= r);
        let c = cell(WeylWord::SAlphaSBeta, p, r, s);
        let b = bound_value(BoundId::Ab, &c, &CharacterPair::default()).unwrap().value;
        let t = (p as f64).powi((r + s) as i32);
        prop_assert!((b - t).abs() <= 1e-9 * t);
    }
}
