use klsp4_explicit::terms;
use klsp4_group::{CellParams, CharacterPair, WeylWord};
use klsp4_oracle::oracle_terms;

fn check(limit: u64) {
    for p in [2u64, 3] {
        let chars = CharacterPair::grid(&[0, 1, 2, p as i64]);
        for w in WeylWord::ALL {
            for c in CellParams::admissible(w, p, 8) {
                if p.pow(c.r() + c.s()) > limit {
                    continue;
                }
                let o = oracle_terms(&c).unwrap();
                let e = terms(&c).unwrap();
                assert_eq!(e.skipped_unsolvable(), 0, "{c}");
                assert_eq!(o.len(), e.len(), "{c}");
                for ch in &chars {
                    assert!(o.evaluate(ch).eq_exact(&e.evaluate(ch)), "{c} {ch}");
                }
            }
        }
    }
}

#[test]
fn explicit_sums_match_oracle_on_small_cells() {
    check(27);
}
