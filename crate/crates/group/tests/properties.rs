use klsp4_group::{q, root_element, twist_character, CellParams, Root, UnipotentCoords, WeylWord};
use klsp4_padic::{inv_mod, PrimePower};
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = klsp4_group::Q> {
    (-50i128..50, 0u32..4).prop_map(|(n, e)| q(n, 3i128.pow(e)))
}

proptest! {
    #[test]
    fn unipotent_matrices_are_symplectic(a in coord(), b in coord(), c in coord(), d in coord()) {
        let u = UnipotentCoords::new(a, b, c, d);
        let m = u.to_matrix();
        prop_assert!(m.is_symplectic());
        prop_assert_eq!(UnipotentCoords::from_matrix(&m), Some(u));
    }

    #[test]
    fn products_stay_in_u(a in coord(), b in coord(), k in coord(), ri in 0usize..4) {
        let u = UnipotentCoords::new(a, b, a, b).to_matrix();
        let prod = &u * &root_element(Root::ALL[ri], k);
        prop_assert!(UnipotentCoords::from_matrix(&prod).is_some());
    }

    #[test]
    fn twist_round_trip(t in proptest::array::uniform4(1i128..1000), m1 in 0i128..625, m2 in 0i128..625) {
        prop_assume!(t.iter().all(|x| x % 5 != 0));
        let modulus = PrimePower::new(5, 4).unwrap();
        let inv = t.map(|x| inv_mod(modulus.residue(x)).unwrap().value() as i128);
        let (a, b) = twist_character(t, m1, m2, modulus).unwrap();
        prop_assert_eq!(twist_character(inv, a, b, modulus).unwrap(), (m1, m2));
    }

    #[test]
    fn cells_are_symplectic(wi in 0usize..8, r in 0u32..4, s in 0u32..4) {
        let w = WeylWord::ALL[wi];
        if let Ok(c) = CellParams::new(w, 5, r, s) {
            let n = klsp4_group::build_cell_matrix(&c);
            prop_assert!(n.is_symplectic());
        }
    }
}
