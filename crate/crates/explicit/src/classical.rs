use klsp4_padic::{inv_mod, CyclotomicTally, PrimePower};
use num_integer::Integer;

/// `S(m, n; p^k)` as an exact tally (single loop over units with inverses).
pub fn gl2_kloosterman(m: i64, n: i64, modulus: PrimePower) -> CyclotomicTally {
    let q = modulus.value();
    let mut t = CyclotomicTally::with_capacity_level(modulus.p(), modulus.k());
    if q == 1 {
        return CyclotomicTally::one(modulus.p());
    }
    for x in 1..q {
        let r = modulus.residue(x as i128);
        let Ok(xi) = inv_mod(r) else { continue };
        let idx = modulus.residue(m as i128) * r + modulus.residue(n as i128) * xi;
        t.add_residue(idx.value(), 1);
    }
    t
}

/// `S(m, n; q)` for arbitrary `q >= 1` by a direct double loop, as `(re, im)`.
///
/// Tallies only carry roots of unity of one prime-power order, so a general
/// modulus is evaluated in floating point.
pub fn gl2_kloosterman_general(m: i64, n: i64, q: u64) -> (f64, f64) {
    let (mut re, mut im) = (0.0, 0.0);
    for x in 0..q {
        for y in 0..q {
            if (x as u128 * y as u128) % q as u128 != 1 % q as u128 {
                continue;
            }
            let t = (m as i128 * x as i128 + n as i128 * y as i128).rem_euclid(q as i128);
            let th = std::f64::consts::TAU * t as f64 / q as f64;
            re += th.cos();
            im += th.sin();
        }
    }
    (re, im)
}

/// The Ramanujan sum `c_q(m)`, which is always an integer.
pub fn ramanujan(q: u64, m: i64) -> i64 {
    // c_q(m) = sum over d | gcd(q, m) of mu(q/d) d
    let g = (q as i64).gcd(&m);
    let mut total = 0;
    for d in 1..=g {
        if g % d == 0 {
            total += mobius(q / d as u64) * d;
        }
    }
    total
}

/// `c_{p^k}(m)` accumulated term by term as a tally.
pub fn ramanujan_tally(modulus: PrimePower, m: i64) -> CyclotomicTally {
    let mut t = CyclotomicTally::with_capacity_level(modulus.p(), modulus.k());
    for x in 0..modulus.value() {
        if modulus.is_unit(x as i128) || modulus.k() == 0 {
            t.add_residue(modulus.reduce(m as i128 * x as i128), 1);
        }
    }
    t
}

fn mobius(mut n: u64) -> i64 {
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// The quadratic Gauss sum `sum_{x mod p^k} e(a x^2 / p^k)`.
pub fn gauss_quadratic(a: i64, modulus: PrimePower) -> CyclotomicTally {
    let mut t = CyclotomicTally::with_capacity_level(modulus.p(), modulus.k());
    for x in 0..modulus.value() {
        let x = x as i128;
        t.add_residue(
            modulus.reduce(a as i128 * (x * x % modulus.value() as i128)),
            1,
        );
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(p: u64, k: u32) -> PrimePower {
        PrimePower::new(p, k).unwrap()
    }

    #[test]
    fn kloosterman_examples() {
        assert_eq!(gl2_kloosterman(3, 4, pp(5, 0)).to_integer(), Some(1));
        assert_eq!(gl2_kloosterman(0, 0, pp(7, 1)).to_integer(), Some(6));
        let s = gl2_kloosterman(1, 1, pp(5, 1));
        let expect = 2.0 + 2.0 * (4.0 * std::f64::consts::PI / 5.0).cos();
        assert!((s.magnitude() - 0.381966).abs() < 1e-6);
        assert!((s.to_complex().0 - expect).abs() < 1e-9);
        assert_eq!(gl2_kloosterman_general(2, 3, 1), (1.0, 0.0));
    }

    #[test]
    fn general_loop_agrees_on_prime_powers() {
        for (p, k) in [(2, 3), (3, 2), (5, 1)] {
            let m = pp(p, k);
            for a in -3..4 {
                for b in -3..4 {
                    let t = gl2_kloosterman(a, b, m).to_complex();
                    let g = gl2_kloosterman_general(a, b, m.value());
                    assert!((t.0 - g.0).abs() < 1e-9 && (t.1 - g.1).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn ramanujan_examples() {
        assert_eq!(ramanujan(1, 7), 1);
        assert_eq!(ramanujan(5, 0), 4);
        assert_eq!(ramanujan(4, 2), -2);
        for q in 1..40u64 {
            for m in -6..7i64 {
                let (re, _) = gl2_kloosterman_general(m, 0, q);
                assert_eq!(ramanujan(q, m), re.round() as i64, "c_{q}({m})");
            }
        }
        assert_eq!(ramanujan_tally(pp(2, 2), 2).to_integer(), Some(-2));
        assert_eq!(ramanujan_tally(pp(3, 0), 2).to_integer(), Some(1));
    }

    #[test]
    fn gauss_examples() {
        assert_eq!(gauss_quadratic(0, pp(3, 2)).to_integer(), Some(9));
        assert!(gauss_quadratic(1, pp(2, 1)).is_zero());
        for p in [3, 5, 7, 11] {
            let g = gauss_quadratic(1, pp(p, 1)).magnitude();
            assert!((g - (p as f64).sqrt()).abs() < 1e-9);
        }
    }
}
