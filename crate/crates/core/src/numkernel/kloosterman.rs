use super::arith::{gcd, mod_inverse};
use num_complex::Complex64;
use std::f64::consts::PI;

/// `S(m, n; c)` by direct enumeration over invertible residues, returned
/// as a complex number (the imaginary part vanishes up to rounding).
pub fn kloosterman_complex(m: i64, n: i64, c: u64) -> Complex64 {
    let ci = c as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for x in 0..ci {
        if gcd(x as u64, c) != 1 {
            continue;
        }
        let xbar = mod_inverse(x, ci).unwrap_or(0);
        let phase = (m.rem_euclid(ci) as i128 * x as i128 + n.rem_euclid(ci) as i128 * xbar as i128)
            .rem_euclid(ci as i128) as f64;
        let ang = 2.0 * PI * phase / c as f64;
        acc += Complex64::new(ang.cos(), ang.sin());
    }
    acc
}

/// Real Kloosterman sum `S(m, n; c)`, `c >= 1`.
pub fn kloosterman(m: i64, n: i64, c: u64) -> f64 {
    kloosterman_complex(m, n, c).re
}

/// `S(m, n; c)` through twisted multiplicativity
/// `S(m, n; c1 c2) = S(m cbar2^2, n; c1) S(m cbar1^2, n; c2)` over the
/// prime-power factorization of `c`; each prime-power sum is enumerated.
pub fn kloosterman_multiplicative(m: i64, n: i64, c: u64, c_factors: &[(u64, u32)]) -> f64 {
    let ci = c as i64;
    let mut prod = 1.0;
    for &(p, e) in c_factors {
        let pe = p.pow(e) as i64;
        let rest = ci / pe;
        let rbar = mod_inverse(rest, pe).unwrap_or(0);
        let twist = (rbar as i128 * rbar as i128 % pe as i128) as i64;
        let mm = (m.rem_euclid(pe) as i128 * twist as i128).rem_euclid(pe as i128) as i64;
        prod *= kloosterman(mm, n, pe as u64);
    }
    prod
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::primes_up_to;

    #[test]
    fn small_values() {
        assert!((kloosterman(1, 1, 1) - 1.0).abs() < 1e-15);
        assert!((kloosterman(1, 1, 2) - 1.0).abs() < 1e-15);
        assert!((kloosterman(1, 1, 3) + 1.0).abs() < 1e-14);
    }

    #[test]
    fn symmetric_and_real() {
        for c in 1..60u64 {
            for (m, n) in [(1, 2), (3, 5), (2, 2), (7, -4)] {
                let a = kloosterman_complex(m, n, c);
                let b = kloosterman_complex(n, m, c);
                assert!(a.im.abs() < 1e-12);
                assert!((a.re - b.re).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn weil_bound_for_primes() {
        for p in [5u64, 7, 11, 101, 211] {
            for m in 1..5 {
                assert!(kloosterman(m, 1, p).abs() <= 2.0 * (p as f64).sqrt() + 1e-9);
            }
        }
    }

    #[test]
    fn multiplicative_route_matches_enumeration() {
        let t = primes_up_to(5000).unwrap();
        for c in [
            6u64,
            12,
            30,
            101 * 2,
            101 * 12,
            2 * 3 * 5 * 7,
            4 * 9 * 25,
            101 * 35,
        ] {
            let f = t.factor(c).unwrap();
            for (m, n) in [(1, 1), (2, 3), (3, 5), (2, 2)] {
                let direct = kloosterman(m, n, c);
                let mult = kloosterman_multiplicative(m, n, c, &f);
                assert!(
                    (direct - mult).abs() < 1e-9,
                    "c={c} m={m} n={n}: {direct} vs {mult}"
                );
            }
        }
    }
}
