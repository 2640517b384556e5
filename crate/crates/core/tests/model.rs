use lfamily::experiments::stats::{sato_tate_cdf, WeightedEcdf};
use lfamily::numkernel::{chebyshev_u, divisor_counts, gcd, primes_up_to};
use lfamily::randmodel::{
    build_coefficients, derive_seed, eval_euler_product, eval_smoothed_series, model_ensemble, sample_traces,
    sato_tate_trace, second_moment_stat, EvalGrid, MultCoefficients, SU2Sample,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn local_factor_is_chebyshev_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let primes = primes_up_to(1000).unwrap().primes().to_vec();
    for _ in 0..200 {
        let t: f64 = rng.gen_range(-2.0..=2.0);
        let p = primes[rng.gen_range(0..primes.len())] as f64;
        let s = Complex64::new(2.0, rng.gen_range(-20.0..20.0));
        let x = (-s * p.ln()).exp();
        let factor = 1.0 / (1.0 - t * x + x * x);
        let series: Complex64 = (0..=40).map(|nu| chebyshev_u(nu, t) * x.powu(nu)).sum();
        assert!((factor - series).norm() < 1e-10);
    }
}

#[test]
fn divisor_bound_and_prime_powers() {
    let nmax = 50_000;
    let table = primes_up_to(nmax).unwrap();
    let d = divisor_counts(nmax);
    for seed in 0..5 {
        let smp = sample_traces(seed, nmax).unwrap();
        let y = build_coefficients(&smp, nmax, &table).unwrap();
        for n in 1..=nmax {
            assert!(y.get(n).abs() <= d[n] as f64 + 1e-9, "|Y_{n}| > d({n})");
        }
        // Y_{p^k} = U_k(t_p)
        let t = smp.trace(3).unwrap();
        for k in 0..9u32 {
            assert!((y.get(3usize.pow(k)) - chebyshev_u(k, t)).abs() < 1e-12);
        }
        assert_eq!(y.get(1), 1.0);
    }
}

#[test]
fn traces_depend_only_on_seed_and_prime() {
    let a = sample_traces(11, 1000).unwrap();
    let b = sample_traces(11, 100).unwrap();
    for (&p, &t) in b.primes().iter().zip(b.traces()) {
        assert_eq!(a.trace(p), Some(t));
        assert_eq!(sato_tate_trace(11, p), t);
    }
    assert_ne!(sample_traces(12, 100).unwrap().traces(), b.traces());
}

#[test]
fn smoothed_model_mean_is_one_at_three_quarters() {
    // E Y_n = delta_{n,1} for Haar traces, so E L^(N)(s) = phi(1/N) = 1
    let grid = EvalGrid::parse_spec("0.75,0.2,64").unwrap();
    let e = model_ensemble(21, &grid, 1 << 14, 200).unwrap();
    let c = grid.len() - 1;
    assert_eq!(grid.points()[c], Complex64::new(0.75, 0.0));
    let v: Vec<f64> = e.samples.iter().map(|s| s[c].re).collect();
    let m = v.len() as f64;
    let mean = v.iter().sum::<f64>() / m;
    let se = (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0) / m).sqrt();
    assert!((mean - 1.0).abs() < 3.0 * se, "mean {mean} se {se}");
    for s in &e.samples {
        for i in grid.real_indices() {
            assert_eq!(s[i].im, 0.0);
        }
    }
}

#[test]
fn euler_product_matches_series_far_right() {
    let n = 4096;
    let table = primes_up_to(2 * n).unwrap();
    for seed in 0..5 {
        let smp = sample_traces(seed, 2 * n).unwrap();
        let y = build_coefficients(&smp, 2 * n, &table).unwrap();
        let s = Complex64::new(3.0, 0.5);
        let prod = eval_euler_product(&smp, s, 2 * n).unwrap();
        let ser = eval_smoothed_series(&y, s, n).unwrap();
        assert!((prod.value - ser).norm() < 1e-6);
    }
}

#[test]
fn zeta_squared_from_identity_sample() {
    let n = 100_000;
    let table = primes_up_to(2 * n).unwrap();
    let one = SU2Sample::constant(&table, 2 * n, 2.0).unwrap();
    let y = build_coefficients(&one, 2 * n, &table).unwrap();
    let d = divisor_counts(2 * n);
    assert!((1..=2 * n).all(|k| y.get(k) == d[k] as f64));
    let z2 = std::f64::consts::PI.powi(2) / 6.0;
    let v = eval_smoothed_series(&y, Complex64::new(2.0, 0.0), n).unwrap();
    assert!((v.re - z2 * z2).abs() < 1e-3);
}

#[test]
fn only_y1_gives_one() {
    let mut v = vec![0.0; 101];
    v[1] = 1.0;
    let y = MultCoefficients::from_values(v);
    let r = eval_smoothed_series(&y, Complex64::new(0.7, 3.0), 50).unwrap();
    assert!((r - 1.0).norm() < 1e-15);
}

#[test]
fn smoothed_series_is_linear() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let a: Vec<f64> = (0..=512).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let b: Vec<f64> = (0..=512).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 2.0 * x - 3.0 * y).collect();
    let s = Complex64::new(0.8, 1.3);
    let f = |v: &[f64]| eval_smoothed_series(&MultCoefficients::from_values(v.to_vec()), s, 256).unwrap();
    assert!((f(&sum) - (2.0 * f(&a) - 3.0 * f(&b))).norm() < 1e-12);
}

#[test]
fn second_moment_trivial_cut_and_sigma_monotone() {
    let one = second_moment_stat(0.75, &[1], 50, 3).unwrap();
    assert_eq!(one[0].mean, 1.0);
    // shared draws: |sum Y_n n^-sigma|^2 is not termwise monotone, but its
    // expectation is sum E|Y_n|^2-type terms decreasing in sigma
    let lo = second_moment_stat(0.6, &[100, 1000], 2000, 4).unwrap();
    let hi = second_moment_stat(0.9, &[100, 1000], 2000, 4).unwrap();
    for (a, b) in lo.iter().zip(&hi) {
        assert!(a.mean > b.mean, "{} <= {}", a.mean, b.mean);
    }
}

#[test]
fn closed_form_ks_agrees_with_empirical_reference() {
    let xs: Vec<f64> = (0..300).map(|i| sato_tate_trace(derive_seed(77, i), 2)).collect();
    let reference: Vec<f64> = (0..1_000_000).map(|i| sato_tate_trace(derive_seed(5, i), 2)).collect();
    let a = WeightedEcdf::new(&xs, None);
    let closed = a.ks_vs(sato_tate_cdf);
    let brute = a.ks(&WeightedEcdf::new(&reference, None));
    assert!((closed - brute).abs() < 2e-3, "{closed} vs {brute}");
}

/// `Y_n` from the factorization of `n`, smallest prime innermost-last:
/// `U(p1) * (U(p2) * (... * 1))`, the evaluation order the builder uses.
fn y_from_factorization(smp: &SU2Sample, n: u64) -> f64 {
    let table = primes_up_to(n.max(2) as usize).unwrap();
    table
        .factor(n)
        .unwrap()
        .iter()
        .rev()
        .fold(1.0, |acc, &(p, e)| chebyshev_u(e, smp.trace(p).unwrap()) * acc)
}

#[test]
fn multiplicative_on_coprime_pairs() {
    let nmax = 1 << 16;
    let table = primes_up_to(nmax).unwrap();
    let smp = sample_traces(8, nmax).unwrap();
    let y = build_coefficients(&smp, nmax, &table).unwrap();
    let d = divisor_counts(nmax);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut checked = 0;
    while checked < 1000 {
        let n = rng.gen_range(2..=256usize);
        let m = rng.gen_range(2..=nmax / n);
        if gcd(n as u64, m as u64) == 1 {
            // bit-exact in the prescribed order, equal up to rounding otherwise
            assert_eq!(y.get(n * m), y_from_factorization(&smp, (n * m) as u64));
            let tol = 4.0 * f64::EPSILON * d[n * m] as f64;
            assert!((y.get(n * m) - y.get(n) * y.get(m)).abs() <= tol, "n = {n}, m = {m}");
            checked += 1;
        }
    }
}
