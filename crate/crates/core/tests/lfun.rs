mod common;

use common::family;
use lfamily::lfun::{
    eval_l_smoothed, reflection_check, reflection_factor, reflection_residual, root_number, EPSILON_SIGN,
};
use lfamily::numkernel::{cutoff, divisor_counts};
use num_complex::Complex64;

#[test]
fn smoothed_value_within_computable_bound_right_of_one() {
    let n = 1 << 12;
    let fam = family(37, 2 * n);
    let d = divisor_counts(2 * n);
    for s in [Complex64::new(1.5, 0.0), Complex64::new(1.2, 7.0)] {
        let bound: f64 = (1..=2 * n)
            .map(|k| d[k] as f64 * (1.0 - cutoff(k as f64 / n as f64)) * (k as f64).powf(-s.re))
            .sum();
        for f in &fam.forms {
            let direct: Complex64 = (1..=2 * n).map(|k| f.lambda(k) * (-s * (k as f64).ln()).exp()).sum();
            let v = eval_l_smoothed(f, s, n).unwrap();
            assert!((v - direct).norm() <= bound, "{} > {bound}", (v - direct).norm());
        }
    }
}

#[test]
fn reflection_fixes_the_sign_at_level_11() {
    let n = 1 << 14;
    let f = &family(11, 2 * n).forms[0];
    let s = Complex64::new(1.2, 0.0);
    let good = reflection_residual(f, s, n, EPSILON_SIGN * f.fricke_sign).unwrap();
    let bad = reflection_residual(f, s, n, -EPSILON_SIGN * f.fricke_sign).unwrap();
    assert!(good < 1e-3 && bad > 0.1, "{good} {bad}");
    assert_eq!(reflection_check(f, s, n).unwrap(), good);
    // 11a has rank 0: root number +1
    assert_eq!(root_number(f), 1);
    assert!(reflection_check(f, Complex64::new(0.9, 0.0), n).is_err());
}

#[test]
fn reflection_residual_shrinks_with_n() {
    let f = family(11, 1 << 15).forms[0].clone();
    let s = Complex64::new(1.3, 0.5);
    let r: Vec<f64> = [1 << 9, 1 << 10, 1 << 11]
        .iter()
        .map(|&n| reflection_check(&f, s, n).unwrap())
        .collect();
    assert!(r[0] > r[1] && r[1] > r[2], "{r:?}");
}

#[test]
fn reflection_at_the_centre() {
    // X(1) = eps, so (1 - eps X(1)) L(1) = 0 identically
    for q in [11, 37] {
        for f in &family(q, 64).forms {
            let eps = root_number(f);
            let x = reflection_factor(q, eps, Complex64::new(1.0, 0.0));
            assert!((x - eps as f64).norm() < 1e-12);
        }
    }
}

#[test]
fn rank_one_form_vanishes_at_the_centre() {
    // 37a has eps = -1, so L(f, 1/2) = 0 in the analytic normalization
    let n = 1 << 14;
    let fam = family(37, 2 * n);
    let f = fam.forms.iter().find(|f| root_number(f) == -1).unwrap();
    let near = eval_l_smoothed(f, Complex64::new(0.55, 0.0), n).unwrap();
    let far = eval_l_smoothed(f, Complex64::new(0.95, 0.0), n).unwrap();
    assert!(near.norm() < far.norm());
}
