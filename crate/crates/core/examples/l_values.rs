// Smoothed L-values of newforms, and the reflection identity that fixes
// the sign convention for the root number.
use lfamily::hecke::compute_family;
use lfamily::lfun::{eval_l_smoothed, reflection_residual, root_number, EPSILON_SIGN};
use num_complex::Complex64;

fn main() -> lfamily::Result<()> {
    let n = 1 << 14;
    let fam = compute_family(37, 2 * n)?;
    let s = Complex64::new(0.75, 0.0);
    for f in &fam.forms {
        println!("q = 37 form {}: eps = {:+}, L(f, 3/4) = {:.6}", f.id, root_number(f), eval_l_smoothed(f, s, n)?);
    }

    let e11 = compute_family(11, 2 * n)?;
    let f = &e11.forms[0];
    let s = Complex64::new(1.2, 0.0);
    for sign in [EPSILON_SIGN, -EPSILON_SIGN] {
        let eps = sign * f.fricke_sign;
        let r = reflection_residual(f, s, n, eps)?;
        println!("q = 11, s = 1.2, eps = {eps:+}: reflection residual {r:.2e}");
    }
    Ok(())
}
