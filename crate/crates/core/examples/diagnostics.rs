// Equidistribution, Petersson, smoothing decay, growth and second moment.
use lfamily::experiments::{
    moment_growth_test, petersson_check, sato_tate_test, smoothing_decay_test, Generator,
};
use lfamily::hecke::compute_family;
use lfamily::randmodel::{second_moment_stat, EvalGrid};

fn main() -> lfamily::Result<()> {
    for q in [101, 397] {
        let fam = compute_family(q, 1000)?;
        let r = sato_tate_test(&fam, 2)?;
        println!("q = {q}: KS(lambda(2), Sato-Tate) harmonic {:.4}, natural {:.4}", r.ks_harmonic, r.ks_natural);
    }

    let fam = compute_family(101, 1 << 15)?;
    let pet = petersson_check(&fam, &[(2, 2), (2, 3), (3, 5)], 1000)?;
    println!("Petersson at q = 101, c <= {}: kappa = {:.4}", pet.c_max, pet.kappa);
    for row in &pet.rows {
        println!("  ({}, {}): residual {:.2e} (opposite sign {:.2e})", row.m, row.n, row.residual, row.residual_opposite_sign);
    }

    let grid = EvalGrid::parse_spec("0.75,0.1,64")?;
    let n_list = [256, 1024, 4096];
    let d = smoothing_decay_test(Generator::Family(&fam), &n_list, &grid, 1 << 14)?;
    println!("family smoothing gaps {:?}, slope {:.3}", d.mean_gap, d.slope);
    let d = smoothing_decay_test(Generator::Model { m: 50, seed: 1 }, &n_list, &grid, 1 << 14)?;
    println!("model smoothing gaps {:?}, slope {:.3}", d.mean_gap, d.slope);

    let g = moment_growth_test(Generator::Model { m: 100, seed: 1 }, 0.75, &[0.0, 5.0, 10.0, 20.0], 1 << 12)?;
    println!("model E|L(3/4 + it)| {:?}, exponent {:.3}", g.mean_abs, g.exponent);

    for e in second_moment_stat(0.75, &[100, 1000, 10000], 200, 1)? {
        println!("E|sum_(n<={}) Y_n n^-3/4|^2 = {:.3} +- {:.3}", e.u, e.mean, e.stderr);
    }
    Ok(())
}
