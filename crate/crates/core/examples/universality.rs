// How many forms of a level come close to a target on a small disc, and
// how likely the random model is to do so.
use lfamily::experiments::{model_support_probability, universality_count, TargetFunction};
use lfamily::hecke::compute_family;
use lfamily::lfun::{default_n, family_ensemble};
use lfamily::randmodel::{EvalGrid, DEFAULT_N};

fn main() -> lfamily::Result<()> {
    let grid = EvalGrid::parse_spec("0.75,0.1,64")?;
    let target = TargetFunction::parse("const:1", &grid)?;

    for q in [101, 397] {
        let n = default_n(q);
        let fam = compute_family(q, 2 * n)?;
        let e = family_ensemble(&fam, &grid, n)?;
        for eps in [0.25, 0.5, 0.75] {
            let r = universality_count(&e, &target, eps)?;
            println!(
                "q = {q}, eps = {eps}: {}/{} forms, harmonic {:.3}, natural {:.3}",
                r.count, r.g, r.harmonic_fraction, r.natural_fraction
            );
        }
    }

    let p = model_support_probability(&target, &[0.25, 0.5, 0.75], 2000, 1, DEFAULT_N)?;
    println!("model, phi = 1: {:?} (stderr {:?})", p.estimate, p.stderr);

    // -1 is not in the support: the model is positive on the real diameter
    let minus = TargetFunction::parse("const:-1", &grid)?;
    println!("admissible(-1): {:?}", minus.admissibility());
    let p = model_support_probability(&minus, &[1.6, 0.8, 0.4, 0.2], 2000, 1, DEFAULT_N)?;
    println!("model, phi = -1: eps {:?} -> {:?}", p.eps, p.estimate);
    Ok(())
}
