// Family of L-functions vs random Euler product: marginal KS distances on
// a disc, for a small and a larger level.
use lfamily::experiments::{bagchi_compare, stats::two_sample_ks_critical};
use lfamily::hecke::compute_family;
use lfamily::lfun::family_ensemble;
use lfamily::randmodel::{model_ensemble, EvalGrid, DEFAULT_N};

fn main() -> lfamily::Result<()> {
    let grid = EvalGrid::parse_spec("0.75,0.2,64")?;
    let model = model_ensemble(5, &grid, DEFAULT_N, 1000)?;

    let a = model_ensemble(6, &grid, DEFAULT_N, 500)?;
    let b = model_ensemble(7, &grid, DEFAULT_N, 500)?;
    let mm = bagchi_compare(&a, &b)?;
    println!(
        "model vs model (500 + 500): aggregate KS {:.4}  (1% critical value {:.4})",
        mm.aggregate,
        two_sample_ks_critical(500, 500, 0.01)
    );

    for q in [101, 397] {
        let fam = compute_family(q, 2 * DEFAULT_N)?;
        let e = family_ensemble(&fam, &grid, DEFAULT_N)?;
        let r = bagchi_compare(&e, &model)?;
        println!(
            "q = {q} ({} forms): aggregate KS harmonic {:.4}, natural {:.4}",
            fam.len(),
            r.aggregate,
            r.aggregate_natural
        );
    }
    Ok(())
}
