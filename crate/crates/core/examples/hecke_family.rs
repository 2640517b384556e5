// Newforms of a prime level: eigenvalues, Fricke signs, harmonic weights,
// and a round trip through the coefficient cache format.
//
//     cargo run --release --example hecke_family -- 37
use lfamily::hecke::{build_space, compute_family, export_family, genus_x0, hecke_operator, import_family};

fn main() -> lfamily::Result<()> {
    let q: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(37);

    let space = build_space(q)?;
    println!("level {q}: genus {} (formula {}), modular symbols dim {}", space.genus(), genus_x0(q), space.dim());
    let t2 = hecke_operator(&space, 2)?;
    // the cuspidal subspace has dimension 2g: each eigenvalue appears twice
    println!("T_2 on cuspidal symbols ({}x{}): trace {:.6}", t2.nrows(), t2.ncols(), t2.trace());

    let fam = compute_family(q, 1000)?;
    for f in &fam.forms {
        let ap: Vec<String> = [2, 3, 5, 7, 11, 13].iter().map(|&p| format!("{:+.4}", f.a(p))).collect();
        println!("  form {}: a_p = [{}]  w_q = {:+}  weight {:.4}", f.id, ap.join(", "), f.fricke_sign, f.weight);
    }

    let dir = std::env::temp_dir().join(format!("lfamily-example-{q}"));
    std::fs::create_dir_all(&dir)?;
    export_family(&fam, &dir)?;
    let back = import_family(&dir)?;
    println!("round trip through {}: {}", dir.display(), if back == fam { "identical" } else { "DIFFERENT" });
    Ok(())
}
