// M draws of the random Euler product on a disc, saved in the ensemble layout.
//
//     cargo run --release --example model_ensemble -- ensemble.json
use lfamily::randmodel::{model_ensemble, EvalGrid, DEFAULT_N};
use lfamily::serial::write_json;

fn main() -> lfamily::Result<()> {
    let out = std::env::args().nth(1);
    let grid = EvalGrid::parse_spec("0.75,0.2,64")?;
    let e = model_ensemble(42, &grid, DEFAULT_N, 200)?;

    let center = grid.len() - 1;
    let vals: Vec<f64> = e.samples.iter().map(|v| v[center].re).collect();
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    let sd = (vals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (vals.len() - 1) as f64).sqrt();
    println!("{} draws, N = {}, grid {} ({} points)", e.meta.m, e.meta.n_cut, grid, grid.len());
    println!("L(3/4): mean {mean:.4} +- {:.4}, sd {sd:.4}", sd / (vals.len() as f64).sqrt());
    let sups: Vec<f64> = e.samples.iter().map(|v| grid.sup_norm(v)).collect();
    println!("median sup-norm on the boundary {:.4}", {
        let mut s = sups.clone();
        s.sort_by(f64::total_cmp);
        s[s.len() / 2]
    });

    if let Some(path) = out {
        write_json(path.as_ref(), &e)?;
        println!("wrote {path}");
    }
    Ok(())
}
