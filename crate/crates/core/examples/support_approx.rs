// Greedy angles theta_p making sum 2 cos(theta_p) p^-s approximate log(phi).
//
//     cargo run --release --example support_approx -- poly:1.5,0.5
use lfamily::experiments::{greedy_support_approx, TargetFunction};
use lfamily::randmodel::{sato_tate_trace, EvalGrid};
use lfamily::numkernel::primes_up_to;
use num_complex::Complex64;

fn main() -> lfamily::Result<()> {
    let spec = std::env::args().nth(1).unwrap_or_else(|| "poly:1.5,0.5".into());
    let grid = EvalGrid::parse_spec("0.75,0.1,64")?;

    let target = TargetFunction::parse(&spec, &grid)?;
    for n0 in [1, 10, 30] {
        let tr = greedy_support_approx(&target, 1000, n0)?;
        println!(
            "{spec}, n0 = {n0}: residual {:.4} -> {:.4} (tail beyond pmax <= {:.4})",
            tr.initial_residual,
            tr.final_residual(),
            tr.tail_bound
        );
    }

    // a target that is exactly a prime sum with known angles
    let primes = primes_up_to(1000)?.primes().to_vec();
    let known: Vec<Complex64> = grid
        .boundary()
        .iter()
        .map(|s| {
            primes
                .iter()
                .map(|&p| sato_tate_trace(1, p) * (-s * (p as f64).ln()).exp())
                .sum::<Complex64>()
                .exp()
        })
        .collect();
    let target = TargetFunction::from_boundary(&grid, &known)?;
    let tr = greedy_support_approx(&target, 1000, 1)?;
    println!("self-reconstruction: residual {:.4} -> {:.4}", tr.initial_residual, tr.final_residual());
    Ok(())
}
