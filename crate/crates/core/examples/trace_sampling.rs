// Sato–Tate traces and the multiplicative coefficients Y_n built from them.
//
//     cargo run --release --example trace_sampling -- 7
use lfamily::numkernel::primes_up_to;
use lfamily::randmodel::{build_coefficients, sample_traces};

fn main() -> lfamily::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);

    let sample = sample_traces(seed, 100_000)?;
    let n = sample.traces().len() as f64;
    let moment = |k: i32| sample.traces().iter().map(|t| t.powi(k)).sum::<f64>() / n;
    println!("seed {seed}: {} primes up to {}", sample.primes().len(), sample.bound());
    // Sato–Tate moments are the Catalan numbers 1, 2, 5 for k = 2, 4, 6
    for k in [1, 2, 4, 6] {
        println!("  E t^{k} = {:+.4}", moment(k));
    }

    let table = primes_up_to(100)?;
    let small = sample_traces(seed, 100)?;
    let y = build_coefficients(&small, 100, &table)?;
    println!("t_2 = {:+.6}, t_3 = {:+.6}", small.trace(2).unwrap(), small.trace(3).unwrap());
    for n in [2, 3, 4, 6, 8, 12, 30] {
        println!("  Y_{n:<2} = {:+.6}", y.get(n));
    }
    // Y_4 = t_2^2 - 1 and Y_6 = Y_2 Y_3
    println!("Y_4 - (t_2^2 - 1) = {:e}", y.get(4) - (small.trace(2).unwrap().powi(2) - 1.0));
    println!("Y_6 - Y_2 Y_3     = {:e}", y.get(6) - y.get(2) * y.get(3));
    Ok(())
}
