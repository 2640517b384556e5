// Euler product vs smoothed Dirichlet series of one draw, right of Re s = 1.
use lfamily::numkernel::primes_up_to;
use lfamily::randmodel::{build_coefficients, eval_euler_product, eval_smoothed_series, sample_traces, SU2Sample};
use num_complex::Complex64;

fn main() -> lfamily::Result<()> {
    let s = Complex64::new(2.0, 1.0);
    let n = 1 << 14;
    let table = primes_up_to(2 * n)?;
    for seed in 1..=3 {
        let sample = sample_traces(seed, 2 * n)?;
        let prod = eval_euler_product(&sample, s, 2 * n)?;
        let y = build_coefficients(&sample, 2 * n, &table)?;
        let series = eval_smoothed_series(&y, s, n)?;
        println!(
            "seed {seed}: product {:.10} (tail <= {:.1e})  series {:.10}  |diff| {:.1e}",
            prod.value,
            prod.tail.unwrap_or(f64::NAN),
            series,
            (prod.value - series).norm()
        );
    }

    // every X_p = identity: L = zeta(s)^2
    let one = SU2Sample::constant(&table, 2 * n, 2.0)?;
    let z = eval_euler_product(&one, Complex64::new(2.0, 0.0), 2 * n)?;
    let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
    println!("identity sample at s = 2: {:.6} vs zeta(2)^2 = {:.6}", z.value.re, zeta2 * zeta2);
    Ok(())
}
