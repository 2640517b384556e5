use std::f64::consts::PI;

const SERIES_SWITCH: f64 = 12.0;

/// Bessel function of the first kind `J_1(x)` for `x >= 0`.
///
/// Power series up to `x = 12`, Hankel asymptotic expansion beyond.
pub fn bessel_j1(x: f64) -> f64 {
    let x = x.abs();
    if x <= SERIES_SWITCH {
        series(x)
    } else {
        asymptotic(x)
    }
}

fn series(x: f64) -> f64 {
    let h = 0.5 * x;
    let h2 = h * h;
    let mut term = h;
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= -h2 / (k * (k + 1.0));
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) || k > 200.0 {
            break;
        }
    }
    sum
}

fn asymptotic(x: f64) -> f64 {
    // a_k = prod_{j=1..k} (mu - (2j-1)^2) / (k! 8^k), mu = 4
    let mu = 4.0;
    let mut p = 0.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..60 {
        if k > 0 {
            let kk = k as f64;
            a *= (mu - (2.0 * kk - 1.0).powi(2)) / (kk * 8.0 * x);
        }
        if a.abs() > last {
            break;
        }
        last = a.abs();
        match k % 4 {
            0 => p += a,
            1 => q += a,
            2 => p -= a,
            _ => q -= a,
        }
        if a.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - 0.75 * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}
