//! Weighted empirical distributions and Kolmogorov–Smirnov distances.

use std::f64::consts::PI;

/// Sato–Tate CDF `F(t) = 1/2 + t sqrt(4 - t^2) / (4 pi) + arcsin(t/2) / pi`.
pub fn sato_tate_cdf(t: f64) -> f64 {
    if t <= -2.0 {
        return 0.0;
    }
    if t >= 2.0 {
        return 1.0;
    }
    0.5 + t * (4.0 - t * t).sqrt() / (4.0 * PI) + (t / 2.0).asin() / PI
}

/// Weighted empirical CDF: atoms sorted by value, with cumulative mass.
#[derive(Debug, Clone)]
pub struct WeightedEcdf {
    xs: Vec<f64>,
    cum: Vec<f64>,
}

impl WeightedEcdf {
    /// `weights` are normalized internally; `None` means uniform.
    pub fn new(values: &[f64], weights: Option<&[f64]>) -> Self {
        let mut pairs: Vec<(f64, f64)> = match weights {
            Some(w) => values.iter().copied().zip(w.iter().copied()).collect(),
            None => values.iter().map(|&x| (x, 1.0)).collect(),
        };
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let total: f64 = pairs.iter().map(|p| p.1).sum();
        let mut xs: Vec<f64> = Vec::with_capacity(pairs.len());
        let mut cum: Vec<f64> = Vec::with_capacity(pairs.len());
        let mut acc = 0.0;
        for (x, w) in pairs {
            acc += w / total;
            if xs.last() == Some(&x) {
                *cum.last_mut().unwrap() = acc;
            } else {
                xs.push(x);
                cum.push(acc);
            }
        }
        if let Some(last) = cum.last_mut() {
            *last = 1.0;
        }
        WeightedEcdf { xs, cum }
    }

    /// `P(X <= x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        let k = self.xs.partition_point(|&v| v <= x);
        if k == 0 {
            0.0
        } else {
            self.cum[k - 1]
        }
    }

    pub fn atoms(&self) -> &[f64] {
        &self.xs
    }

    /// `sup_x |F(x) - G(x)|` against a continuous CDF `g`.
    pub fn ks_vs(&self, g: impl Fn(f64) -> f64) -> f64 {
        let mut d: f64 = 0.0;
        let mut prev = 0.0;
        for (x, c) in self.xs.iter().zip(&self.cum) {
            let gx = g(*x);
            d = d.max((gx - prev).abs()).max((c - gx).abs());
            prev = *c;
        }
        d
    }

    /// Two-sample distance `sup_x |F(x) - G(x)|`.
    pub fn ks(&self, other: &WeightedEcdf) -> f64 {
        let (mut i, mut j) = (0, 0);
        let (mut fa, mut fb) = (0.0, 0.0);
        let mut d: f64 = 0.0;
        while i < self.xs.len() || j < other.xs.len() {
            let xa = self.xs.get(i).copied().unwrap_or(f64::INFINITY);
            let xb = other.xs.get(j).copied().unwrap_or(f64::INFINITY);
            let x = xa.min(xb);
            if xa == x {
                fa = self.cum[i];
                i += 1;
            }
            if xb == x {
                fb = other.cum[j];
                j += 1;
            }
            d = d.max((fa - fb).abs());
        }
        d
    }
}

/// Kolmogorov survival function `P(K > x) = 2 sum_{k>=1} (-1)^{k-1} e^{-2 k^2 x^2}`.
pub fn kolmogorov_sf(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < 0.3 {
        // the alternating series converges slowly here; the complement form
        // sqrt(2 pi)/x sum e^{-(2k-1)^2 pi^2 / (8 x^2)} is exact and fast
        let s: f64 = (1..=20)
            .map(|k| {
                let m = (2 * k - 1) as f64;
                (-(m * m) * PI * PI / (8.0 * x * x)).exp()
            })
            .sum();
        return 1.0 - (2.0 * PI).sqrt() / x * s;
    }
    let s: f64 = (1..=100)
        .map(|k| {
            let k = k as f64;
            let sign = if k as u64 % 2 == 1 { 1.0 } else { -1.0 };
            sign * (-2.0 * k * k * x * x).exp()
        })
        .sum();
    (2.0 * s).clamp(0.0, 1.0)
}

/// `x` with `P(K > x) = alpha`.
pub fn kolmogorov_quantile(alpha: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 10.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_sf(mid) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Asymptotic critical value of the two-sample KS statistic at level `alpha`.
pub fn two_sample_ks_critical(m: usize, n: usize, alpha: f64) -> f64 {
    let (m, n) = (m as f64, n as f64);
    kolmogorov_quantile(alpha) * ((m + n) / (m * n)).sqrt()
}

/// `Catalan(m) = binom(2m, m) / (m + 1)`, the `2m`-th Sato–Tate moment.
pub fn catalan(m: u32) -> f64 {
    let mut c = 1.0;
    for k in 0..m {
        c = c * 2.0 * (2 * k + 1) as f64 / (k + 2) as f64;
    }
    c
}

/// `E(t^k)` under Sato–Tate.
pub fn sato_tate_moment(k: u32) -> f64 {
    if k % 2 == 1 {
        0.0
    } else {
        catalan(k / 2)
    }
}

/// Least-squares slope and intercept of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_endpoints_and_shape() {
        assert_eq!(sato_tate_cdf(-2.0), 0.0);
        assert_eq!(sato_tate_cdf(2.0), 1.0);
        assert!((sato_tate_cdf(0.0) - 0.5).abs() < 1e-15);
        let e = WeightedEcdf::new(&[1.0, 0.0, 1.0], Some(&[1.0, 2.0, 1.0]));
        assert_eq!(e.cdf(-1.0), 0.0);
        assert_eq!(e.cdf(0.0), 0.5);
        assert_eq!(e.cdf(5.0), 1.0);
    }

    #[test]
    fn ks_single_atom() {
        let e = WeightedEcdf::new(&[0.3], None);
        assert!(e.ks_vs(sato_tate_cdf) >= 0.5);
        assert_eq!(e.ks(&e), 0.0);
    }

    #[test]
    fn kolmogorov_table_values() {
        // standard table: 1.3581 at 5%, 1.6276 at 1%
        assert!((kolmogorov_quantile(0.05) - 1.3581).abs() < 1e-3);
        assert!((kolmogorov_quantile(0.01) - 1.6276).abs() < 1e-3);
        assert!((kolmogorov_sf(0.29) - kolmogorov_sf(0.3)).abs() < 1e-3);
    }

    #[test]
    fn catalan_numbers() {
        let c: Vec<f64> = (0..6).map(catalan).collect();
        assert_eq!(c, vec![1.0, 1.0, 2.0, 5.0, 14.0, 42.0]);
    }
}
