use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkernel::cutoff;

use super::MultCoefficients;

/// `phi(n/N) n^-s` tabulated for `1 <= n < 2N` at a fixed list of points.
/// Applying it to a coefficient vector is a dense dot product per point,
/// shared by model draws and family evaluations on the same grid.
#[derive(Debug, Clone)]
pub struct SmoothedKernel {
    n_cut: usize,
    points: Vec<Complex64>,
    // row-major: points.len() rows of (2N - 1) entries
    table: Vec<Complex64>,
}

impl SmoothedKernel {
    pub fn new(points: &[Complex64], n_cut: usize) -> Result<Self> {
        if n_cut == 0 {
            return Err(Error::invalid("smoothing parameter N must be positive"));
        }
        let len = 2 * n_cut - 1;
        let weights: Vec<(f64, f64)> = (1..=len)
            .map(|n| (cutoff(n as f64 / n_cut as f64), (n as f64).ln()))
            .collect();
        let mut table = Vec::with_capacity(points.len() * len);
        for &s in points {
            for &(w, ln) in &weights {
                let mag = w * (-s.re * ln).exp();
                let (sn, cs) = (-s.im * ln).sin_cos();
                table.push(Complex64::new(mag * cs, mag * sn));
            }
        }
        Ok(SmoothedKernel {
            n_cut,
            points: points.to_vec(),
            table,
        })
    }

    pub fn n_cut(&self) -> usize {
        self.n_cut
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// Largest coefficient index that contributes.
    pub fn span(&self) -> usize {
        2 * self.n_cut - 1
    }

    /// `sum_n c[n] phi(n/N) n^-s` at every point; `c[0]` is ignored.
    pub fn apply(&self, coeffs: &[f64]) -> Result<Vec<Complex64>> {
        let len = self.span();
        if coeffs.len() <= len {
            return Err(Error::invalid(format!(
                "need coefficients up to n = {len}, have {}",
                coeffs.len().saturating_sub(1)
            )));
        }
        let c = &coeffs[1..=len];
        Ok(self
            .table
            .chunks_exact(len)
            .zip(&self.points)
            .map(|(row, s)| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, a) in row.iter().zip(c) {
                    acc += k * a;
                }
                if s.im == 0.0 {
                    acc.im = 0.0;
                }
                acc
            })
            .collect())
    }
}

/// `sum_{n <= 2N} Y_n phi(n/N) n^-s`.
pub fn eval_smoothed_series(
    coeffs: &MultCoefficients,
    s: Complex64,
    n_cut: usize,
) -> Result<Complex64> {
    if n_cut == 0 || 2 * n_cut > coeffs.nmax() {
        return Err(Error::invalid(format!(
            "2N = {} exceeds nmax = {}",
            2 * n_cut,
            coeffs.nmax()
        )));
    }
    if s.re <= 0.5 {
        return Err(Error::invalid(format!("Re s = {} must exceed 1/2", s.re)));
    }
    smoothed_sum(coeffs.values(), s, n_cut)
}

/// Same sum for any coefficient vector indexed by `n` (entry 0 ignored).
pub(crate) fn smoothed_sum(c: &[f64], s: Complex64, n_cut: usize) -> Result<Complex64> {
    let top = 2 * n_cut - 1;
    if c.len() <= top {
        return Err(Error::invalid(format!("need coefficients up to n = {top}")));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (n, &a) in c.iter().enumerate().take(top + 1).skip(1) {
        if a == 0.0 {
            continue;
        }
        let w = cutoff(n as f64 / n_cut as f64);
        let ln = (n as f64).ln();
        acc += a * w * Complex64::from_polar((-s.re * ln).exp(), -s.im * ln);
    }
    if s.im == 0.0 {
        acc.im = 0.0;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::primes_up_to;
    use crate::randmodel::{build_coefficients, eval_euler_product, SU2Sample};

    #[test]
    fn delta_coefficients() {
        let mut v = vec![0.0; 21];
        v[1] = 1.0;
        let c = MultCoefficients::from_values(v);
        let z = eval_smoothed_series(&c, Complex64::new(0.7, 3.0), 10).unwrap();
        assert_eq!(z, Complex64::new(1.0, 0.0));
        assert!(eval_smoothed_series(&c, Complex64::new(0.7, 0.0), 11).is_err());
    }

    #[test]
    fn matches_euler_product_far_right() {
        let table = primes_up_to(20_000).unwrap();
        for seed in [1, 2, 3] {
            let smp = SU2Sample::draw(seed, &table, 20_000);
            let y = build_coefficients(&smp, 20_000, &table).unwrap();
            let s = Complex64::new(3.0, 1.5);
            let a = eval_smoothed_series(&y, s, 10_000).unwrap();
            let b = eval_euler_product(&smp, s, 20_000).unwrap().value;
            assert!((a - b).norm() < 1e-6, "seed {seed}: {a} vs {b}");
        }
    }

    #[test]
    fn kernel_agrees_with_direct_sum() {
        let table = primes_up_to(2000).unwrap();
        let smp = SU2Sample::draw(5, &table, 2000);
        let y = build_coefficients(&smp, 2000, &table).unwrap();
        let pts = [Complex64::new(0.75, 0.0), Complex64::new(0.6, 0.15)];
        let k = SmoothedKernel::new(&pts, 1000).unwrap();
        let via_k = k.apply(y.values()).unwrap();
        for (s, v) in pts.iter().zip(&via_k) {
            let d = eval_smoothed_series(&y, *s, 1000).unwrap();
            assert!((d - v).norm() < 1e-12);
        }
    }
}
