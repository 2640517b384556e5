use num_complex::Complex64;

use crate::error::{Error, Result};

use super::SU2Sample;

/// Truncated Euler product, with a tail bound when it is meaningful.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerProduct {
    pub value: Complex64,
    /// Bound on `sum_{p > pmax} 2 p^-Re s`, which controls
    /// `|log L - log L_trunc|`. `None` inside the critical strip, where the
    /// truncation is formal only.
    pub tail: Option<f64>,
    pub primes_used: usize,
}

impl EulerProduct {
    /// Bound on the absolute error of `value`, if a tail bound exists.
    pub fn abs_error(&self) -> Option<f64> {
        self.tail.map(|t| self.value.norm() * t.exp_m1())
    }
}

/// `sum_{p > x} 2 p^-sigma <= 2 x^{1-sigma} / ((sigma - 1) ln x)` for
/// `sigma > 1`, by comparison with `int_x^inf 2 t^-sigma / ln t dt` and the
/// prime density `1 / ln t` (crude, but the quantity is only advisory).
pub fn prime_tail_bound(x: f64, sigma: f64) -> Option<f64> {
    if sigma <= 1.0 || x < 2.0 {
        return None;
    }
    Some(2.0 * x.powf(1.0 - sigma) / ((sigma - 1.0) * x.ln()))
}

pub fn eval_euler_product(sample: &SU2Sample, s: Complex64, pmax: usize) -> Result<EulerProduct> {
    if s.re <= 0.5 {
        return Err(Error::invalid(format!("Re s = {} must exceed 1/2", s.re)));
    }
    if pmax > sample.bound() {
        return Err(Error::invalid(format!(
            "pmax = {pmax} exceeds sample bound {}",
            sample.bound()
        )));
    }
    let mut log_sum = Complex64::new(0.0, 0.0);
    let mut used = 0;
    for (p, t) in sample.iter() {
        if p as usize > pmax {
            break;
        }
        let x = (-s * (p as f64).ln()).exp();
        let f = 1.0 - t * x + x * x;
        if f.norm() < 1e-300 {
            return Err(Error::SingularFactor { p });
        }
        log_sum -= f.ln();
        used += 1;
    }
    let mut value = log_sum.exp();
    if s.im == 0.0 {
        value.im = 0.0;
    }
    Ok(EulerProduct {
        value,
        tail: prime_tail_bound(pmax as f64, s.re),
        primes_used: used,
    })
}
