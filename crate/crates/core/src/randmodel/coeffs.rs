use crate::error::{Error, Result};
use crate::numkernel::{chebyshev_u_all, PrimeTable};

use super::SU2Sample;

/// `Y_n` for `1 <= n <= nmax`; index 0 holds 0 so that `values()[n] = Y_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultCoefficients {
    values: Vec<f64>,
    seed: Option<u64>,
}

impl MultCoefficients {
    /// Wrap an arbitrary coefficient vector (`v[0]` ignored and zeroed).
    pub fn from_values(mut v: Vec<f64>) -> Self {
        if v.is_empty() {
            v.push(0.0);
        }
        v[0] = 0.0;
        MultCoefficients {
            values: v,
            seed: None,
        }
    }

    pub fn nmax(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, n: usize) -> f64 {
        self.values[n]
    }

    /// Seed of the generating [`SU2Sample`], if it was random.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }
}

/// `Y_n = U_nu(t_p) * Y_{n / p^nu}` with `p` the smallest prime factor,
/// which equals the product over the factorization taken from the smallest
/// prime upward.
pub fn build_coefficients(
    sample: &SU2Sample,
    nmax: usize,
    table: &PrimeTable,
) -> Result<MultCoefficients> {
    if nmax > sample.bound() || nmax > table.bound() {
        return Err(Error::invalid(format!(
            "nmax = {nmax} exceeds sample bound {} or prime table bound {}",
            sample.bound(),
            table.bound()
        )));
    }
    let mut values = vec![0.0; nmax + 1];
    if nmax == 0 {
        return Ok(MultCoefficients {
            values,
            seed: sample.seed(),
        });
    }
    values[1] = 1.0;
    // U_nu(t_p) for each prime, indexed by prime; powers of p up to nmax.
    let mut upow: Vec<Vec<f64>> = vec![Vec::new(); nmax + 1];
    for (p, t) in sample.iter() {
        let p = p as usize;
        if p > nmax {
            break;
        }
        let mut nu = 0u32;
        let mut pk = 1usize;
        while pk <= nmax / p {
            pk *= p;
            nu += 1;
        }
        upow[p] = chebyshev_u_all(nu, t);
    }
    for n in 2..=nmax {
        let p = table.spf(n) as usize;
        let mut m = n / p;
        let mut nu = 1;
        while m % p == 0 {
            m /= p;
            nu += 1;
        }
        let u = upow[p]
            .get(nu)
            .copied()
            .ok_or_else(|| Error::invalid(format!("sample has no trace for prime {p}")))?;
        values[n] = u * values[m];
    }
    Ok(MultCoefficients {
        values,
        seed: sample.seed(),
    })
}
