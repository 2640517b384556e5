use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numkernel::{primes_up_to, PrimeTable};

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the `index`-th member of an ensemble with base seed `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

/// One Sato–Tate distributed trace for prime `p`, drawn from the ChaCha
/// stream keyed by `(seed, p)`. Rejection sampling: `theta` uniform on
/// `[0, pi]`, accepted with probability `sin^2 theta`, trace `2 cos theta`.
pub fn sato_tate_trace(seed: u64, p: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(p);
    loop {
        let theta = rng.gen::<f64>() * PI;
        let u: f64 = rng.gen();
        let s = theta.sin();
        if u < s * s {
            return 2.0 * theta.cos();
        }
    }
}

/// Traces `t_p in [-2, 2]` for all primes `p <= bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct SU2Sample {
    seed: Option<u64>,
    bound: usize,
    primes: Vec<u64>,
    traces: Vec<f64>,
}

pub fn sample_traces(seed: u64, bound: usize) -> Result<SU2Sample> {
    let table = primes_up_to(bound)?;
    Ok(SU2Sample::draw(seed, &table, bound))
}

impl SU2Sample {
    /// Random traces for primes up to `bound` (clamped to the table).
    pub fn draw(seed: u64, table: &PrimeTable, bound: usize) -> Self {
        let primes = table.primes_to(bound as u64).to_vec();
        let traces = primes.iter().map(|&p| sato_tate_trace(seed, p)).collect();
        SU2Sample {
            seed: Some(seed),
            bound: bound.min(table.bound()),
            primes,
            traces,
        }
    }

    /// Every trace equal to `t`; `t = 2` is the all-identity assignment.
    pub fn constant(table: &PrimeTable, bound: usize, t: f64) -> Result<Self> {
        if !(-2.0..=2.0).contains(&t) {
            return Err(Error::invalid(format!("trace {t} outside [-2, 2]")));
        }
        let primes = table.primes_to(bound as u64).to_vec();
        let traces = vec![t; primes.len()];
        Ok(SU2Sample {
            seed: None,
            bound: bound.min(table.bound()),
            primes,
            traces,
        })
    }

    /// Explicit traces for the listed primes (ascending, complete up to `bound`).
    pub fn from_traces(bound: usize, primes: Vec<u64>, traces: Vec<f64>) -> Result<Self> {
        if primes.len() != traces.len() {
            return Err(Error::invalid("primes and traces differ in length"));
        }
        if let Some(t) = traces.iter().find(|t| !(-2.0..=2.0).contains(*t)) {
            return Err(Error::invalid(format!("trace {t} outside [-2, 2]")));
        }
        if primes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("primes must be strictly ascending"));
        }
        Ok(SU2Sample {
            seed: None,
            bound,
            primes,
            traces,
        })
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn traces(&self) -> &[f64] {
        &self.traces
    }

    pub fn trace(&self, p: u64) -> Option<f64> {
        self.primes.binary_search(&p).ok().map(|i| self.traces[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.primes.iter().copied().zip(self.traces.iter().copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn traces_are_order_independent() {
        let table = primes_up_to(1000).unwrap();
        let a = SU2Sample::draw(42, &table, 1000);
        let b = SU2Sample::draw(42, &table, 500);
        for (p, t) in b.iter() {
            assert_eq!(a.trace(p), Some(t));
        }
        // reversed enumeration reproduces the same draws
        for &p in table.primes().iter().rev().take(20) {
            assert_eq!(a.trace(p), Some(sato_tate_trace(42, p)));
        }
        assert!(a.traces().iter().all(|t| (-2.0..=2.0).contains(t)));
        assert_ne!(a, SU2Sample::draw(43, &table, 1000));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(SU2Sample::from_traces(3, vec![2, 3], vec![0.0, 2.5]).is_err());
        let table = primes_up_to(10).unwrap();
        assert!(SU2Sample::constant(&table, 10, -3.0).is_err());
    }
}
