use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hecke::FamilySnapshot;
use crate::numkernel::{bessel_j1, kloosterman_multiplicative, primes_up_to};

use super::ReportMeta;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeterssonRow {
    pub m: u64,
    pub n: u64,
    /// `kappa * sum_f weight_f lambda_f(m) lambda_f(n)`.
    pub spectral: f64,
    /// `delta(m, n) - 2 pi sum_{q | c <= C} S(m, n; c) / c J_1(4 pi sqrt(mn) / c)`.
    pub geometric: f64,
    pub residual: f64,
    /// Residual if the Kloosterman term entered with the opposite sign.
    pub residual_opposite_sign: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeterssonReport {
    pub meta: ReportMeta,
    pub c_max: u64,
    /// Normalization fitted at `(m, n) = (1, 1)`.
    pub kappa: f64,
    pub rows: Vec<PeterssonRow>,
}

/// Kloosterman/Bessel sums `sum_{c = q, 2q, ..., <= c_max} S(m,n;c)/c J_1(4 pi sqrt(mn)/c)`
/// for each pair.
fn kloosterman_terms(q: u64, pairs: &[(u64, u64)], c_max: u64) -> Result<Vec<f64>> {
    let table = primes_up_to(c_max as usize)?;
    let cs: Vec<u64> = (1..=c_max / q).map(|k| k * q).collect();
    let partial: Vec<Vec<f64>> = cs
        .par_iter()
        .map(|&c| {
            let fac = table.factor(c)?;
            Ok(pairs
                .iter()
                .map(|&(m, n)| {
                    let s = kloosterman_multiplicative(m as i64, n as i64, c, &fac);
                    s / c as f64 * bessel_j1(4.0 * PI * ((m * n) as f64).sqrt() / c as f64)
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok((0..pairs.len())
        .map(|j| partial.iter().map(|r| r[j]).sum())
        .collect())
}

/// Petersson formula as a check of the harmonic weights. The constant
/// relating the normalized weights to the Petersson weights is fitted at
/// `(1, 1)`; every other pair is then a genuine test. The Kloosterman term
/// enters with the weight-2 sign `i^{-2} = -1`.
pub fn petersson_check(snapshot: &FamilySnapshot, pairs: &[(u64, u64)], c_factor: u64) -> Result<PeterssonReport> {
    let q = snapshot.q;
    if c_factor == 0 {
        return Err(Error::invalid("Kloosterman truncation factor must be positive"));
    }
    if let Some(&(m, n)) = pairs.iter().find(|&&(m, n)| m == 0 || n == 0 || m.max(n) as usize > snapshot.nmax) {
        return Err(Error::invalid(format!("pair ({m}, {n}) outside 1..=nmax")));
    }
    let c_max = c_factor * q;
    let mut all = vec![(1u64, 1u64)];
    all.extend_from_slice(pairs);
    let k = kloosterman_terms(q, &all, c_max)?;
    let delta = |m: u64, n: u64| if m == n { 1.0 } else { 0.0 };
    let avg = |m: u64, n: u64| snapshot.expectation(|f| f.lambda(m as usize) * f.lambda(n as usize));
    let kappa = (1.0 - 2.0 * PI * k[0]) / avg(1, 1);
    let rows = pairs
        .iter()
        .zip(&k[1..])
        .map(|(&(m, n), &kl)| {
            let spectral = kappa * avg(m, n);
            let geometric = delta(m, n) - 2.0 * PI * kl;
            let kappa_alt = (1.0 + 2.0 * PI * k[0]) / avg(1, 1);
            let alt = kappa_alt * avg(m, n) - (delta(m, n) + 2.0 * PI * kl);
            PeterssonRow {
                m,
                n,
                spectral,
                geometric,
                residual: (spectral - geometric).abs(),
                residual_opposite_sign: alt.abs(),
            }
        })
        .collect();
    Ok(PeterssonReport {
        meta: ReportMeta::for_family(snapshot),
        c_max,
        kappa,
        rows,
    })
}
