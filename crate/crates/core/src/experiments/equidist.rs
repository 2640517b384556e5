use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hecke::FamilySnapshot;

use super::stats::{sato_tate_cdf, sato_tate_moment, WeightedEcdf};
use super::ReportMeta;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SatoTateReport {
    pub meta: ReportMeta,
    pub p: u64,
    /// KS distance of the harmonically weighted `lambda_f(p)` to Sato–Tate.
    pub ks_harmonic: f64,
    /// Same with uniform weights.
    pub ks_natural: f64,
}

fn check_prime(snapshot: &FamilySnapshot, p: u64) -> Result<()> {
    if p == snapshot.q {
        return Err(Error::invalid(format!("p = {p} equals the level")));
    }
    if !crate::numkernel::is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if p as usize > snapshot.nmax {
        return Err(Error::IncompleteData(format!("a_{p} beyond the coefficient horizon {}", snapshot.nmax)));
    }
    Ok(())
}

/// Distance between the family distribution of `lambda_f(p) = a_p / sqrt(p)`
/// and the Sato–Tate law.
pub fn sato_tate_test(snapshot: &FamilySnapshot, p: u64) -> Result<SatoTateReport> {
    check_prime(snapshot, p)?;
    let xs: Vec<f64> = snapshot.forms.iter().map(|f| f.lambda(p as usize)).collect();
    let w = snapshot.weights();
    Ok(SatoTateReport {
        meta: ReportMeta::for_family(snapshot),
        p,
        ks_harmonic: WeightedEcdf::new(&xs, Some(&w)).ks_vs(sato_tate_cdf),
        ks_natural: WeightedEcdf::new(&xs, None).ks_vs(sato_tate_cdf),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointMomentReport {
    pub meta: ReportMeta,
    pub primes: Vec<u64>,
    pub exponents: Vec<u32>,
    /// Harmonic average of `prod lambda_f(p_i)^{k_i}`.
    pub family: f64,
    pub family_natural: f64,
    /// `prod E(Y_p^{k_i})` with even moments Catalan numbers.
    pub model: f64,
    pub gap: f64,
}

pub fn joint_moment_test(snapshot: &FamilySnapshot, primes: &[u64], exponents: &[u32]) -> Result<JointMomentReport> {
    if primes.len() != exponents.len() || primes.is_empty() {
        return Err(Error::invalid("need one exponent per prime"));
    }
    let mut sorted = primes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != primes.len() {
        return Err(Error::invalid("primes must be distinct"));
    }
    for &p in primes {
        check_prime(snapshot, p)?;
    }
    let value = |f: &crate::hecke::Eigenform| -> f64 {
        primes
            .iter()
            .zip(exponents)
            .map(|(&p, &k)| f.lambda(p as usize).powi(k as i32))
            .product()
    };
    let family = snapshot.expectation(value);
    let family_natural = snapshot.forms.iter().map(value).sum::<f64>() / snapshot.len() as f64;
    let model: f64 = exponents.iter().map(|&k| sato_tate_moment(k)).product();
    Ok(JointMomentReport {
        meta: ReportMeta::for_family(snapshot),
        primes: primes.to_vec(),
        exponents: exponents.to_vec(),
        family,
        family_natural,
        model,
        gap: (family - model).abs(),
    })
}
