use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::randmodel::{derive_seed, Ensemble, ModelSampler};

use super::target::TargetFunction;
use super::ReportMeta;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniversalityReport {
    pub meta: ReportMeta,
    pub target: String,
    pub eps: f64,
    pub count: usize,
    pub g: usize,
    pub harmonic_fraction: f64,
    pub natural_fraction: f64,
    /// Boundary sup-distance of each form to the target.
    pub distances: Vec<f64>,
}

fn boundary_distance(values: &[Complex64], target: &[Complex64], k: usize) -> f64 {
    values[..k]
        .iter()
        .zip(&target[..k])
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

/// Fraction of the family within `eps` of the target in boundary sup-norm.
/// `family` must be evaluated on the target's grid (see
/// [`crate::lfun::family_ensemble`]).
pub fn universality_count(family: &Ensemble, target: &TargetFunction, eps: f64) -> Result<UniversalityReport> {
    target.require_admissible()?;
    family.validate()?;
    if family.meta.grid != target.grid {
        return Err(Error::invalid("family is not evaluated on the target grid"));
    }
    if !(eps >= 0.0) {
        return Err(Error::invalid(format!("eps = {eps} must be >= 0")));
    }
    let tv = target.values();
    let k = target.grid.k();
    let w = family.normalized_weights();
    let distances: Vec<f64> = family.samples.iter().map(|v| boundary_distance(v, &tv, k)).collect();
    let hit: Vec<bool> = distances.iter().map(|&d| d < eps).collect();
    let count = hit.iter().filter(|&&h| h).count();
    let g = family.samples.len();
    Ok(UniversalityReport {
        meta: ReportMeta {
            q: family.meta.q,
            n_cut: Some(family.meta.n_cut),
            grid_hash: Some(format!("{:016x}", target.grid.hash())),
            ..ReportMeta::default()
        },
        target: target.spec.clone(),
        eps,
        count,
        g,
        harmonic_fraction: w.iter().zip(&hit).filter(|(_, &h)| h).map(|(x, _)| x).fold(0.0, |a, x| a + x),
        natural_fraction: count as f64 / g as f64,
        distances,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportProbability {
    pub meta: ReportMeta,
    pub target: String,
    /// Whether the target satisfies the support condition; inadmissible
    /// targets are still measured (their probability should vanish).
    pub admissible: bool,
    pub eps: Vec<f64>,
    pub estimate: Vec<f64>,
    pub stderr: Vec<f64>,
}

/// Monte Carlo `P(|L^(N) - phi|_grid < eps)` for each `eps`, all from the
/// same `m` draws (so estimates are monotone in `eps`).
pub fn model_support_probability(
    target: &TargetFunction,
    eps: &[f64],
    m: usize,
    seed: u64,
    n_cut: usize,
) -> Result<SupportProbability> {
    if m == 0 {
        return Err(Error::invalid("need at least one sample"));
    }
    let sampler = ModelSampler::new(&target.grid, n_cut)?;
    let tv = target.values();
    let k = target.grid.k();
    let dist: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|i| Ok(boundary_distance(&sampler.draw_values(derive_seed(seed, i as u64))?, &tv, k)))
        .collect::<Result<_>>()?;
    let (estimate, stderr) = eps
        .iter()
        .map(|&e| {
            let p = dist.iter().filter(|&&d| d < e).count() as f64 / m as f64;
            (p, (p * (1.0 - p) / m as f64).sqrt())
        })
        .unzip();
    Ok(SupportProbability {
        meta: ReportMeta {
            seed: Some(seed),
            n_cut: Some(n_cut),
            m: Some(m),
            grid_hash: Some(format!("{:016x}", target.grid.hash())),
            ..ReportMeta::default()
        },
        target: target.spec.clone(),
        admissible: target.is_admissible(),
        eps: eps.to_vec(),
        estimate,
        stderr,
    })
}
