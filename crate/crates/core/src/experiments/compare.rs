use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::randmodel::Ensemble;

use super::stats::WeightedEcdf;
use super::ReportMeta;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointDistance {
    pub index: usize,
    pub s: [f64; 2],
    pub ks_re: f64,
    pub ks_im: f64,
    pub ks_log_abs: f64,
    /// Same three distances with uniform weights on the first ensemble.
    pub ks_re_natural: f64,
    pub ks_im_natural: f64,
    pub ks_log_abs_natural: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub meta: ReportMeta,
    pub method_a: String,
    pub method_b: String,
    pub size_a: usize,
    pub size_b: usize,
    pub seed_a: Option<u64>,
    pub seed_b: Option<u64>,
    pub q: Option<u64>,
    pub n_a: usize,
    pub n_b: usize,
    pub points: Vec<PointDistance>,
    /// Mean over points and the three functionals.
    pub aggregate: f64,
    pub aggregate_natural: f64,
}

fn marginal(e: &Ensemble, i: usize, f: fn(Complex64) -> f64) -> Vec<f64> {
    e.samples.iter().map(|s| f(s[i])).collect()
}

/// Per-point KS distances between the marginals (real part, imaginary
/// part, log-modulus) of two ensembles on the same grid. The first ensemble
/// is weighted by its own weights (harmonic for families); the second is
/// taken with its weights too, or uniformly if it has none.
pub fn bagchi_compare(a: &Ensemble, b: &Ensemble) -> Result<ComparisonReport> {
    a.validate()?;
    b.validate()?;
    if a.meta.grid != b.meta.grid {
        return Err(Error::invalid("ensembles live on different grids"));
    }
    if a.samples.is_empty() || b.samples.is_empty() {
        return Err(Error::invalid("empty ensemble"));
    }
    let wa = a.normalized_weights();
    let wb = b.normalized_weights();
    let fns: [fn(Complex64) -> f64; 3] = [|z| z.re, |z| z.im, |z| z.norm().ln()];
    let points: Vec<PointDistance> = a
        .meta
        .grid
        .points()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let mut d = [0.0; 6];
            for (k, f) in fns.iter().enumerate() {
                let xa = marginal(a, i, *f);
                let eb = WeightedEcdf::new(&marginal(b, i, *f), Some(&wb));
                d[k] = WeightedEcdf::new(&xa, Some(&wa)).ks(&eb);
                d[k + 3] = WeightedEcdf::new(&xa, None).ks(&eb);
            }
            PointDistance {
                index: i,
                s: [s.re, s.im],
                ks_re: d[0],
                ks_im: d[1],
                ks_log_abs: d[2],
                ks_re_natural: d[3],
                ks_im_natural: d[4],
                ks_log_abs_natural: d[5],
            }
        })
        .collect();
    let n = points.len() as f64;
    let aggregate = points.iter().map(|p| p.ks_re + p.ks_im + p.ks_log_abs).sum::<f64>() / (3.0 * n);
    let aggregate_natural = points
        .iter()
        .map(|p| p.ks_re_natural + p.ks_im_natural + p.ks_log_abs_natural)
        .sum::<f64>()
        / (3.0 * n);
    Ok(ComparisonReport {
        meta: ReportMeta {
            grid_hash: Some(format!("{:016x}", a.meta.grid.hash())),
            ..ReportMeta::default()
        },
        method_a: a.meta.method.clone(),
        method_b: b.meta.method.clone(),
        size_a: a.samples.len(),
        size_b: b.samples.len(),
        seed_a: a.meta.seed,
        seed_b: b.meta.seed,
        q: a.meta.q.or(b.meta.q),
        n_a: a.meta.n_cut,
        n_b: b.meta.n_cut,
        points,
        aggregate,
        aggregate_natural,
    })
}
