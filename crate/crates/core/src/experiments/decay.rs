use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hecke::FamilySnapshot;
use crate::randmodel::{derive_seed, EvalGrid, ModelSampler, SmoothedKernel};

use super::stats::linear_fit;
use super::ReportMeta;

/// Which random function a diagnostic runs on.
#[derive(Debug, Clone, Copy)]
pub enum Generator<'a> {
    Model { m: usize, seed: u64 },
    Family(&'a FamilySnapshot),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayTable {
    pub meta: ReportMeta,
    pub generator: String,
    pub n_ref: usize,
    pub n_list: Vec<usize>,
    /// Weighted mean of `sup_boundary |L^(N_ref) - L^(N)|`.
    pub mean_gap: Vec<f64>,
    /// Least-squares slope of `log mean_gap` against `log N` (positive gaps only).
    pub slope: f64,
}

/// Mean sup-norm distance between smoothed sums at each `N` and at `n_ref`.
pub fn smoothing_decay_test(
    generator: Generator<'_>,
    n_list: &[usize],
    grid: &EvalGrid,
    n_ref: usize,
) -> Result<DecayTable> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) || n_list[0] == 0 {
        return Err(Error::invalid("N list must be positive and strictly ascending"));
    }
    let nmax_list = *n_list.last().unwrap();
    if n_ref < 4 * nmax_list {
        return Err(Error::invalid(format!("N_ref = {n_ref} must be >= 4 * max(N) = {}", 4 * nmax_list)));
    }
    let k = grid.k();
    let gap = |a: &[Complex64], b: &[Complex64]| -> f64 {
        a[..k].iter().zip(&b[..k]).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    };
    let boundary: Vec<Complex64> = grid.boundary().to_vec();
    let (per_sample, weights, meta, name): (Vec<Vec<f64>>, Vec<f64>, ReportMeta, String) = match generator {
        Generator::Model { m, seed } => {
            if m == 0 {
                return Err(Error::invalid("need at least one sample"));
            }
            let bgrid = boundary_only(grid)?;
            let sampler = ModelSampler::new(&bgrid, n_ref)?;
            let kernels = n_list
                .iter()
                .map(|&n| SmoothedKernel::new(&boundary, n))
                .collect::<Result<Vec<_>>>()?;
            let rows = (0..m)
                .into_par_iter()
                .map(|i| {
                    let y = sampler.coefficients(derive_seed(seed, i as u64))?;
                    let r = sampler.kernel().apply(y.values())?;
                    kernels
                        .iter()
                        .map(|kn| Ok(gap(&r, &kn.apply(y.values())?)))
                        .collect::<Result<Vec<f64>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let meta = ReportMeta {
                seed: Some(seed),
                m: Some(m),
                n_cut: Some(n_ref),
                grid_hash: Some(format!("{:016x}", grid.hash())),
                ..ReportMeta::default()
            };
            (rows, vec![1.0 / m as f64; m], meta, "model".into())
        }
        Generator::Family(snap) => {
            if snap.nmax < 2 * n_ref {
                return Err(Error::IncompleteData(format!(
                    "family coefficients reach {}, need {}",
                    snap.nmax,
                    2 * n_ref
                )));
            }
            let shifted: Vec<Complex64> = boundary.iter().map(|s| s + 0.5).collect();
            let kref = SmoothedKernel::new(&shifted, n_ref)?;
            let kernels = n_list
                .iter()
                .map(|&n| SmoothedKernel::new(&shifted, n))
                .collect::<Result<Vec<_>>>()?;
            let rows = snap
                .forms
                .par_iter()
                .map(|f| {
                    let r = kref.apply(&f.coeffs)?;
                    kernels
                        .iter()
                        .map(|kn| Ok(gap(&r, &kn.apply(&f.coeffs)?)))
                        .collect::<Result<Vec<f64>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let mut meta = ReportMeta::for_family(snap);
            meta.n_cut = Some(n_ref);
            meta.grid_hash = Some(format!("{:016x}", grid.hash()));
            (rows, snap.weights(), meta, "family".into())
        }
    };
    let mean_gap: Vec<f64> = (0..n_list.len())
        .map(|j| per_sample.iter().zip(&weights).map(|(r, w)| w * r[j]).sum())
        .collect();
    let (lx, ly): (Vec<f64>, Vec<f64>) = n_list
        .iter()
        .zip(&mean_gap)
        .filter(|(_, &g)| g > 0.0)
        .map(|(&n, &g)| ((n as f64).ln(), g.ln()))
        .unzip();
    let slope = if lx.len() >= 2 { linear_fit(&lx, &ly).0 } else { f64::NAN };
    Ok(DecayTable {
        meta,
        generator: name,
        n_ref,
        n_list: n_list.to_vec(),
        mean_gap,
        slope,
    })
}

/// The same disc without interior points (sup-norms only need the boundary).
fn boundary_only(grid: &EvalGrid) -> Result<EvalGrid> {
    EvalGrid::disc_with_interior(grid.center(), grid.radius(), grid.k(), false)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthTable {
    pub meta: ReportMeta,
    pub generator: String,
    pub sigma: f64,
    pub t: Vec<f64>,
    /// Weighted mean of `|L(sigma + i t)|`.
    pub mean_abs: Vec<f64>,
    /// Slope of `log mean_abs` against `log(1 + t)`.
    pub exponent: f64,
}

/// First absolute moment along the vertical line `Re s = sigma`.
pub fn moment_growth_test(generator: Generator<'_>, sigma: f64, t_list: &[f64], n_cut: usize) -> Result<GrowthTable> {
    if sigma < 0.55 {
        return Err(Error::invalid(format!("sigma = {sigma} below 0.55")));
    }
    if t_list.is_empty() || t_list.iter().any(|t| !(*t >= 0.0)) {
        return Err(Error::invalid("t values must be non-negative"));
    }
    let pts: Vec<Complex64> = t_list.iter().map(|&t| Complex64::new(sigma, t)).collect();
    let (rows, weights, meta, name): (Vec<Vec<f64>>, Vec<f64>, ReportMeta, String) = match generator {
        Generator::Model { m, seed } => {
            if m == 0 {
                return Err(Error::invalid("need at least one sample"));
            }
            let kernel = SmoothedKernel::new(&pts, n_cut)?;
            let table = crate::numkernel::primes_up_to(kernel.span().max(2))?;
            let rows = (0..m)
                .into_par_iter()
                .map(|i| {
                    let smp = crate::randmodel::SU2Sample::draw(derive_seed(seed, i as u64), &table, kernel.span());
                    let y = crate::randmodel::build_coefficients(&smp, kernel.span(), &table)?;
                    Ok(kernel.apply(y.values())?.iter().map(|z| z.norm()).collect())
                })
                .collect::<Result<Vec<Vec<f64>>>>()?;
            let meta = ReportMeta {
                seed: Some(seed),
                m: Some(m),
                n_cut: Some(n_cut),
                ..ReportMeta::default()
            };
            (rows, vec![1.0 / m as f64; m], meta, "model".into())
        }
        Generator::Family(snap) => {
            if snap.nmax < 2 * n_cut {
                return Err(Error::IncompleteData(format!(
                    "family coefficients reach {}, need {}",
                    snap.nmax,
                    2 * n_cut
                )));
            }
            let shifted: Vec<Complex64> = pts.iter().map(|s| s + 0.5).collect();
            let kernel = SmoothedKernel::new(&shifted, n_cut)?;
            let rows = snap
                .forms
                .par_iter()
                .map(|f| Ok(kernel.apply(&f.coeffs)?.iter().map(|z| z.norm()).collect()))
                .collect::<Result<Vec<Vec<f64>>>>()?;
            let mut meta = ReportMeta::for_family(snap);
            meta.n_cut = Some(n_cut);
            (rows, snap.weights(), meta, "family".into())
        }
    };
    let mean_abs: Vec<f64> = (0..t_list.len())
        .map(|j| rows.iter().zip(&weights).map(|(r, w)| w * r[j]).sum())
        .collect();
    let lx: Vec<f64> = t_list.iter().map(|t| (1.0 + t).ln()).collect();
    let ly: Vec<f64> = mean_abs.iter().map(|m| m.ln()).collect();
    let exponent = if t_list.len() >= 2 { linear_fit(&lx, &ly).0 } else { f64::NAN };
    Ok(GrowthTable {
        meta,
        generator: name,
        sigma,
        t: t_list.to_vec(),
        mean_abs,
        exponent,
    })
}
