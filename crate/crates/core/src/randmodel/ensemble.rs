use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{primes_up_to, PrimeTable};

use super::{build_coefficients, derive_seed, EvalGrid, MultCoefficients, SU2Sample, SmoothedKernel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleMeta {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub form_id: Option<String>,
    #[serde(rename = "N")]
    pub n_cut: usize,
    pub method: String,
}

/// Values of one holomorphic function at every point of a grid, in
/// [`EvalGrid::points`] order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoloSample {
    pub grid: EvalGrid,
    pub values: Vec<Complex64>,
    pub meta: SampleMeta,
}

impl HoloSample {
    pub fn sup_norm(&self) -> f64 {
        self.grid.sup_norm(&self.values)
    }

    /// Sup-norm of `self - other` over the boundary.
    pub fn distance(&self, other: &HoloSample) -> f64 {
        let k = self.grid.k();
        self.values[..k]
            .iter()
            .zip(&other.values[..k])
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Reusable generator for draws of the smoothed random Euler product on one grid.
pub struct ModelSampler {
    grid: EvalGrid,
    table: PrimeTable,
    kernel: SmoothedKernel,
}

impl ModelSampler {
    pub fn new(grid: &EvalGrid, n_cut: usize) -> Result<Self> {
        let kernel = SmoothedKernel::new(&grid.points(), n_cut)?;
        let table = primes_up_to(kernel.span().max(2))?;
        Ok(ModelSampler {
            grid: grid.clone(),
            table,
            kernel,
        })
    }

    pub fn grid(&self) -> &EvalGrid {
        &self.grid
    }

    pub fn n_cut(&self) -> usize {
        self.kernel.n_cut()
    }

    pub fn kernel(&self) -> &SmoothedKernel {
        &self.kernel
    }

    /// Coefficients `Y_n`, `n < 2N`, of draw `seed`.
    pub fn coefficients(&self, seed: u64) -> Result<MultCoefficients> {
        let span = self.kernel.span();
        let smp = SU2Sample::draw(seed, &self.table, span);
        build_coefficients(&smp, span, &self.table)
    }

    pub fn draw_values(&self, seed: u64) -> Result<Vec<Complex64>> {
        self.kernel.apply(self.coefficients(seed)?.values())
    }

    pub fn draw(&self, seed: u64) -> Result<HoloSample> {
        Ok(HoloSample {
            grid: self.grid.clone(),
            values: self.draw_values(seed)?,
            meta: SampleMeta {
                seed: Some(seed),
                form_id: None,
                n_cut: self.n_cut(),
                method: "model-smoothed".into(),
            },
        })
    }
}

pub fn sample_on_grid(seed: u64, grid: &EvalGrid, n_cut: usize) -> Result<HoloSample> {
    ModelSampler::new(grid, n_cut)?.draw(seed)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleMeta {
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(rename = "N")]
    pub n_cut: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub grid: EvalGrid,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub form_ids: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub weights: Option<Vec<f64>>,
}

/// A list of functions on a common grid: model draws or a family of
/// L-functions (with weights).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    pub meta: EnsembleMeta,
    pub samples: Vec<Vec<Complex64>>,
}

impl Ensemble {
    pub fn validate(&self) -> Result<()> {
        let n = self.meta.grid.len();
        if self.samples.len() != self.meta.m {
            return Err(Error::validation(
                "samples",
                format!(
                    "meta.M = {} but {} samples present",
                    self.meta.m,
                    self.samples.len()
                ),
            ));
        }
        if let Some(i) = self.samples.iter().position(|s| s.len() != n) {
            return Err(Error::validation(
                format!("samples[{i}]"),
                format!("expected {n} grid values"),
            ));
        }
        if let Some(w) = &self.meta.weights {
            if w.len() != self.meta.m {
                return Err(Error::validation("meta.weights", "length differs from M"));
            }
        }
        Ok(())
    }

    /// Weights normalized to sum 1 (uniform when absent).
    pub fn normalized_weights(&self) -> Vec<f64> {
        match &self.meta.weights {
            Some(w) => {
                let t: f64 = w.iter().sum();
                w.iter().map(|x| x / t).collect()
            }
            None => vec![1.0 / self.samples.len() as f64; self.samples.len()],
        }
    }
}

/// `m` independent draws; sample `i` uses `derive_seed(seed, i)`, so the
/// output does not depend on thread scheduling.
pub fn model_ensemble(seed: u64, grid: &EvalGrid, n_cut: usize, m: usize) -> Result<Ensemble> {
    let sampler = ModelSampler::new(grid, n_cut)?;
    let samples = (0..m)
        .into_par_iter()
        .map(|i| sampler.draw_values(derive_seed(seed, i as u64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Ensemble {
        meta: EnsembleMeta {
            method: "model-smoothed".into(),
            seed: Some(seed),
            n_cut,
            m,
            grid: grid.clone(),
            q: None,
            form_ids: None,
            weights: None,
        },
        samples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub u: usize,
    pub mean: f64,
    pub stderr: f64,
}

/// Monte Carlo `E |sum_{n <= u} Y_n n^-sigma|^2` for each `u`, all cut-offs
/// sharing the same draws.
pub fn second_moment_stat(
    sigma: f64,
    u_list: &[usize],
    m: usize,
    seed: u64,
) -> Result<Vec<MomentEstimate>> {
    if !(sigma > 0.5 && sigma < 1.0) {
        return Err(Error::invalid(format!("sigma = {sigma} outside (1/2, 1)")));
    }
    if m < 2 {
        return Err(Error::invalid("need at least two samples"));
    }
    if u_list.iter().any(|&u| u == 0) {
        return Err(Error::invalid("cut-offs must be positive"));
    }
    let umax = u_list.iter().copied().max().unwrap_or(1);
    let table = primes_up_to(umax.max(2))?;
    let weights: Vec<f64> = (0..=umax).map(|n| (n as f64).powf(-sigma)).collect();
    let mut order: Vec<usize> = (0..u_list.len()).collect();
    order.sort_by_key(|&i| u_list[i]);

    let per_sample: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|i| {
            let smp = SU2Sample::draw(derive_seed(seed, i as u64), &table, umax);
            let y = build_coefficients(&smp, umax, &table)?;
            let mut out = vec![0.0; u_list.len()];
            let mut acc = 0.0;
            let mut n = 1;
            for &j in &order {
                while n <= u_list[j] {
                    acc += y.get(n) * weights[n];
                    n += 1;
                }
                out[j] = acc * acc;
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    Ok(u_list
        .iter()
        .enumerate()
        .map(|(j, &u)| {
            let xs: Vec<f64> = per_sample.iter().map(|r| r[j]).collect();
            let mean = xs.iter().sum::<f64>() / m as f64;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
            MomentEstimate {
                u,
                mean,
                stderr: (var / m as f64).sqrt(),
            }
        })
        .collect())
}
