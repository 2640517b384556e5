//! L-functions of the family: smoothed partial sums on grids, and the
//! reflection identity of the completed L-function as a consistency check.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hecke::{Eigenform, FamilySnapshot};
use crate::numkernel::ln_gamma;
use crate::randmodel::{series::smoothed_sum, Ensemble, EnsembleMeta, EvalGrid, SmoothedKernel};

/// Global sign `s` in `epsilon = s * w_q`, where `w_q` is the Fricke
/// eigenvalue computed on modular symbols. Fixed by the reflection check at
/// level 11 (see the tests) and frozen here.
pub const EPSILON_SIGN: i8 = -1;

/// Root number of `L(f, s)`.
pub fn root_number(form: &Eigenform) -> i8 {
    EPSILON_SIGN * form.fricke_sign
}

/// Default smoothing parameter inside the strip: `max(2^14, 50 q)`.
pub fn default_n(q: u64) -> usize {
    (1usize << 14).max(50 * q as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EvalMethod {
    Smoothed {
        #[serde(rename = "N")]
        n_cut: usize,
    },
    Validated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LEvaluation {
    pub form_id: usize,
    pub grid: EvalGrid,
    pub values: Vec<Complex64>,
    pub method: EvalMethod,
    /// `|L^(N) - L^(N/2)|` per point: a heuristic, not a bound.
    pub error_estimate: Vec<f64>,
}

fn require_coeffs(form: &Eigenform, n_cut: usize) -> Result<()> {
    if n_cut == 0 {
        return Err(Error::invalid("N must be positive"));
    }
    if form.nmax() < 2 * n_cut {
        return Err(Error::IncompleteData(format!(
            "form {} of level {} has coefficients to {}, need {}",
            form.id,
            form.q,
            form.nmax(),
            2 * n_cut
        )));
    }
    Ok(())
}

/// `sum_{n <= 2N} lambda_f(n) phi(n/N) n^-s` (analytic normalization).
pub fn eval_l_smoothed(form: &Eigenform, s: Complex64, n_cut: usize) -> Result<Complex64> {
    require_coeffs(form, n_cut)?;
    if s.re <= 0.5 {
        return Err(Error::invalid(format!("Re s = {} must exceed 1/2", s.re)));
    }
    // lambda_f(n) n^-s = a_n n^-(s + 1/2)
    smoothed_sum(&form.coeffs, s + 0.5, n_cut)
}

/// `sum_{n <= 2N} a_n phi(n/N) n^-s` (arithmetic normalization, any `s`).
pub fn eval_l_arith_smoothed(form: &Eigenform, s: Complex64, n_cut: usize) -> Result<Complex64> {
    require_coeffs(form, n_cut)?;
    smoothed_sum(&form.coeffs, s, n_cut)
}

/// Smoothed values of every form on `grid` (analytic normalization).
pub fn family_on_grid(snapshot: &FamilySnapshot, grid: &EvalGrid, n_cut: usize) -> Result<Vec<LEvaluation>> {
    for f in &snapshot.forms {
        require_coeffs(f, n_cut)?;
    }
    let shifted: Vec<Complex64> = grid.points().iter().map(|s| s + 0.5).collect();
    let kernel = SmoothedKernel::new(&shifted, n_cut)?;
    let coarse = if n_cut >= 2 {
        Some(SmoothedKernel::new(&shifted, n_cut / 2)?)
    } else {
        None
    };
    snapshot
        .forms
        .par_iter()
        .map(|f| {
            let values = kernel.apply(&f.coeffs)?;
            let error_estimate = match &coarse {
                Some(k) => k
                    .apply(&f.coeffs)?
                    .iter()
                    .zip(&values)
                    .map(|(a, b)| (a - b).norm())
                    .collect(),
                None => vec![f64::NAN; values.len()],
            };
            Ok(LEvaluation {
                form_id: f.id,
                grid: grid.clone(),
                values,
                method: EvalMethod::Smoothed { n_cut },
                error_estimate,
            })
        })
        .collect()
}

/// Family evaluations packaged in the common ensemble layout, with the
/// harmonic weights attached.
pub fn family_ensemble(snapshot: &FamilySnapshot, grid: &EvalGrid, n_cut: usize) -> Result<Ensemble> {
    let evals = family_on_grid(snapshot, grid, n_cut)?;
    Ok(Ensemble {
        meta: EnsembleMeta {
            method: "family-smoothed".into(),
            seed: None,
            n_cut,
            m: evals.len(),
            grid: grid.clone(),
            q: Some(snapshot.q),
            form_ids: Some(evals.iter().map(|e| e.form_id.to_string()).collect()),
            weights: Some(snapshot.weights()),
        },
        samples: evals.into_iter().map(|e| e.values).collect(),
    })
}

/// `X(s) = eps q^{1-s} (2 pi)^{2s-2} Gamma(2-s) / Gamma(s)`, so that
/// `L(s) = X(s) L(2-s)` in the arithmetic normalization.
pub fn reflection_factor(q: u64, eps: i8, s: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    let log = (one - s) * (q as f64).ln() + (two * s - two) * (2.0 * PI).ln() + ln_gamma(two - s)
        - ln_gamma(s);
    eps as f64 * log.exp()
}

/// `|L(s) - X(s) L(2-s)|` with both sides from smoothed sums and the
/// supplied root number.
pub fn reflection_residual(form: &Eigenform, s: Complex64, n_cut: usize, eps: i8) -> Result<f64> {
    let lhs = eval_l_arith_smoothed(form, s, n_cut)?;
    let rhs = reflection_factor(form.q, eps, s) * eval_l_arith_smoothed(form, 2.0 - s, n_cut)?;
    Ok((lhs - rhs).norm())
}

/// Reflection residual at the frozen sign convention; `1.1 <= Re s <= 1.4`.
pub fn reflection_check(form: &Eigenform, s: Complex64, n_cut: usize) -> Result<f64> {
    if !(1.1..=1.4).contains(&s.re) {
        return Err(Error::invalid(format!(
            "reflection check needs 1.1 <= Re s <= 1.4, got {}",
            s.re
        )));
    }
    reflection_residual(form, s, n_cut, root_number(form))
}
