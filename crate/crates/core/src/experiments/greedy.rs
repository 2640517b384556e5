use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numkernel::primes_up_to;

use super::target::TargetFunction;
use super::ReportMeta;

const THETA_GRID: usize = 64;
const REFINEMENTS: usize = 2;
const TAIL_SIEVE: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportApproxTrace {
    pub meta: ReportMeta,
    pub target: String,
    pub n0: u64,
    pub pmax: u64,
    /// All primes up to `pmax`, with their chosen angles (`0` for `p <= n0`).
    pub primes: Vec<u64>,
    pub thetas: Vec<f64>,
    /// Boundary sup-norm of the log-residual before any free prime.
    pub initial_residual: f64,
    /// Residual after each prime in `(n0, pmax]`.
    pub residuals: Vec<f64>,
    /// Bound on the contribution of primes beyond `pmax`.
    pub tail_bound: f64,
}

impl SupportApproxTrace {
    pub fn final_residual(&self) -> f64 {
        self.residuals.last().copied().unwrap_or(self.initial_residual)
    }

    /// `exp(sum_p 2 cos(theta_p) p^-s)` over the chosen angles.
    pub fn approximant(&self, s: Complex64) -> Complex64 {
        self.primes
            .iter()
            .zip(&self.thetas)
            .map(|(&p, &th)| 2.0 * th.cos() * (-s * (p as f64).ln()).exp())
            .sum::<Complex64>()
            .exp()
    }
}

/// Continuous logarithm of the target along the boundary circle, starting
/// from the real point `c + r` where the target is positive.
fn boundary_log(target: &TargetFunction) -> Result<Vec<Complex64>> {
    let vals: Vec<Complex64> = target.grid.boundary().iter().map(|s| target.eval(*s)).collect();
    if vals.iter().any(|v| v.norm() == 0.0 || !v.norm().is_finite()) {
        return Err(Error::Branch("target vanishes on the boundary".into()));
    }
    let mut out = Vec::with_capacity(vals.len());
    let mut arg = vals[0].arg();
    out.push(Complex64::new(vals[0].norm().ln(), arg));
    for w in vals.windows(2) {
        arg += (w[1] / w[0]).arg();
        out.push(Complex64::new(w[1].norm().ln(), arg));
    }
    let winding = arg + (vals[0] / vals[vals.len() - 1]).arg() - vals[0].arg();
    if winding.abs() > PI {
        return Err(Error::Branch(format!(
            "target winds around 0 on the boundary (total argument change {winding:.3})"
        )));
    }
    Ok(out)
}

fn sup_after(res: &[Complex64], basis: &[Complex64], c: f64) -> f64 {
    res.iter()
        .zip(basis)
        .map(|(r, b)| (r - c * b).norm())
        .fold(0.0, f64::max)
}

/// Greedy choice of SU(2) conjugacy classes `theta_p` so that
/// `sum_p 2 cos(theta_p) p^-s` approximates `log phi` on the boundary:
/// `theta_p = 0` for `p <= n0`, then each prime in `(n0, pmax]` in turn takes
/// the angle minimizing the residual sup-norm, if that improves it.
pub fn greedy_support_approx(target: &TargetFunction, pmax: u64, n0: u64) -> Result<SupportApproxTrace> {
    target.require_admissible()?;
    if pmax < n0 || pmax < 2 {
        return Err(Error::invalid(format!("need pmax >= max(n0, 2), got pmax = {pmax}, n0 = {n0}")));
    }
    let pts = target.grid.boundary().to_vec();
    let mut res = boundary_log(target)?;
    let table = primes_up_to(TAIL_SIEVE.max(pmax as usize + 1))?;
    let primes = table.primes_to(pmax).to_vec();
    let basis_of = |p: u64| -> Vec<Complex64> { pts.iter().map(|s| (-s * (p as f64).ln()).exp()).collect() };

    let mut thetas = Vec::with_capacity(primes.len());
    for &p in primes.iter().filter(|&&p| p <= n0) {
        // residual target psi - 2 sum_{p <= n0} p^-s
        for (r, b) in res.iter_mut().zip(basis_of(p)) {
            *r -= 2.0 * b;
        }
        thetas.push(0.0);
    }
    let sup = |r: &[Complex64]| r.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let initial_residual = sup(&res);
    let mut current = initial_residual;
    let mut residuals = Vec::new();
    for &p in primes.iter().filter(|&&p| p > n0) {
        let basis = basis_of(p);
        let eval = |th: f64| sup_after(&res, &basis, 2.0 * th.cos());
        let (mut lo, mut hi) = (0.0, PI);
        let mut best = (PI / 2.0, f64::INFINITY);
        for _ in 0..=REFINEMENTS {
            let step = (hi - lo) / (THETA_GRID - 1) as f64;
            for i in 0..THETA_GRID {
                let th = lo + step * i as f64;
                let v = eval(th);
                if v < best.1 {
                    best = (th, v);
                }
            }
            lo = (best.0 - step).max(0.0);
            hi = (best.0 + step).min(PI);
        }
        let theta = if best.1 < current {
            let c = 2.0 * best.0.cos();
            for (r, b) in res.iter_mut().zip(&basis) {
                *r -= c * b;
            }
            current = best.1;
            best.0
        } else {
            PI / 2.0
        };
        thetas.push(theta);
        residuals.push(current);
    }

    // primes beyond pmax left at trace 0 contribute log(1 + p^-2s); bound
    // each by p^{-2 sigma} / (1 - p^{-sigma}) at the leftmost point
    let sigma = target.grid.center().re - target.grid.radius();
    let term = |p: f64| p.powf(-2.0 * sigma) / (1.0 - p.powf(-sigma));
    let mut tail: f64 = table.primes()[primes.len()..].iter().map(|&p| term(p as f64)).sum();
    let x = table.bound() as f64;
    tail += x.powf(1.0 - 2.0 * sigma) / ((2.0 * sigma - 1.0) * x.ln() * (1.0 - x.powf(-sigma)));

    Ok(SupportApproxTrace {
        meta: ReportMeta {
            grid_hash: Some(format!("{:016x}", target.grid.hash())),
            ..ReportMeta::default()
        },
        target: target.spec.clone(),
        n0,
        pmax,
        primes,
        thetas,
        initial_residual,
        residuals,
        tail_bound: tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randmodel::EvalGrid;

    #[test]
    fn residuals_never_increase() {
        let g = EvalGrid::disc(0.75, 0.1, 32).unwrap();
        let t = TargetFunction::parse("poly:2,0.5,-1", &g).unwrap();
        let tr = greedy_support_approx(&t, 200, 3).unwrap();
        assert!(tr.residuals.windows(2).all(|w| w[1] <= w[0]));
        assert!(tr.final_residual() <= tr.initial_residual);
        for x in g.real_diameter(11) {
            let a = tr.approximant(Complex64::new(x, 0.0));
            assert!(a.re > 0.0 && a.im.abs() < 1e-12);
        }
    }

    #[test]
    fn inadmissible_target_rejected() {
        let g = EvalGrid::disc(0.75, 0.1, 32).unwrap();
        let t = TargetFunction::parse("const:-1", &g).unwrap();
        assert!(matches!(greedy_support_approx(&t, 100, 2), Err(Error::InadmissibleTarget(_))));
    }
}
