use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numkernel::primes_up_to;

use super::family::{extend_with_table, Eigenform};
use super::linalg::{left_null_vector, null_space};
use super::modsym::ModSymSpace;

pub const DEFAULT_MIX_SEED: u64 = 0x5eed_0f_7e_c4e;
const MIX_PRIMES: usize = 4;
const MAX_REMIX: u64 = 5;
const GAP_TOL: f64 = 1e-6;

/// Hecke eigenfunctionals on the star-plus cuspidal part of `M_2`.
///
/// `psi[(i, f)]` is the value of functional `f` on Manin symbol `i`; each
/// functional satisfies `phi_f(x T_p) = a_p(f) phi_f(x)` for all `x`.
#[derive(Debug, Clone)]
pub struct EigenSystems {
    pub psi: DMatrix<f64>,
    /// Functionals as rows over the quotient basis of `M_2`.
    pub functionals: DMatrix<f64>,
    /// Symbol used to normalize each functional.
    pub anchors: Vec<usize>,
}

fn plus_projection(space: &ModSymSpace) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let g = space.genus();
    let d = space.dim();
    let k = space.cuspidal_basis();
    let sigma = space.star_cuspidal();
    let id = DMatrix::<f64>::identity(2 * g, 2 * g);
    let bp = k * null_space(&(&sigma - &id), g, "star +1 eigenspace")?;
    let bm = k * null_space(&(&sigma + &id), g, "star -1 eigenspace")?;
    let t2 = space.hecke_full(2)?;
    let eis = null_space(
        &(t2 - DMatrix::<f64>::identity(d, d) * 3.0),
        1,
        "Eisenstein line",
    )?;
    let mut p = DMatrix::<f64>::zeros(d, d);
    p.columns_mut(0, g).copy_from(&bp);
    p.columns_mut(g, g).copy_from(&bm);
    p.columns_mut(2 * g, 1).copy_from(&eis);
    let inv = p.try_inverse().ok_or_else(|| {
        Error::Inconsistency("star eigenspaces and Eisenstein line not independent".into())
    })?;
    Ok((inv.rows(0, g).into_owned(), bp))
}

pub fn eigen_systems(space: &ModSymSpace, mix_seed: u64) -> Result<EigenSystems> {
    let g = space.genus();
    let q = space.level();
    let (pi, bp) = plus_projection(space)?;
    let mix_primes: Vec<u64> = [2u64, 3, 5, 7, 11, 13]
        .into_iter()
        .filter(|&p| p != q)
        .take(MIX_PRIMES)
        .collect();
    let ops: Vec<DMatrix<f64>> = mix_primes
        .iter()
        .map(|&p| Ok(&pi * space.hecke_full(p)? * &bp))
        .collect::<Result<_>>()?;

    for attempt in 0..MAX_REMIX {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed.wrapping_add(attempt));
        let mut a = DMatrix::<f64>::zeros(g, g);
        for op in &ops {
            a += op * rng.gen_range(-1.0..1.0);
        }
        let ev = a.complex_eigenvalues();
        if ev.iter().any(|z| z.im.abs() > 1e-8 * (1.0 + z.re.abs())) {
            continue;
        }
        let mut lams: Vec<f64> = ev.iter().map(|z| z.re).collect();
        lams.sort_by(f64::total_cmp);
        if lams.windows(2).any(|w| w[1] - w[0] < GAP_TOL) {
            continue;
        }
        let mut functionals = DMatrix::<f64>::zeros(g, space.dim());
        for (f, &lam) in lams.iter().enumerate() {
            let shifted = &a - DMatrix::<f64>::identity(g, g) * lam;
            let (w, _) = left_null_vector(&shifted);
            functionals.set_row(f, &(w.transpose() * &pi));
        }
        let psi = space.coords() * functionals.transpose();
        let anchors = choose_anchors(&psi);
        return Ok(EigenSystems {
            psi,
            functionals,
            anchors,
        });
    }
    Err(Error::DegenerateEigenspace(format!(
        "level {q}: eigenvalues of the mixed Hecke operator stayed clustered after {MAX_REMIX} attempts"
    )))
}

// Each anchor costs a full pass of Heilbronn images per prime, so one shared
// symbol is worth a little conditioning: the relative rounding error of a_p
// is about 1e-16 * (image count) / ANCHOR_FLOOR, ~1e-7 at p ~ 1e5.
const ANCHOR_FLOOR: f64 = 1e-3;

/// One symbol per form where the functional is large; shared when possible.
fn choose_anchors(psi: &DMatrix<f64>) -> Vec<usize> {
    let g = psi.ncols();
    let scale: Vec<f64> = (0..g).map(|f| psi.column(f).amax()).collect();
    let score = |i: usize, f: usize| psi[(i, f)].abs() / scale[f];
    let shared = (0..psi.nrows())
        .max_by(|&a, &b| {
            let sa = (0..g).map(|f| score(a, f)).fold(f64::INFINITY, f64::min);
            let sb = (0..g).map(|f| score(b, f)).fold(f64::INFINITY, f64::min);
            sa.total_cmp(&sb)
        })
        .unwrap_or(0);
    (0..g)
        .map(|f| {
            if score(shared, f) >= ANCHOR_FLOOR {
                shared
            } else {
                psi.column(f).iamax()
            }
        })
        .collect()
}

impl EigenSystems {
    pub fn len(&self) -> usize {
        self.anchors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.anchors.is_empty()
    }

    /// Hecke eigenvalues `a_p` of every form for each prime in `primes`
    /// (none equal to the level). Result is `[prime index][form]`.
    pub fn hecke_eigenvalues(&self, space: &ModSymSpace, primes: &[u64]) -> Vec<Vec<f64>> {
        let p1 = space.p1();
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        for (f, &x0) in self.anchors.iter().enumerate() {
            match groups.iter_mut().find(|(a, _)| *a == x0) {
                Some((_, fs)) => fs.push(f),
                None => groups.push((x0, vec![f])),
            }
        }
        let n = p1.len();
        primes
            .par_iter()
            .map_init(
                || vec![0u32; n],
                |hist, &p| {
                    let mut out = vec![0.0; self.len()];
                    for (x0, fs) in &groups {
                        hist.iter_mut().for_each(|h| *h = 0);
                        p1.for_each_heilbronn_image(p, p1.symbol(*x0), |j| hist[j] += 1);
                        for &f in fs {
                            let s: f64 = hist
                                .iter()
                                .enumerate()
                                .filter(|(_, &h)| h != 0)
                                .map(|(i, &h)| h as f64 * self.psi[(i, f)])
                                .sum();
                            out[f] = s / self.psi[(*x0, f)];
                        }
                    }
                    out
                },
            )
            .collect()
    }

    /// Fricke eigenvalue of each functional, checked to be `+-1`.
    pub fn fricke_signs(&self, space: &ModSymSpace) -> Result<Vec<i8>> {
        let w = space.fricke_full();
        (0..self.len())
            .map(|f| {
                let phi: DVector<f64> = self.functionals.row(f).transpose();
                let img = w.transpose() * &phi;
                let lam = img.dot(&phi) / phi.dot(&phi);
                let resid = (&img - &phi * lam).norm() / phi.norm();
                if resid > 1e-6 || (lam.abs() - 1.0).abs() > 1e-6 {
                    return Err(Error::Inconsistency(format!(
                        "form {f}: not a Fricke eigenvector (eigenvalue {lam}, residual {resid:e})"
                    )));
                }
                Ok(if lam > 0.0 { 1 } else { -1 })
            })
            .collect()
    }
}

pub fn decompose(space: &ModSymSpace, nmax: usize) -> Result<Vec<Eigenform>> {
    decompose_with_seed(space, nmax, DEFAULT_MIX_SEED)
}

/// Eigenforms of `S_2(Gamma_0(q))` with coefficients up to `nmax`, sorted
/// by `(a_2, a_3, a_5, ...)`. The mixing seed changes only the route, not
/// the result (up to rounding).
pub fn decompose_with_seed(
    space: &ModSymSpace,
    nmax: usize,
    mix_seed: u64,
) -> Result<Vec<Eigenform>> {
    let q = space.level();
    let g = space.genus();
    let es = eigen_systems(space, mix_seed)?;
    let signs = es.fricke_signs(space)?;
    let nmax = nmax.max(1);
    let table = primes_up_to(nmax.max(13))?;
    let primes: Vec<u64> = table
        .primes_to(nmax.max(13) as u64)
        .iter()
        .copied()
        .filter(|&p| p != q)
        .collect();
    let aps = es.hecke_eigenvalues(space, &primes);
    let mut forms = Vec::with_capacity(g);
    for f in 0..g {
        let mut c = vec![f64::NAN; nmax.max(13) + 1];
        for (&p, row) in primes.iter().zip(&aps) {
            let a = row[f];
            if a.abs() > 2.0 * (p as f64).sqrt() + 1e-6 {
                return Err(Error::Inconsistency(format!(
                    "level {q}: computed a_{p} = {a} violates the Deligne bound"
                )));
            }
            c[p as usize] = a;
        }
        if (q as usize) < c.len() {
            c[q as usize] = -(signs[f] as f64);
        }
        let form = Eigenform {
            q,
            id: f,
            coeffs: c,
            fricke_sign: signs[f],
            weight: 1.0 / g as f64,
        };
        forms.push(extend_with_table(&form, nmax, &table)?);
    }
    let key = |f: &Eigenform| -> Vec<f64> {
        table
            .primes_to(f.nmax() as u64)
            .iter()
            .map(|&p| f.coeffs[p as usize])
            .collect()
    };
    forms.sort_by(|a, b| {
        key(a)
            .iter()
            .zip(key(b).iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    for (i, f) in forms.iter_mut().enumerate() {
        f.id = i;
    }
    Ok(forms)
}

/// Fricke eigenvalue of `form`, located among the eigensystems of `space`
/// by its first Hecke eigenvalues.
pub fn atkin_lehner_sign(space: &ModSymSpace, form: &Eigenform) -> Result<i8> {
    if form.q != space.level() {
        return Err(Error::invalid(format!(
            "form of level {} against space of level {}",
            form.q,
            space.level()
        )));
    }
    let es = eigen_systems(space, DEFAULT_MIX_SEED)?;
    let probe: Vec<u64> = [2u64, 3, 5, 7, 13, 17]
        .into_iter()
        .filter(|&p| p != form.q && (p as usize) <= form.nmax())
        .collect();
    let aps = es.hecke_eigenvalues(space, &probe);
    let dist = |f: usize| -> f64 {
        probe
            .iter()
            .enumerate()
            .map(|(k, &p)| (aps[k][f] - form.coeffs[p as usize]).abs())
            .fold(0.0, f64::max)
    };
    let best = (0..es.len())
        .min_by(|&a, &b| dist(a).total_cmp(&dist(b)))
        .ok_or_else(|| Error::EmptyFamily("no eigensystems".into()))?;
    if dist(best) > 1e-6 {
        return Err(Error::Inconsistency(format!(
            "form {} does not match any eigensystem of level {}",
            form.id, form.q
        )));
    }
    Ok(es.fricke_signs(space)?[best])
}
