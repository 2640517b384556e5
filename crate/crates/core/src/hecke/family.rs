use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{primes_up_to, PrimeTable};

/// A normalized Hecke eigenform of weight 2 and prime level, represented by
/// its coefficients in the arithmetic normalization (`a_1 = 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenform {
    pub q: u64,
    pub id: usize,
    /// `coeffs[n] = a_n`; index 0 is unused. Entries may be NaN where a
    /// coefficient is not yet known (see [`extend_coefficients`]).
    pub coeffs: Vec<f64>,
    /// Eigenvalue of the Fricke involution on the form.
    pub fricke_sign: i8,
    /// Harmonic weight, normalized over the family.
    pub weight: f64,
}

impl Eigenform {
    pub fn nmax(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn a(&self, n: usize) -> f64 {
        self.coeffs[n]
    }

    /// `lambda_f(n) = a_n / sqrt(n)`.
    pub fn lambda(&self, n: usize) -> f64 {
        self.coeffs[n] / (n as f64).sqrt()
    }

    /// Analytically normalized coefficient vector (index 0 zero).
    pub fn lambdas(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| if n == 0 { 0.0 } else { a / (n as f64).sqrt() })
            .collect();
        if let Some(v0) = v.first_mut() {
            *v0 = 0.0;
        }
        v
    }
}

/// `a_{p^k}` for `k = 0..=e` from `a_p`.
fn prime_power_coeffs(ap: f64, p: u64, q: u64, e: u32) -> Vec<f64> {
    let mut v = Vec::with_capacity(e as usize + 1);
    v.push(1.0);
    if e >= 1 {
        v.push(ap);
    }
    for k in 2..=e as usize {
        let next = if p == q {
            v[k - 1] * ap
        } else {
            ap * v[k - 1] - p as f64 * v[k - 2]
        };
        v.push(next);
    }
    v
}

/// Fill in `a_n` for all `n <= nmax` from the prime coefficients, using
/// multiplicativity and the prime-power recursion
/// `a_{p^{k+1}} = a_p a_{p^k} - p a_{p^{k-1}}` (`a_{q^k} = a_q^k`).
pub fn extend_coefficients(form: &Eigenform, nmax: usize) -> Result<Eigenform> {
    let table = primes_up_to(nmax.max(2))?;
    extend_with_table(form, nmax, &table)
}

pub(crate) fn extend_with_table(
    form: &Eigenform,
    nmax: usize,
    table: &PrimeTable,
) -> Result<Eigenform> {
    let mut c = vec![0.0; nmax + 1];
    if nmax >= 1 {
        c[1] = 1.0;
    }
    // a_{p^k} tables indexed by prime
    let mut pp: Vec<Vec<f64>> = vec![Vec::new(); nmax + 1];
    for &p in table.primes_to(nmax as u64) {
        let ap = form.coeffs.get(p as usize).copied().unwrap_or(f64::NAN);
        if !ap.is_finite() {
            return Err(Error::IncompleteData(format!(
                "form {} of level {} lacks a_{p}",
                form.id, form.q
            )));
        }
        let mut e = 0;
        let mut pk = 1usize;
        while pk <= nmax / p as usize {
            pk *= p as usize;
            e += 1;
        }
        pp[p as usize] = prime_power_coeffs(ap, p, form.q, e);
    }
    for n in 2..=nmax {
        let p = table.spf(n) as usize;
        let mut m = n / p;
        let mut e = 1;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        c[n] = pp[p][e] * c[m];
    }
    Ok(Eigenform {
        coeffs: c,
        ..form.clone()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Computed,
    Imported,
}

/// The family `S_2(q)*` with harmonic weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySnapshot {
    pub q: u64,
    pub nmax: usize,
    pub forms: Vec<Eigenform>,
    pub provenance: Provenance,
}

impl FamilySnapshot {
    pub fn weights(&self) -> Vec<f64> {
        self.forms.iter().map(|f| f.weight).collect()
    }

    pub fn fricke_signs(&self) -> Vec<i8> {
        self.forms.iter().map(|f| f.fricke_sign).collect()
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    /// `sum_f weight_f h(f)`.
    pub fn expectation(&self, h: impl Fn(&Eigenform) -> f64) -> f64 {
        self.forms.iter().map(|f| f.weight * h(f)).sum()
    }

    /// Keep coefficients up to `nmax` only.
    pub fn truncated(&self, nmax: usize) -> FamilySnapshot {
        let forms = self
            .forms
            .iter()
            .map(|f| Eigenform {
                coeffs: f.coeffs[..=nmax.min(f.nmax())].to_vec(),
                ..f.clone()
            })
            .collect();
        FamilySnapshot {
            q: self.q,
            nmax: nmax.min(self.nmax),
            forms,
            provenance: self.provenance,
        }
    }
}

/// Default smoothing horizon `X = 30 sqrt(q) log q` for the weights.
pub fn default_weight_horizon(q: u64) -> f64 {
    let q = q as f64;
    30.0 * q.sqrt() * q.ln()
}

/// Coefficient horizon needed by [`harmonic_weights`] at horizon `x`.
pub fn weight_coefficient_horizon(x: f64) -> usize {
    (10.0 * x).floor() as usize
}

/// Proxy for `L(Sym^2 f, 1)`, which is proportional to the Petersson norm:
/// `zeta(2) sum_{n <= 10X} lambda_f(n^2) e^{-n/X} / n`. Only `a_p` for
/// `p <= 10X` are needed since `a_{n^2}` follows from the recursion.
pub fn symmetric_square_proxy(form: &Eigenform, x: f64, table: &PrimeTable) -> Result<f64> {
    let top = weight_coefficient_horizon(x);
    if top > table.bound() {
        return Err(Error::invalid(
            "prime table too small for the weight horizon",
        ));
    }
    // a_{n^2} via multiplicativity: a_{p^{2e}} from the prime-power recursion
    let mut sq = vec![0.0; top + 1];
    if top >= 1 {
        sq[1] = 1.0;
    }
    let mut pp: Vec<Vec<f64>> = vec![Vec::new(); top + 1];
    for &p in table.primes_to(top as u64) {
        let ap = form.coeffs.get(p as usize).copied().unwrap_or(f64::NAN);
        if !ap.is_finite() {
            return Err(Error::IncompleteData(format!(
                "form {} needs a_{p} for its harmonic weight",
                form.id
            )));
        }
        let mut e = 0;
        let mut pk = 1usize;
        while pk <= top / p as usize {
            pk *= p as usize;
            e += 1;
        }
        pp[p as usize] = prime_power_coeffs(ap, p, form.q, 2 * e);
    }
    let mut total = 0.0;
    for n in 1..=top {
        if n >= 2 {
            let p = table.spf(n) as usize;
            let mut m = n / p;
            let mut e = 1;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            sq[n] = pp[p][2 * e] * sq[m];
        }
        let nf = n as f64;
        // lambda(n^2) = a_{n^2} / n
        total += sq[n] / nf * (-nf / x).exp() / nf;
    }
    Ok(std::f64::consts::PI.powi(2) / 6.0 * total)
}

/// Attach weights `u_f / sum u_f` with `u_f = 1 / symmetric_square_proxy`.
pub fn harmonic_weights(forms: &[Eigenform], x: f64) -> Result<FamilySnapshot> {
    let Some(first) = forms.first() else {
        return Err(Error::EmptyFamily("no forms".into()));
    };
    if !(x >= 1.0) {
        return Err(Error::invalid(format!(
            "weight horizon X = {x} must be >= 1"
        )));
    }
    let table = primes_up_to(weight_coefficient_horizon(x).max(2))?;
    let mut u = Vec::with_capacity(forms.len());
    for f in forms {
        let lam = symmetric_square_proxy(f, x, &table)?;
        if !(lam > 0.0) {
            return Err(Error::WeightFailure(format!(
                "symmetric-square proxy {lam} for form {} is not positive",
                f.id
            )));
        }
        u.push(1.0 / lam);
    }
    let total: f64 = u.iter().sum();
    let forms: Vec<Eigenform> = forms
        .iter()
        .zip(&u)
        .map(|(f, w)| Eigenform {
            weight: w / total,
            ..f.clone()
        })
        .collect();
    let nmax = forms.iter().map(Eigenform::nmax).min().unwrap_or(0);
    Ok(FamilySnapshot {
        q: first.q,
        nmax,
        forms,
        provenance: Provenance::Computed,
    })
}
