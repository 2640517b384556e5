use nalgebra::{DMatrix, DVector};
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Zero};

use crate::error::{Error, Result};
use crate::numkernel::is_prime;

use super::linalg::null_space;
use super::p1::P1;

type Q = Ratio<i128>;

/// Weight-2 modular symbols for `Gamma_0(q)`, `q` prime.
///
/// `coords` expresses every Manin symbol in the quotient basis of
/// `M_2(Gamma_0(q))` (dimension `2g + 1`); `cuspidal` is an orthonormal
/// basis of the boundary kernel.
#[derive(Debug, Clone)]
pub struct ModSymSpace {
    p1: P1,
    genus: usize,
    basis_symbols: Vec<usize>,
    coords: DMatrix<f64>,
    cuspidal: DMatrix<f64>,
    star: DMatrix<f64>,
}

fn ovf<T>(x: Option<T>) -> Result<T> {
    x.ok_or(Error::Overflow)
}

/// Reduced row echelon form over Q; returns pivot columns.
fn rref(rows: &mut Vec<Vec<Q>>, ncols: usize) -> Result<Vec<usize>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = ovf(Q::one().checked_div(&rows[r][col]))?;
        for x in rows[r].iter_mut() {
            if !x.is_zero() {
                *x = ovf(x.checked_mul(&inv))?;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col];
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = ovf(x.checked_sub(&ovf(f.checked_mul(p))?))?;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    Ok(pivots)
}

/// Genus of `X_0(q)` for prime `q`.
pub fn genus_x0(q: u64) -> usize {
    let nu2 = match q {
        2 => 1,
        _ if q % 4 == 1 => 2,
        _ => 0,
    };
    let nu3 = match q {
        3 => 1,
        _ if q % 3 == 1 => 2,
        _ => 0,
    };
    // g = 1 + mu/12 - nu2/4 - nu3/3 - cusps/2 with mu = q + 1, 2 cusps
    let twelve_g = 12 + (q as i64 + 1) - 3 * nu2 - 4 * nu3 - 12;
    (twelve_g / 12) as usize
}

pub fn build_space(q: u64) -> Result<ModSymSpace> {
    if !is_prime(q) {
        return Err(Error::invalid(format!("level {q} is not prime")));
    }
    if q < 11 {
        return Err(Error::EmptyFamily(format!("S_2(Gamma_0({q})) = 0")));
    }
    let p1 = P1::new(q);
    let n = p1.len();

    // 2-term relations x + xS = 0: each symbol becomes +-(free variable) or 0
    let mut two: Vec<Option<(usize, i8)>> = vec![None; n];
    let mut reps = Vec::new();
    let mut assigned = vec![false; n];
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let j = p1.apply_s(i);
        assigned[i] = true;
        assigned[j] = true;
        if i != j {
            two[i] = Some((reps.len(), 1));
            two[j] = Some((reps.len(), -1));
            reps.push(i);
        }
    }
    let nfree = reps.len();

    // 3-term relations x + xT + xT^2 = 0, one per T-orbit
    let mut seen = vec![false; n];
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let j = p1.apply_t(i);
        let k = p1.apply_t(j);
        seen[i] = true;
        seen[j] = true;
        seen[k] = true;
        let mut row = vec![Q::zero(); nfree];
        let orbit: &[usize] = if i == j { &[i] } else { &[i, j, k] };
        let mult = if i == j { 3 } else { 1 };
        for &x in orbit {
            if let Some((v, s)) = two[x] {
                row[v] = ovf(row[v].checked_add(&Q::from_integer((s as i128) * mult)))?;
            }
        }
        if row.iter().any(|x| !x.is_zero()) {
            rows.push(row);
        }
    }
    let pivots = rref(&mut rows, nfree)?;
    let free: Vec<usize> = (0..nfree).filter(|c| !pivots.contains(c)).collect();
    let dim = free.len();
    let mut pos = vec![usize::MAX; nfree];
    for (b, &c) in free.iter().enumerate() {
        pos[c] = b;
    }
    // coordinates of each free variable in the quotient basis
    let mut var_coords = DMatrix::<f64>::zeros(nfree, dim);
    for (b, &c) in free.iter().enumerate() {
        var_coords[(c, b)] = 1.0;
    }
    for (row, &pc) in rows.iter().zip(&pivots) {
        for (b, &c) in free.iter().enumerate() {
            let x = row[c];
            if !x.is_zero() {
                var_coords[(pc, b)] = -(*x.numer() as f64) / (*x.denom() as f64);
            }
        }
    }
    let mut coords = DMatrix::<f64>::zeros(n, dim);
    for i in 0..n {
        if let Some((v, s)) = two[i] {
            let r = var_coords.row(v) * s as f64;
            coords.row_mut(i).copy_from(&r);
        }
    }
    let basis_symbols: Vec<usize> = free.iter().map(|&c| reps[c]).collect();

    let genus = genus_x0(q);
    if dim != 2 * genus + 1 {
        return Err(Error::Inconsistency(format!(
            "modular symbols of level {q} have dimension {dim}, expected {}",
            2 * genus + 1
        )));
    }

    // boundary map to the two cusps
    let mut bnd = DMatrix::<f64>::zeros(2, dim);
    for (b, &sym) in basis_symbols.iter().enumerate() {
        let (cinf, dinf) = p1.boundary_classes(sym);
        bnd[(if cinf { 0 } else { 1 }, b)] += 1.0;
        bnd[(if dinf { 0 } else { 1 }, b)] -= 1.0;
    }
    let cuspidal = null_space(&bnd, 2 * genus, "cuspidal subspace")?;

    let mut star = DMatrix::<f64>::zeros(dim, dim);
    for (b, &sym) in basis_symbols.iter().enumerate() {
        star.set_column(b, &coords.row(p1.apply_star(sym)).transpose());
    }

    Ok(ModSymSpace {
        p1,
        genus,
        basis_symbols,
        coords,
        cuspidal,
        star,
    })
}

impl ModSymSpace {
    pub fn level(&self) -> u64 {
        self.p1.q()
    }

    /// `g = dim S_2(Gamma_0(q))`.
    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Dimension of the full space `M_2`.
    pub fn dim(&self) -> usize {
        self.basis_symbols.len()
    }

    pub fn cuspidal_dim(&self) -> usize {
        self.cuspidal.ncols()
    }

    pub fn p1(&self) -> &P1 {
        &self.p1
    }

    /// Row `i`: Manin symbol `i` in the quotient basis.
    pub fn coords(&self) -> &DMatrix<f64> {
        &self.coords
    }

    pub fn basis_symbols(&self) -> &[usize] {
        &self.basis_symbols
    }

    /// Orthonormal columns spanning the cuspidal subspace.
    pub fn cuspidal_basis(&self) -> &DMatrix<f64> {
        &self.cuspidal
    }

    /// Star involution on `M_2`.
    pub fn star(&self) -> &DMatrix<f64> {
        &self.star
    }

    /// Star involution restricted to the cuspidal subspace.
    pub fn star_cuspidal(&self) -> DMatrix<f64> {
        self.restrict(&self.star)
    }

    /// `K^T A K` for an operator `A` on `M_2` preserving the cuspidal part.
    pub fn restrict(&self, a: &DMatrix<f64>) -> DMatrix<f64> {
        self.cuspidal.transpose() * a * &self.cuspidal
    }

    /// Sum of quotient coordinates of the listed Manin symbols.
    pub(crate) fn sum_coords(&self, symbols: impl IntoIterator<Item = usize>) -> DVector<f64> {
        let mut v = DVector::zeros(self.dim());
        for s in symbols {
            v += self.coords.row(s).transpose();
        }
        v
    }

    /// `T_p` on the full space `M_2`.
    pub fn hecke_full(&self, p: u64) -> Result<DMatrix<f64>> {
        if p == self.level() {
            return Err(Error::WrongOperator(format!(
                "T_{p} at level {p}: use the Atkin-Lehner/Fricke operator"
            )));
        }
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        let mut t = DMatrix::zeros(self.dim(), self.dim());
        for (b, &sym) in self.basis_symbols.iter().enumerate() {
            let mut imgs = Vec::new();
            self.p1
                .for_each_heilbronn_image(p, self.p1.symbol(sym), |j| imgs.push(j));
            t.set_column(b, &self.sum_coords(imgs));
        }
        Ok(t)
    }

    /// Fricke involution `W_q` on `M_2`:
    /// `(1:d) -> (0:1) - {0, d/q}` and `(0:1) -> -(0:1)`.
    pub fn fricke_full(&self) -> DMatrix<f64> {
        let q = self.level() as i64;
        let inf = self.p1.index(0, 1);
        let mut w = DMatrix::zeros(self.dim(), self.dim());
        for (b, &sym) in self.basis_symbols.iter().enumerate() {
            let col = if sym == inf {
                -self.coords.row(inf).transpose()
            } else {
                let (_, d) = self.p1.symbol(sym);
                self.coords.row(inf).transpose() - self.sum_coords(self.p1.zero_to_cusp(d, q))
            };
            w.set_column(b, &col);
        }
        w
    }
}

/// Matrix of `T_p` on the cuspidal subspace (in its orthonormal basis).
pub fn hecke_operator(space: &ModSymSpace, p: u64) -> Result<DMatrix<f64>> {
    Ok(space.restrict(&space.hecke_full(p)?))
}
