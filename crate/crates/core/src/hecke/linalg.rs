use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Orthonormal basis (as columns) of the `dim`-dimensional null space of
/// `m`, from the smallest eigenvalues of `m^T m`. Fails if the expected
/// dimension is not cleanly separated from the rest of the spectrum.
pub(crate) fn null_space(m: &DMatrix<f64>, dim: usize, what: &str) -> Result<DMatrix<f64>> {
    let n = m.ncols();
    if dim == 0 {
        return Ok(DMatrix::zeros(n, 0));
    }
    let gram = m.transpose() * m;
    let eig = gram.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let scale = 1.0 + m.norm();
    let tol = 1e-8 * scale;
    let worst = eig.eigenvalues[order[dim - 1]].max(0.0).sqrt();
    let next = order.get(dim).map(|&i| eig.eigenvalues[i].max(0.0).sqrt());
    if worst > tol || next.is_some_and(|x| x <= tol) {
        return Err(Error::Inconsistency(format!(
            "{what}: null space is not {dim}-dimensional (singular values {worst:e}, {next:?})"
        )));
    }
    let cols: Vec<DVector<f64>> = order[..dim]
        .iter()
        .map(|&i| eig.eigenvectors.column(i).into_owned())
        .collect();
    Ok(DMatrix::from_columns(&cols))
}

/// Unit vector `w` minimizing `|m^T w|` (a left null vector of `m`).
pub(crate) fn left_null_vector(m: &DMatrix<f64>) -> (DVector<f64>, f64) {
    let svd = m.transpose().svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let (i, s) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, s)| (i, *s))
        .expect("non-empty");
    (v_t.row(i).transpose().into_owned(), s)
}
