//! Real dense helpers used on the `R^{d^2}` coordinates of Hermitian matrices.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Orthonormal basis (as columns) of the column space of `m`.
///
/// Singular values below `rel_tol * sigma_max` are treated as zero.
pub(crate) fn column_space(m: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let rows = m.nrows();
    if m.ncols() == 0 || rows == 0 {
        return DMatrix::zeros(rows, 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let smax = svd.singular_values.iter().fold(0.0_f64, |a, &s| a.max(s));
    if smax == 0.0 {
        return DMatrix::zeros(rows, 0);
    }
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&j| svd.singular_values[j] > rel_tol * smax)
        .collect();
    let mut out = DMatrix::zeros(rows, keep.len());
    for (c, &j) in keep.iter().enumerate() {
        out.set_column(c, &u.column(j));
    }
    out
}

/// Orthonormal basis of the orthogonal complement of the orthonormal columns `q` in `R^n`.
pub(crate) fn orthogonal_complement(q: &DMatrix<f64>, n: usize) -> DMatrix<f64> {
    if q.ncols() == 0 {
        return DMatrix::identity(n, n);
    }
    let p = DMatrix::<f64>::identity(n, n) - q * q.transpose();
    let p = (&p + p.transpose()) * 0.5;
    let se = SymmetricEigen::new(p);
    let keep: Vec<usize> = (0..n).filter(|&j| se.eigenvalues[j] > 0.5).collect();
    let mut out = DMatrix::zeros(n, keep.len());
    for (c, &j) in keep.iter().enumerate() {
        out.set_column(c, &se.eigenvectors.column(j));
    }
    out
}

/// Columns `[a_1 ... a_k]` from a list of vectors.
pub(crate) fn stack_columns(rows: usize, cols: &[DVector<f64>]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(rows, cols.len());
    for (c, v) in cols.iter().enumerate() {
        m.set_column(c, v);
    }
    m
}

/// Minimum-norm least-squares solution of `a x = b`.
pub(crate) fn least_squares(a: &DMatrix<f64>, b: &DVector<f64>, rel_tol: f64) -> DVector<f64> {
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().fold(0.0_f64, |m, &s| m.max(s));
    let eps = rel_tol * smax;
    svd.solve(b, eps).expect("both singular vector sets computed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_dimensions_add_up() {
        let m = DMatrix::from_row_slice(4, 3, &[1.0, 2.0, 3.0, 0.0, 1.0, 1.0, 1.0, 3.0, 4.0, 2.0, 0.0, 2.0]);
        let q = column_space(&m, 1e-10);
        assert_eq!(q.ncols(), 2);
        let c = orthogonal_complement(&q, 4);
        assert_eq!(c.ncols(), 2);
        assert!((q.transpose() * &c).amax() < 1e-12);
    }

    #[test]
    fn least_squares_min_norm() {
        let a = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
        let x = least_squares(&a, &DVector::from_vec(vec![2.0]), 1e-12);
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
    }
}
