//! Dense complex linear algebra kernels.
//!
//! Every floating-point decomposition used by the toolkit goes through the
//! three operations here: [`thin_svd`], [`eig_dense`] and [`lstsq_pinv`].
//! Storage and the heavy lifting are delegated to `faer`.

use std::ops::Mul;

use faer::{Mat, MatRef};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Double-precision complex scalar used for all states and matrices.
pub type C64 = Complex64;

/// Default relative cutoff for pseudo-inverses: singular values below
/// `DEFAULT_RCOND * sigma_max` are treated as zero.
pub const DEFAULT_RCOND: f64 = 1e-12;

/// Column-major complex matrix with at least one row and one column.
///
/// Matrices built from external data are checked for NaN/Inf; results of
/// internal products are not re-validated.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix(Mat<C64>);

impl DenseMatrix {
    /// Wraps a `faer` matrix, rejecting empty shapes and non-finite entries.
    pub fn new(mat: Mat<C64>) -> Result<Self> {
        if mat.nrows() == 0 || mat.ncols() == 0 {
            return Err(Error::contract(format!(
                "matrix must be at least 1x1, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        for j in 0..mat.ncols() {
            for i in 0..mat.nrows() {
                let z = mat[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite(format!("entry ({i}, {j}) = {z}")));
                }
            }
        }
        Ok(DenseMatrix(mat))
    }

    #[cfg(test)]
    pub(crate) fn from_mat_unchecked(mat: Mat<C64>) -> Self {
        DenseMatrix(mat)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        Self::new(Mat::from_fn(rows, cols, f))
    }

    /// Builds a matrix from real row-major data.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::contract("ragged rows"));
        }
        Self::from_fn(n, m, |i, j| C64::new(rows[i][j], 0.0))
    }

    /// Stacks equal-length vectors as columns.
    pub fn from_columns<V: AsRef<[C64]>>(columns: &[V]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, |c| c.as_ref().len());
        if columns.iter().any(|c| c.as_ref().len() != rows) {
            return Err(Error::contract("columns differ in length"));
        }
        Self::from_fn(rows, cols, |i, j| columns[j].as_ref()[i])
    }

    pub fn identity(n: usize) -> Self {
        DenseMatrix(Mat::identity(n, n))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix(Mat::zeros(rows, cols))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn as_mat(&self) -> MatRef<'_, C64> {
        self.0.as_ref()
    }

    pub fn into_mat(self) -> Mat<C64> {
        self.0
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows()).map(|i| self.0[(i, j)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        DenseMatrix(self.0.adjoint().to_owned())
    }

    /// Leading `k` columns.
    pub fn leading_columns(&self, k: usize) -> Self {
        DenseMatrix(self.0.subcols(0, k).to_owned())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm_l2()
    }

    pub fn is_finite(&self) -> bool {
        (0..self.cols()).all(|j| (0..self.rows()).all(|i| is_finite(self.0[(i, j)])))
    }

    /// `self * diag(d)`.
    pub fn scale_columns(&self, d: &[C64]) -> Self {
        assert_eq!(d.len(), self.cols());
        DenseMatrix(Mat::from_fn(self.rows(), self.cols(), |i, j| self.0[(i, j)] * d[j]))
    }

    pub fn sub(&self, other: &DenseMatrix) -> Self {
        assert_eq!((self.rows(), self.cols()), (other.rows(), other.cols()));
        DenseMatrix(&self.0 - &other.0)
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.cols());
        let mut y = vec![C64::new(0.0, 0.0); self.rows()];
        for (j, &xj) in x.iter().enumerate() {
            if xj == C64::new(0.0, 0.0) {
                continue;
            }
            let col = self.0.col(j);
            for (yi, a) in y.iter_mut().zip(col.iter()) {
                *yi += a * xj;
            }
        }
        y
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;

    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols(), rhs.rows(), "inner dimensions differ");
        DenseMatrix(&self.0 * &rhs.0)
    }
}

/// Leading singular triplets of a matrix.
#[derive(Clone, Debug)]
pub struct SvdFactors {
    pub u: DenseMatrix,
    /// Nonincreasing, nonnegative.
    pub sigma: Vec<f64>,
    pub v: DenseMatrix,
}

impl SvdFactors {
    /// `U * diag(sigma) * V^H`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let s: Vec<C64> = self.sigma.iter().map(|&x| C64::new(x, 0.0)).collect();
        &self.u.scale_columns(&s) * &self.v.adjoint()
    }
}

fn full_thin_svd(a: &DenseMatrix) -> Result<SvdFactors> {
    let svd = a
        .as_mat()
        .thin_svd()
        .map_err(|e| Error::Decomposition(format!("svd did not converge: {e:?}")))?;
    let sigma: Vec<f64> = svd.S().column_vector().iter().map(|s| s.re.max(0.0)).collect();
    Ok(SvdFactors {
        u: DenseMatrix(svd.U().to_owned()),
        sigma,
        v: DenseMatrix(svd.V().to_owned()),
    })
}

/// Rank-`k` thin singular value decomposition.
pub fn thin_svd(a: &DenseMatrix, k: usize) -> Result<SvdFactors> {
    let kmax = a.rows().min(a.cols());
    if k == 0 || k > kmax {
        return Err(Error::contract(format!("svd rank {k} outside 1..={kmax}")));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite("svd input".into()));
    }
    let full = full_thin_svd(a)?;
    if k == kmax {
        return Ok(full);
    }
    Ok(SvdFactors {
        u: full.u.leading_columns(k),
        sigma: full.sigma[..k].to_vec(),
        v: full.v.leading_columns(k),
    })
}

/// Singular values only, nonincreasing.
pub fn singular_values(a: &DenseMatrix) -> Result<Vec<f64>> {
    let s = a
        .as_mat()
        .singular_values()
        .map_err(|e| Error::Decomposition(format!("svd did not converge: {e:?}")))?;
    Ok(s.into_iter().map(|x| x.max(0.0)).collect())
}

/// Eigenvalues and unit-norm eigenvectors of a square matrix.
pub fn eig_dense(a: &DenseMatrix) -> Result<(Vec<C64>, DenseMatrix)> {
    if a.rows() != a.cols() {
        return Err(Error::contract(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite("eigendecomposition input".into()));
    }
    let evd = a
        .as_mat()
        .eigen()
        .map_err(|e| Error::Decomposition(format!("eigensolver did not converge: {e:?}")))?;
    let values: Vec<C64> = evd.S().column_vector().iter().copied().collect();
    let mut w = evd.U().to_owned();
    for j in 0..w.ncols() {
        let norm = w.col(j).norm_l2();
        if norm > 0.0 {
            for i in 0..w.nrows() {
                w[(i, j)] /= norm;
            }
        }
    }
    Ok((values, DenseMatrix(w)))
}

/// Minimum-norm least-squares solution of `A X = B` via the pseudo-inverse.
///
/// Singular values below `rcond * sigma_max` are discarded.
pub fn lstsq_pinv(a: &DenseMatrix, b: &DenseMatrix, rcond: f64) -> Result<DenseMatrix> {
    if a.rows() != b.rows() {
        return Err(Error::contract(format!(
            "lstsq row mismatch: A has {} rows, B has {}",
            a.rows(),
            b.rows()
        )));
    }
    if !(rcond >= 0.0) {
        return Err(Error::contract("rcond must be nonnegative"));
    }
    let svd = full_thin_svd(a)?;
    let cutoff = rcond * svd.sigma.first().copied().unwrap_or(0.0);
    let inv: Vec<C64> = svd
        .sigma
        .iter()
        .map(|&s| if s > cutoff && s > 0.0 { C64::new(1.0 / s, 0.0) } else { C64::new(0.0, 0.0) })
        .collect();
    // X = V * diag(1/sigma) * U^H * B
    let uhb = DenseMatrix(svd.u.as_mat().adjoint() * b.as_mat());
    let scaled = DenseMatrix(Mat::from_fn(uhb.rows(), uhb.cols(), |i, j| uhb.get(i, j) * inv[i]));
    Ok(&svd.v * &scaled)
}

/// Spectral norm (largest singular value).
pub fn spectral_norm(a: &DenseMatrix) -> Result<f64> {
    Ok(singular_values(a)?.first().copied().unwrap_or(0.0))
}

pub fn is_finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Euclidean norm of a complex vector.
pub fn norm2(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn all_finite(x: &[C64]) -> bool {
    x.iter().all(|&z| is_finite(z))
}

/// Promotes real data to complex storage.
pub fn to_complex(x: &[f64]) -> Vec<C64> {
    x.iter().map(|&v| C64::new(v, 0.0)).collect()
}
