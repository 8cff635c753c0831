//! Dense matrix primitives.
//!
//! Matrices are plain `nalgebra` dynamic matrices; this module adds the
//! validated operations the rest of the crate relies on, each with an explicit
//! numerical contract (see [`crate::tol`]).

use nalgebra::{ComplexField, DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub type RealMatrix = DMatrix<f64>;
pub type RealVector = DVector<f64>;
pub type ComplexMatrix = DMatrix<Complex64>;

/// Builds a real matrix from row-major entries, rejecting NaN/Inf.
pub fn real_matrix(rows: usize, cols: usize, row_major: &[f64]) -> Result<RealMatrix> {
    if row_major.len() != rows * cols {
        return Err(Error::DimensionMismatch {
            context: "real_matrix entries",
            expected: rows * cols,
            found: row_major.len(),
        });
    }
    if row_major.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(RealMatrix::from_row_slice(rows, cols, row_major))
}

/// Builds a complex matrix from row-major entries, rejecting NaN/Inf.
pub fn complex_matrix(rows: usize, cols: usize, row_major: &[Complex64]) -> Result<ComplexMatrix> {
    if row_major.len() != rows * cols {
        return Err(Error::DimensionMismatch {
            context: "complex_matrix entries",
            expected: rows * cols,
            found: row_major.len(),
        });
    }
    if row_major.iter().any(|z| !z.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(ComplexMatrix::from_row_slice(rows, cols, row_major))
}

/// Returns the order of a square matrix.
pub fn ensure_square<T: nalgebra::Scalar>(m: &DMatrix<T>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NonSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

pub fn ensure_finite<T: ComplexField>(m: &DMatrix<T>) -> Result<()> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Matrix exponential by scaling and squaring with a Padé kernel.
///
/// Works for both real and complex matrices.
pub fn expm<T: ComplexField>(m: &DMatrix<T>) -> Result<DMatrix<T>> {
    let n = ensure_square(m)?;
    ensure_finite(m)?;
    if n == 0 {
        return Ok(m.clone());
    }
    // The backend's backward-error estimate divides by the 1-norm.
    if m.iter().all(|x| x.is_zero()) {
        return Ok(DMatrix::identity(n, n));
    }
    Ok(m.exp())
}

/// Spectral decomposition `M = V diag(λ) V†` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal columns, in the order of `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let mut scaled = self.eigenvectors.clone();
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            scaled.column_mut(j).scale_mut(lambda);
        }
        if n == 0 {
            return scaled;
        }
        scaled * self.eigenvectors.adjoint()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

/// `‖M − M†‖_F / ‖M‖_F` (0 for the zero matrix).
pub fn hermitian_residual(m: &ComplexMatrix) -> f64 {
    let norm = m.norm();
    if norm == 0.0 {
        return 0.0;
    }
    (m - m.adjoint()).norm() / norm
}

/// `‖M − Mᵀ‖_F / ‖M‖_F` (0 for the zero matrix).
pub fn symmetric_residual(m: &RealMatrix) -> f64 {
    let norm = m.norm();
    if norm == 0.0 {
        return 0.0;
    }
    (m - m.transpose()).norm() / norm
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    ensure_square(m)?;
    ensure_finite(m)?;
    let residual = hermitian_residual(m);
    if residual > tol::HERMITIAN {
        return Err(Error::NotHermitian { residual });
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eigh(m: &ComplexMatrix) -> Result<HermitianEigen> {
    check_hermitian(m)?;
    let sym = (m + m.adjoint()).scale(0.5);
    let n = sym.nrows();
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues (ascending) of a Hermitian matrix without eigenvectors.
pub fn eigvalsh(m: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    let sym = (m + m.adjoint()).scale(0.5);
    let mut values: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Eigenvalues (ascending) of a real symmetric matrix.
pub fn eigvals_symmetric(m: &RealMatrix) -> Result<Vec<f64>> {
    ensure_square(m)?;
    ensure_finite(m)?;
    let residual = symmetric_residual(m);
    if residual > tol::SYMMETRIC {
        return Err(Error::Asymmetric { residual });
    }
    let sym = symmetrize(m);
    let mut values: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Largest singular value, from the spectrum of `MᵀM`.
pub fn spectral_norm(m: &RealMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let gram = symmetrize(&(m.transpose() * m));
    let top = gram
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(0.0_f64, f64::max);
    top.max(0.0).sqrt()
}

pub fn symmetrize(m: &RealMatrix) -> RealMatrix {
    (m + m.transpose()).scale(0.5)
}

/// Solves `M X = rhs` by LU with partial pivoting.
pub fn solve_linear(m: &RealMatrix, rhs: &RealMatrix) -> Result<RealMatrix> {
    let n = ensure_square(m)?;
    if rhs.nrows() != n {
        return Err(Error::DimensionMismatch {
            context: "solve_linear right-hand side rows",
            expected: n,
            found: rhs.nrows(),
        });
    }
    ensure_finite(m)?;
    ensure_finite(rhs)?;
    if n == 0 {
        return Ok(rhs.clone());
    }
    let scale = m.amax();
    let lu = m.clone().lu();
    let u = lu.u();
    let pivot = u.diagonal().iter().fold(f64::INFINITY, |acc, p| acc.min(p.abs()));
    if scale == 0.0 || pivot <= tol::SINGULAR_PIVOT * scale {
        return Err(Error::SingularMatrix { pivot });
    }
    lu.solve(rhs).ok_or(Error::SingularMatrix { pivot })
}

/// Lower Cholesky factor `L` with `L Lᵀ = M`.
///
/// Fails with [`Error::NotPositiveDefinite`] carrying the 1-based index of the
/// first leading minor that is not positive.
pub fn cholesky(m: &RealMatrix) -> Result<RealMatrix> {
    let n = ensure_square(m)?;
    ensure_finite(m)?;
    let residual = symmetric_residual(m);
    if residual > tol::SYMMETRIC {
        return Err(Error::Asymmetric { residual });
    }
    let mut l = RealMatrix::zeros(n, n);
    for j in 0..n {
        let mut diag = m[(j, j)];
        for k in 0..j {
            diag -= l[(j, k)] * l[(j, k)];
        }
        if diag.is_nan() || diag <= 0.0 {
            return Err(Error::NotPositiveDefinite { index: j + 1 });
        }
        let ljj = diag.sqrt();
        l[(j, j)] = ljj;
        for i in (j + 1)..n {
            let mut s = 0.5 * (m[(i, j)] + m[(j, i)]);
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(l)
}

/// Orthonormal basis (as columns) of the numerical kernel of `m`.
///
/// A right singular vector belongs to the kernel when its singular value is
/// at most `tol·‖M‖_F`, so every returned column satisfies
/// `‖Mx‖ ≤ tol·‖M‖_F`.
pub fn nullspace(m: &RealMatrix, tol: f64) -> Result<RealMatrix> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "nullspace tolerance must be positive, got {tol}"
        )));
    }
    ensure_finite(m)?;
    let (rows, cols) = m.shape();
    if cols == 0 {
        return Ok(RealMatrix::zeros(0, 0));
    }
    let threshold = tol * m.norm();
    // Pad to at least square so that the SVD yields a full right basis.
    let padded = if rows < cols {
        let mut p = RealMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let kernel: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= threshold)
        .collect();
    let mut basis = RealMatrix::zeros(cols, kernel.len());
    for (dst, &i) in kernel.iter().enumerate() {
        basis.set_column(dst, &v_t.row(i).transpose());
    }
    Ok(basis)
}
