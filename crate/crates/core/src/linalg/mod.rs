//! Small dense linear algebra.
//!
//! Everything here targets the handful-of-unknowns regime (M ≤ 16) that the
//! face-local kernels need: row-major storage, LU with partial pivoting,
//! pivoted QR least squares with a Jacobi SVD fallback, and a real
//! eigensolver for non-symmetric matrices.

mod eigen;
mod lstsq;
mod lu;

use std::fmt;
use std::ops::{Index, IndexMut};

pub use eigen::{eigen_general, eigen_general_with, eigenvalues_general, eigenvalues_general_with, Eigen};
pub use lstsq::{least_squares, least_squares_with, svd_jacobi, LeastSquaresReport, Svd};
pub use lu::{linear_solve, linear_solve_with, Lu};

use crate::error::{Error, Result};
use crate::num::{lit, Real};

/// Numerical thresholds used by the linear algebra kernels.
///
/// The defaults are the module constants; callers that need different
/// behaviour pass a modified copy to the `*_with` variants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// LU pivots below `singular_pivot * ‖A‖∞` are treated as zero.
    pub singular_pivot: f64,
    /// Singular values below `rank_cut * σ_max` are truncated.
    pub rank_cut: f64,
    /// Pivoted QR hands over to the SVD when `|R_kk| < qr_fallback * |R_00|`.
    pub qr_fallback: f64,
    /// Imaginary parts above `imag_cut * spectral radius` are rejected.
    pub imag_cut: f64,
    /// Eigenvalues closer than `cluster * max(1, spectral radius)` share an eigenspace.
    pub cluster: f64,
    /// Maximum shifted-QR sweeps per eigenvalue.
    pub max_qr_sweeps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            singular_pivot: 1e-14,
            rank_cut: 1e-10,
            qr_fallback: 1e-8,
            imag_cut: 1e-8,
            cluster: 1e-8,
            max_qr_sweeps: 60,
        }
    }
}

/// Converts a relative tolerance to the scalar type, never letting it drop
/// below a small multiple of machine epsilon (matters for `f32`).
pub(crate) fn rel_tol<T: Real>(tol: f64) -> T {
    lit::<T>(tol).max(T::epsilon() * lit(8.0))
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> DenseMatrix<T> {
    /// Builds a matrix from row-major entries, validating shape and finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidShape { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if !data.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFiniteEntry);
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from a slice of equal-length rows.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(r, c, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn diag(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<T>]) -> Self {
        let n = cols.len();
        let m = cols.first().map_or(0, Vec::len);
        Self::from_fn(m, n, |i, j| cols[j][i])
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Matrix product. Panics on incompatible shapes.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)] + a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Product with a vector. Panics on a length mismatch; see [`mat_vec`]
    /// for the checked version.
    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(self.cols, x.len(), "mul_vec length mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// Row vector times matrix, `xᵀ A`.
    pub fn vec_mul(&self, x: &[T]) -> Vec<T> {
        assert_eq!(self.rows, x.len(), "vec_mul length mismatch");
        let mut out = vec![T::zero(); self.cols];
        for (i, &xi) in x.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o = *o + xi * a;
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| s * a).collect(),
        }
    }

    /// `s I − self`
    pub fn shifted_neg(&self, s: T) -> Self {
        assert!(self.is_square());
        let mut out = self.scale(-T::one());
        for i in 0..self.rows {
            out[(i, i)] = out[(i, i)] + s;
        }
        out
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> T {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.abs()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn cast<U: Real>(&self) -> DenseMatrix<U> {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| lit(crate::num::to_f64(x))).collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for DenseMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Debug> fmt::Debug for DenseMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

/// Checked matrix-vector product.
pub fn mat_vec<T: Real>(a: &DenseMatrix<T>, x: &[T]) -> Result<Vec<T>> {
    if a.cols() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: a.cols(),
            found: x.len(),
        });
    }
    Ok(a.mul_vec(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_validates() {
        assert!(DenseMatrix::<f64>::new(0, 2, vec![]).is_err());
        assert!(DenseMatrix::new(2, 2, vec![1.0, 2.0, 3.0]).is_err());
        assert_eq!(
            DenseMatrix::new(1, 2, vec![1.0, f64::NAN]),
            Err(Error::NonFiniteEntry)
        );
        assert!(DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn mat_vec_examples() {
        let i3 = DenseMatrix::<f64>::identity(3);
        assert_eq!(mat_vec(&i3, &[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
        let z = DenseMatrix::<f64>::zeros(2, 2);
        assert_eq!(mat_vec(&z, &[4.0, -7.0]).unwrap(), vec![0.0, 0.0]);
        let a = DenseMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        assert_eq!(mat_vec(&a, &[1.0, 1.0]).unwrap(), vec![3.0, 7.0]);
        assert!(matches!(
            mat_vec(&a, &[1.0]),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn products_and_norms() {
        let a = DenseMatrix::from_rows(&[[1.0, -2.0], [3.0, 4.0]]).unwrap();
        let b = a.matmul(&DenseMatrix::identity(2));
        assert_eq!(a, b);
        assert_eq!(a.norm_inf(), 7.0);
        assert_eq!(a.transpose()[(0, 1)], 3.0);
        assert_eq!(a.vec_mul(&[1.0, 1.0]), vec![4.0, 2.0]);
        let s = a.shifted_neg(1.0);
        assert_eq!(s.row(0), &[0.0, 2.0]);
        assert_eq!(a.vstack(&a).rows(), 4);
    }
}
