use super::{rel_tol, DenseMatrix, Tolerances};
use crate::error::{Error, Result};
use crate::num::{to_f64, Real};

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct Lu<T> {
    n: usize,
    lu: Vec<T>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    pub fn factor(a: &DenseMatrix<T>) -> Result<Self> {
        Self::factor_with(a, &Tolerances::default())
    }

    pub fn factor_with(a: &DenseMatrix<T>, tol: &Tolerances) -> Result<Self> {
        let threshold = rel_tol::<T>(tol.singular_pivot) * a.norm_inf();
        Self::factor_impl(a, threshold, None)
    }

    /// Factorization that never fails: pivots smaller than `floor` in
    /// magnitude are replaced by `±floor`. Used for shifted inverse iteration.
    pub fn factor_perturbed(a: &DenseMatrix<T>, floor: T) -> Result<Self> {
        Self::factor_impl(a, T::zero(), Some(floor))
    }

    fn factor_impl(a: &DenseMatrix<T>, threshold: T, floor: Option<T>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch {
                expected: a.rows(),
                found: a.cols(),
            });
        }
        let n = a.rows();
        let mut lu = a.as_slice().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, lu[i * n + k].abs()))
                .fold((k, -T::one()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if let Some(floor) = floor {
                if p != k {
                    for j in 0..n {
                        lu.swap(k * n + j, p * n + j);
                    }
                    perm.swap(k, p);
                }
                if pivot < floor {
                    lu[k * n + k] = if lu[k * n + k] < T::zero() { -floor } else { floor };
                }
                Self::eliminate(&mut lu, n, k);
                continue;
            }
            if pivot <= threshold || pivot == T::zero() {
                return Err(Error::SingularMatrix {
                    pivot: to_f64(pivot),
                    threshold: to_f64(threshold),
                });
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            Self::eliminate(&mut lu, n, k);
        }
        Ok(Self { n, lu, perm })
    }

    fn eliminate(lu: &mut [T], n: usize, k: usize) {
        let d = lu[k * n + k];
        for i in k + 1..n {
            let f = lu[i * n + k] / d;
            lu[i * n + k] = f;
            if f != T::zero() {
                for j in k + 1..n {
                    lu[i * n + j] = lu[i * n + j] - f * lu[k * n + j];
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        let n = self.n;
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s = s - self.lu[i * n + j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s = s - self.lu[i * n + j] * x[j];
            }
            x[i] = s / self.lu[i * n + i];
        }
        Ok(x)
    }

    pub fn inverse(&self) -> DenseMatrix<T> {
        let n = self.n;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![T::zero(); n];
            e[j] = T::one();
            cols.push(self.solve(&e).expect("dimension checked"));
        }
        DenseMatrix::from_columns(&cols)
    }
}

/// Solves `A x = b` for square `A`.
pub fn linear_solve<T: Real>(a: &DenseMatrix<T>, b: &[T]) -> Result<Vec<T>> {
    linear_solve_with(a, b, &Tolerances::default())
}

pub fn linear_solve_with<T: Real>(a: &DenseMatrix<T>, b: &[T], tol: &Tolerances) -> Result<Vec<T>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: b.len(),
        });
    }
    Lu::factor_with(a, tol)?.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let i2 = DenseMatrix::<f64>::identity(2);
        assert_eq!(linear_solve(&i2, &[5.0, -2.0]).unwrap(), vec![5.0, -2.0]);
        let d = DenseMatrix::diag(&[2.0, 4.0]);
        assert_eq!(linear_solve(&d, &[2.0, 8.0]).unwrap(), vec![1.0, 2.0]);
        let s = DenseMatrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap();
        assert!(matches!(linear_solve(&s, &[1.0, 0.0]), Err(Error::SingularMatrix { .. })));
    }

    #[test]
    fn pivoting_needed() {
        let a = DenseMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert_eq!(linear_solve(&a, &[3.0, 4.0]).unwrap(), vec![4.0, 3.0]);
    }

    #[test]
    fn inverse_roundtrip() {
        let a = DenseMatrix::from_rows(&[[4.0, 1.0, 0.5], [1.0, 3.0, -1.0], [0.0, 2.0, 5.0]]).unwrap();
        let inv = Lu::factor(&a).unwrap().inverse();
        let p = a.matmul(&inv);
        let e = p.sub(&DenseMatrix::identity(3)).max_abs();
        assert!(e < 1e-14, "{e}");
    }

    #[test]
    fn works_in_f32() {
        let a = DenseMatrix::from_rows(&[[2.0f32, 1.0], [1.0, 3.0]]).unwrap();
        let x = linear_solve(&a, &[3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-6 && (x[1] - 1.4).abs() < 1e-6);
    }
}
