use super::{rel_tol, DenseMatrix, Tolerances};
use crate::error::{Error, Result};
use crate::num::{norm2, Real};

/// Result of an over-determined least-squares solve.
#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquaresReport<T> {
    pub solution: Vec<T>,
    /// `‖A x − b‖₂`
    pub residual_norm: T,
    pub effective_rank: usize,
    /// Ratio of the largest to the smallest retained scale (infinite when rank 0).
    pub condition_estimate: T,
}

impl<T: Real> LeastSquaresReport<T> {
    pub fn is_rank_deficient(&self) -> bool {
        self.effective_rank < self.solution.len()
    }
}

/// Thin singular value decomposition `A = U Σ Vᵀ` with `U` of size m×n.
#[derive(Debug, Clone)]
pub struct Svd<T> {
    pub u: DenseMatrix<T>,
    pub sigma: Vec<T>,
    pub v: DenseMatrix<T>,
}

/// Minimizes `‖A x − b‖₂`, returning the minimum-norm minimizer when `A` is
/// numerically rank deficient.
pub fn least_squares<T: Real>(a: &DenseMatrix<T>, b: &[T]) -> Result<LeastSquaresReport<T>> {
    least_squares_with(a, b, &Tolerances::default())
}

pub fn least_squares_with<T: Real>(
    a: &DenseMatrix<T>,
    b: &[T],
    tol: &Tolerances,
) -> Result<LeastSquaresReport<T>> {
    let (m, n) = (a.rows(), a.cols());
    if b.len() != m {
        return Err(Error::DimensionMismatch { expected: m, found: b.len() });
    }
    if m < n {
        return Err(Error::InvalidShape { rows: m, cols: n });
    }

    // Householder QR with column pivoting, applied in place to a copy.
    let mut r = a.clone();
    let mut qtb = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let col_norm = |r: &DenseMatrix<T>, j: usize| (k..m).map(|i| r[(i, j)] * r[(i, j)]).sum::<T>();
        let mut p = k;
        let mut best = col_norm(&r, k);
        for j in k + 1..n {
            let c = col_norm(&r, j);
            if c > best {
                best = c;
                p = j;
            }
        }
        if p != k {
            for i in 0..m {
                let t = r[(i, k)];
                r[(i, k)] = r[(i, p)];
                r[(i, p)] = t;
            }
            perm.swap(k, p);
        }
        let mut alpha = best.sqrt();
        if alpha == T::zero() {
            continue;
        }
        if r[(k, k)] > T::zero() {
            alpha = -alpha;
        }
        let mut v: Vec<T> = (k..m).map(|i| r[(i, k)]).collect();
        v[0] = v[0] - alpha;
        let vv: T = v.iter().map(|&x| x * x).sum();
        if vv == T::zero() {
            continue;
        }
        let two = T::one() + T::one();
        for j in k..n {
            let s: T = v.iter().enumerate().map(|(t, &vi)| vi * r[(k + t, j)]).sum();
            let f = two * s / vv;
            for (t, &vi) in v.iter().enumerate() {
                r[(k + t, j)] = r[(k + t, j)] - f * vi;
            }
        }
        let s: T = v.iter().enumerate().map(|(t, &vi)| vi * qtb[k + t]).sum();
        let f = two * s / vv;
        for (t, &vi) in v.iter().enumerate() {
            qtb[k + t] = qtb[k + t] - f * vi;
        }
    }

    let r00 = r[(0, 0)].abs();
    let rmin = (0..n).map(|k| r[(k, k)].abs()).fold(T::infinity(), T::min);
    if r00 == T::zero() {
        return Ok(LeastSquaresReport {
            solution: vec![T::zero(); n],
            residual_norm: norm2(b),
            effective_rank: 0,
            condition_estimate: T::infinity(),
        });
    }
    if rmin < rel_tol::<T>(tol.qr_fallback) * r00 {
        return Ok(svd_solve(a, b, tol));
    }

    let mut z = vec![T::zero(); n];
    for k in (0..n).rev() {
        let mut s = qtb[k];
        for j in k + 1..n {
            s = s - r[(k, j)] * z[j];
        }
        z[k] = s / r[(k, k)];
    }
    let mut x = vec![T::zero(); n];
    for (k, &p) in perm.iter().enumerate() {
        x[p] = z[k];
    }
    Ok(LeastSquaresReport {
        residual_norm: residual(a, &x, b),
        solution: x,
        effective_rank: n,
        condition_estimate: r00 / rmin,
    })
}

fn residual<T: Real>(a: &DenseMatrix<T>, x: &[T], b: &[T]) -> T {
    let ax = a.mul_vec(x);
    let d: Vec<T> = ax.iter().zip(b).map(|(&p, &q)| p - q).collect();
    norm2(&d)
}

fn svd_solve<T: Real>(a: &DenseMatrix<T>, b: &[T], tol: &Tolerances) -> LeastSquaresReport<T> {
    let n = a.cols();
    let svd = svd_jacobi(a, 60);
    let smax = svd.sigma.iter().copied().fold(T::zero(), T::max);
    let cut = rel_tol::<T>(tol.rank_cut) * smax;
    let mut x = vec![T::zero(); n];
    let mut rank = 0;
    let mut smin = T::infinity();
    for (j, &s) in svd.sigma.iter().enumerate() {
        if s <= cut || s == T::zero() {
            continue;
        }
        rank += 1;
        smin = smin.min(s);
        let c: T = (0..a.rows()).map(|i| svd.u[(i, j)] * b[i]).sum::<T>() / s;
        for (i, xi) in x.iter_mut().enumerate() {
            *xi = *xi + c * svd.v[(i, j)];
        }
    }
    LeastSquaresReport {
        residual_norm: residual(a, &x, b),
        solution: x,
        effective_rank: rank,
        condition_estimate: if rank == 0 { T::infinity() } else { smax / smin },
    }
}

/// One-sided Jacobi SVD for `rows ≥ cols`.
pub fn svd_jacobi<T: Real>(a: &DenseMatrix<T>, max_sweeps: usize) -> Svd<T> {
    let (m, n) = (a.rows(), a.cols());
    let mut u = a.clone();
    let mut v = DenseMatrix::<T>::identity(n);
    let eps = T::epsilon();
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (T::zero(), T::zero(), T::zero());
                for i in 0..m {
                    alpha = alpha + u[(i, p)] * u[(i, p)];
                    beta = beta + u[(i, q)] * u[(i, q)];
                    gamma = gamma + u[(i, p)] * u[(i, q)];
                }
                if gamma == T::zero() || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (gamma + gamma);
                let sgn = if zeta >= T::zero() { T::one() } else { -T::one() };
                let t = sgn / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let (up, uq) = (u[(i, p)], u[(i, q)]);
                    u[(i, p)] = c * up - s * uq;
                    u[(i, q)] = s * up + c * uq;
                }
                for i in 0..n {
                    let (vp, vq) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = c * vp - s * vq;
                    v[(i, q)] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sigma = vec![T::zero(); n];
    for j in 0..n {
        let s = (0..m).map(|i| u[(i, j)] * u[(i, j)]).sum::<T>().sqrt();
        sigma[j] = s;
        if s > T::zero() {
            for i in 0..m {
                u[(i, j)] = u[(i, j)] / s;
            }
        }
    }
    Svd { u, sigma, v }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_consistent() {
        let a = DenseMatrix::<f64>::from_rows(&[[2.0, 1.0], [1.0, 3.0]]).unwrap();
        let r = least_squares(&a, &[3.0, 4.0]).unwrap();
        assert!((r.solution[0] - 1.0).abs() < 1e-14 && (r.solution[1] - 1.0).abs() < 1e-14);
        assert!(r.residual_norm < 1e-14);
        assert_eq!(r.effective_rank, 2);
    }

    #[test]
    fn single_column_average() {
        // minimize x² + (x − 2)²  ⇒  x = 1, residual √2
        let a = DenseMatrix::<f64>::from_rows(&[[1.0], [1.0]]).unwrap();
        let r = least_squares(&a, &[0.0, 2.0]).unwrap();
        assert!((r.solution[0] - 1.0).abs() < 1e-15);
        assert!((r.residual_norm - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rank_deficient_min_norm() {
        // columns identical: minimum-norm solution splits the weight evenly
        let a = DenseMatrix::<f64>::from_rows(&[[1.0, 1.0], [1.0, 1.0], [1.0, 1.0]]).unwrap();
        let r = least_squares(&a, &[2.0, 2.0, 2.0]).unwrap();
        assert_eq!(r.effective_rank, 1);
        assert!(r.is_rank_deficient());
        assert!((r.solution[0] - 1.0).abs() < 1e-12 && (r.solution[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_matrix() {
        let a = DenseMatrix::<f64>::zeros(4, 2);
        let r = least_squares(&a, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(r.solution, vec![0.0, 0.0]);
        assert_eq!(r.effective_rank, 0);
        assert_eq!(r.residual_norm, 1.0);
    }

    #[test]
    fn shape_errors() {
        let a = DenseMatrix::<f64>::zeros(1, 2);
        assert!(least_squares(&a, &[1.0]).is_err());
        let a = DenseMatrix::<f64>::zeros(2, 1);
        assert!(least_squares(&a, &[1.0]).is_err());
    }

    #[test]
    fn svd_reconstructs() {
        let a = DenseMatrix::<f64>::from_rows(&[[3.0, 1.0], [1.0, 3.0], [0.0, 2.0]]).unwrap();
        let s = svd_jacobi(&a, 60);
        let us = DenseMatrix::from_fn(3, 2, |i, j| s.u[(i, j)] * s.sigma[j]);
        let rec = us.matmul(&s.v.transpose());
        assert!(rec.sub(&a).max_abs() < 1e-13);
    }
}
