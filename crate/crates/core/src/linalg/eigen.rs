use super::{rel_tol, DenseMatrix, Lu, Tolerances};
use crate::error::{Error, Result};
use crate::num::{lit, norm2, to_f64, Real};

/// Real eigendecomposition `A = R diag(λ) L` with `L R = I`.
#[derive(Debug, Clone)]
pub struct Eigen<T> {
    /// Ascending eigenvalues.
    pub values: Vec<T>,
    /// Column `p` is the right eigenvector for `values[p]`.
    pub right: DenseMatrix<T>,
    /// Row `p` is the left eigenvector for `values[p]`.
    pub left: DenseMatrix<T>,
}

/// Eigenvalues of a square matrix with real spectrum, sorted ascending.
pub fn eigenvalues_general<T: Real>(a: &DenseMatrix<T>) -> Result<Vec<T>> {
    eigenvalues_general_with(a, &Tolerances::default())
}

pub fn eigenvalues_general_with<T: Real>(a: &DenseMatrix<T>, tol: &Tolerances) -> Result<Vec<T>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.rows(), found: a.cols() });
    }
    if !a.is_finite() {
        return Err(Error::NonFiniteEntry);
    }
    let n = a.rows();
    // 1-based working copy, matching the classical formulation of the algorithms
    let mut h = vec![vec![T::zero(); n + 1]; n + 1];
    for i in 0..n {
        for j in 0..n {
            h[i + 1][j + 1] = a[(i, j)];
        }
    }
    balance(&mut h, n);
    hessenberg(&mut h, n);
    for i in 1..=n {
        for j in 1..i.saturating_sub(1) {
            h[i][j] = T::zero();
        }
    }
    let (wr, wi) = hqr(&mut h, n, tol.max_qr_sweeps)?;
    let radius = wr
        .iter()
        .zip(&wi)
        .map(|(&r, &i)| (r * r + i * i).sqrt())
        .fold(T::zero(), T::max);
    let cut = rel_tol::<T>(tol.imag_cut) * radius;
    if let Some(&im) = wi.iter().find(|x| x.abs() > cut) {
        return Err(Error::HyperbolicityViolation {
            imag: to_f64(im.abs()),
            radius: to_f64(radius),
        });
    }
    let mut values = wr;
    values.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(values)
}

/// Full eigendecomposition of a diagonalizable matrix with real spectrum.
///
/// Right eigenvectors are found by inverse iteration (orthogonalized inside
/// clusters of equal eigenvalues), normalized to unit length with their
/// largest component positive. Left eigenvectors are the rows of `R⁻¹`.
pub fn eigen_general<T: Real>(a: &DenseMatrix<T>) -> Result<Eigen<T>> {
    eigen_general_with(a, &Tolerances::default())
}

pub fn eigen_general_with<T: Real>(a: &DenseMatrix<T>, tol: &Tolerances) -> Result<Eigen<T>> {
    let values = eigenvalues_general_with(a, tol)?;
    let n = values.len();
    let anorm = a.norm_inf().max(T::min_positive_value());
    let radius = values.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    let cluster_gap = rel_tol::<T>(tol.cluster) * radius.max(T::one());

    let mut vecs: Vec<Vec<T>> = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[end] - values[end - 1] <= cluster_gap {
            end += 1;
        }
        let mean = values[start..end].iter().copied().sum::<T>() / lit((end - start) as f64);
        let cluster = inverse_iteration(a, mean, end - start, anorm)?;
        vecs.extend(cluster);
        start = end;
    }

    let right = DenseMatrix::from_columns(&vecs);
    let left = Lu::factor(&right)
        .map_err(|_| Error::NotDiagonalizable)?
        .inverse();

    // Reject defective input: the computed basis must actually diagonalize A.
    let check = rel_tol::<T>(1e-6) * anorm;
    for (p, r) in vecs.iter().enumerate() {
        let ar = a.mul_vec(r);
        let err = ar
            .iter()
            .zip(r)
            .fold(T::zero(), |m, (&x, &y)| m.max((x - values[p] * y).abs()));
        if !(err <= check) {
            return Err(Error::NotDiagonalizable);
        }
    }
    if !left.is_finite() {
        return Err(Error::NotDiagonalizable);
    }
    Ok(Eigen { values, right, left })
}

fn inverse_iteration<T: Real>(a: &DenseMatrix<T>, lambda: T, count: usize, anorm: T) -> Result<Vec<Vec<T>>> {
    let n = a.rows();
    // Nudge the shift off the eigenvalue so the factorization stays regular.
    let shift = lambda + anorm * T::epsilon() * lit(64.0);
    let mut m = a.clone();
    for i in 0..n {
        m[(i, i)] = m[(i, i)] - shift;
    }
    let lu = factor_regularized(&m, anorm);
    let mut out: Vec<Vec<T>> = Vec::with_capacity(count);
    for k in 0..count {
        let mut x: Vec<T> = (0..n).map(|i| start_component(i, k)).collect();
        orthogonalize(&mut x, &out);
        normalize(&mut x);
        for _ in 0..4 {
            x = lu.solve(&x)?;
            orthogonalize(&mut x, &out);
            if !normalize(&mut x) {
                return Err(Error::NotDiagonalizable);
            }
        }
        // fix sign: largest component positive
        let (imax, _) = x
            .iter()
            .enumerate()
            .fold((0, T::zero()), |b, (i, &v)| if v.abs() > b.1 { (i, v.abs()) } else { b });
        if x[imax] < T::zero() {
            x.iter_mut().for_each(|v| *v = -*v);
        }
        out.push(x);
    }
    Ok(out)
}

fn factor_regularized<T: Real>(m: &DenseMatrix<T>, anorm: T) -> Lu<T> {
    Lu::factor_perturbed(m, anorm * T::epsilon()).expect("square matrix")
}

fn start_component<T: Real>(i: usize, k: usize) -> T {
    // Deterministic, non-degenerate starting vectors.
    let h = ((i as u64 + 1) * 2654435761 + (k as u64 + 1) * 40503) % 1000;
    lit(0.5 + h as f64 / 1000.0)
}

fn orthogonalize<T: Real>(x: &mut [T], basis: &[Vec<T>]) {
    for _ in 0..2 {
        for b in basis {
            let c: T = x.iter().zip(b).map(|(&p, &q)| p * q).sum();
            for (xi, &bi) in x.iter_mut().zip(b) {
                *xi = *xi - c * bi;
            }
        }
    }
}

fn normalize<T: Real>(x: &mut [T]) -> bool {
    let n = norm2(x);
    if !(n > T::zero()) || !n.is_finite() {
        return false;
    }
    x.iter_mut().for_each(|v| *v = *v / n);
    true
}

fn balance<T: Real>(a: &mut [Vec<T>], n: usize) {
    let radix: T = lit(2.0);
    let sqrdx = radix * radix;
    let mut done = false;
    while !done {
        done = true;
        for i in 1..=n {
            let mut r = T::zero();
            let mut c = T::zero();
            for j in 1..=n {
                if j != i {
                    c = c + a[j][i].abs();
                    r = r + a[i][j].abs();
                }
            }
            if c != T::zero() && r != T::zero() {
                let mut g = r / radix;
                let mut f = T::one();
                let s = c + r;
                while c < g {
                    f = f * radix;
                    c = c * sqrdx;
                }
                g = r * radix;
                while c > g {
                    f = f / radix;
                    c = c / sqrdx;
                }
                if (c + r) / f < lit::<T>(0.95) * s {
                    done = false;
                    let g = T::one() / f;
                    for j in 1..=n {
                        a[i][j] = a[i][j] * g;
                    }
                    for row in a.iter_mut().skip(1).take(n) {
                        row[i] = row[i] * f;
                    }
                }
            }
        }
    }
}

/// Reduction to upper Hessenberg form by stabilized elementary similarity transforms.
fn hessenberg<T: Real>(a: &mut [Vec<T>], n: usize) {
    for m in 2..n {
        let mut x = T::zero();
        let mut i = m;
        for j in m..=n {
            if a[j][m - 1].abs() > x.abs() {
                x = a[j][m - 1];
                i = j;
            }
        }
        if i != m {
            for j in m - 1..=n {
                let t = a[i][j];
                a[i][j] = a[m][j];
                a[m][j] = t;
            }
            for row in a.iter_mut().skip(1).take(n) {
                row.swap(i, m);
            }
        }
        if x != T::zero() {
            for i in m + 1..=n {
                let mut y = a[i][m - 1];
                if y != T::zero() {
                    y = y / x;
                    a[i][m - 1] = y;
                    for j in m..=n {
                        a[i][j] = a[i][j] - y * a[m][j];
                    }
                    for j in 1..=n {
                        a[j][m] = a[j][m] + y * a[j][i];
                    }
                }
            }
        }
    }
}

fn sign<T: Real>(a: T, b: T) -> T {
    if b >= T::zero() {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix (1-based).
#[allow(clippy::many_single_char_names, unused_assignments)]
fn hqr<T: Real>(a: &mut [Vec<T>], n: usize, max_its: usize) -> Result<(Vec<T>, Vec<T>)> {
    let zero = T::zero();
    let mut wr = vec![zero; n + 1];
    let mut wi = vec![zero; n + 1];
    let mut anorm = zero;
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm = anorm + a[i][j].abs();
        }
    }
    let mut nn = n;
    let mut t = zero;
    let (mut p, mut q, mut r) = (zero, zero, zero);
    let (mut x, mut y, mut z) = (zero, zero, zero);
    let mut w = zero;
    while nn >= 1 {
        let mut its = 0;
        loop {
            let mut l = nn;
            while l >= 2 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == zero {
                    s = anorm;
                }
                if a[l][l - 1].abs() + s == s {
                    a[l][l - 1] = zero;
                    break;
                }
                l -= 1;
            }
            x = a[nn][nn];
            if l == nn {
                wr[nn] = x + t;
                wi[nn] = zero;
                nn -= 1;
            } else {
                y = a[nn - 1][nn - 1];
                w = a[nn][nn - 1] * a[nn - 1][nn];
                if l == nn - 1 {
                    p = lit::<T>(0.5) * (y - x);
                    q = p * p + w;
                    z = q.abs().sqrt();
                    x = x + t;
                    if q >= zero {
                        z = p + sign(z, p);
                        wr[nn - 1] = x + z;
                        wr[nn] = x + z;
                        if z != zero {
                            wr[nn] = x - w / z;
                        }
                        wi[nn - 1] = zero;
                        wi[nn] = zero;
                    } else {
                        wr[nn - 1] = x + p;
                        wr[nn] = x + p;
                        wi[nn - 1] = -z;
                        wi[nn] = z;
                    }
                    nn -= 2;
                } else {
                    if its == max_its {
                        return Err(Error::NonConvergence {
                            iterations: its,
                            residual: to_f64(a[nn][nn - 1].abs()),
                            last_iterate: vec![],
                        });
                    }
                    if its > 0 && its % 10 == 0 {
                        // exceptional shift
                        t = t + x;
                        for i in 1..=nn {
                            a[i][i] = a[i][i] - x;
                        }
                        let s = a[nn][nn - 1].abs() + a[nn - 1][nn - 2].abs();
                        x = lit::<T>(0.75) * s;
                        y = x;
                        w = lit::<T>(-0.4375) * s * s;
                    }
                    its += 1;
                    let mut m = nn - 2;
                    loop {
                        z = a[m][m];
                        r = x - z;
                        let s = y - z;
                        p = (r * s - w) / a[m + 1][m] + a[m][m + 1];
                        q = a[m + 1][m + 1] - z - r - s;
                        r = a[m + 2][m + 1];
                        let s = p.abs() + q.abs() + r.abs();
                        p = p / s;
                        q = q / s;
                        r = r / s;
                        if m == l {
                            break;
                        }
                        let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                        let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                        if u + v == v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in m + 2..=nn {
                        a[i][i - 2] = zero;
                        if i != m + 2 {
                            a[i][i - 3] = zero;
                        }
                    }
                    let mut k = m;
                    while k < nn {
                        if k != m {
                            p = a[k][k - 1];
                            q = a[k + 1][k - 1];
                            r = zero;
                            if k != nn - 1 {
                                r = a[k + 2][k - 1];
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != zero {
                                p = p / x;
                                q = q / x;
                                r = r / x;
                            }
                        }
                        let s = sign((p * p + q * q + r * r).sqrt(), p);
                        if s != zero {
                            if k == m {
                                if l != m {
                                    a[k][k - 1] = -a[k][k - 1];
                                }
                            } else {
                                a[k][k - 1] = -s * x;
                            }
                            p = p + s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q = q / p;
                            r = r / p;
                            for j in k..=nn {
                                p = a[k][j] + q * a[k + 1][j];
                                if k != nn - 1 {
                                    p = p + r * a[k + 2][j];
                                    a[k + 2][j] = a[k + 2][j] - p * z;
                                }
                                a[k + 1][j] = a[k + 1][j] - p * y;
                                a[k][j] = a[k][j] - p * x;
                            }
                            let mmin = if nn < k + 3 { nn } else { k + 3 };
                            for i in l..=mmin {
                                p = x * a[i][k] + y * a[i][k + 1];
                                if k != nn - 1 {
                                    p = p + z * a[i][k + 2];
                                    a[i][k + 2] = a[i][k + 2] - p * r;
                                }
                                a[i][k + 1] = a[i][k + 1] - p * q;
                                a[i][k] = a[i][k] - p;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if nn < 2 || l + 1 >= nn {
                break;
            }
        }
    }
    wr.remove(0);
    wi.remove(0);
    Ok((wr, wi))
}
