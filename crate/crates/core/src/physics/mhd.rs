//! Ideal magnetohydrodynamics in Gaussian units with a constant normal field.
//!
//! Conserved `(ρ, ρvx, ρvy, ρvz, E, By, Bz)`, primitive
//! `(ρ, vx, vy, vz, p, By, Bz)`, `E = p/(γ−1) + ρv²/2 + B²/8π`.

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, Lu};
use crate::num::{lit, Real};
use crate::system::{check_len, Degeneracy, EigenField, HyperbolicSystem, WaveSubset};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MhdParams {
    pub gamma: f64,
    pub bx: f64,
}

impl Default for MhdParams {
    fn default() -> Self {
        Self { gamma: 5.0 / 3.0, bx: 0.0 }
    }
}

#[derive(Debug, Clone)]
pub struct Mhd<T> {
    gamma: T,
    bx: T,
    params: MhdParams,
}

struct Speeds<T> {
    a2: T,
    cf: T,
    cs: T,
    ca: T,
}

impl<T: Real> Mhd<T> {
    pub fn new(params: MhdParams) -> Result<Self> {
        if !(params.gamma > 1.0) || !params.gamma.is_finite() {
            return Err(Error::InvalidParameter(format!("gamma must exceed 1, got {}", params.gamma)));
        }
        if !params.bx.is_finite() {
            return Err(Error::InvalidParameter("bx must be finite".into()));
        }
        Ok(Self {
            gamma: lit(params.gamma),
            bx: lit(params.bx),
            params,
        })
    }

    fn k() -> T {
        T::one() / (lit::<T>(4.0) * T::PI())
    }

    pub fn pressure(&self, u: &[T]) -> T {
        let ke = (u[1] * u[1] + u[2] * u[2] + u[3] * u[3]) / (lit::<T>(2.0) * u[0]);
        let b2 = self.bx * self.bx + u[5] * u[5] + u[6] * u[6];
        (self.gamma - T::one()) * (u[4] - ke - b2 * Self::k() / lit(2.0))
    }

    fn speeds(&self, rho: T, p: T, by: T, bz: T) -> Speeds<T> {
        let k = Self::k();
        let a2 = (self.gamma * p / rho).abs();
        let bx2 = k * self.bx * self.bx / rho;
        let b2 = bx2 + k * (by * by + bz * bz) / rho;
        let sum = a2 + b2;
        let disc = (sum * sum - lit::<T>(4.0) * a2 * bx2).max(T::zero()).sqrt();
        let cf2 = (sum + disc) / lit(2.0);
        let cs2 = ((sum - disc) / lit(2.0)).max(T::zero());
        Speeds {
            a2,
            cf: cf2.sqrt(),
            cs: cs2.sqrt(),
            ca: bx2.sqrt(),
        }
    }

    /// Fast magnetosonic speed.
    pub fn fast_speed(&self, u: &[T]) -> T {
        self.speeds(u[0], self.pressure(u), u[5], u[6]).cf
    }
}

impl<T: Real> HyperbolicSystem<T> for Mhd<T> {
    fn name(&self) -> &str {
        "mhd"
    }

    fn num_vars(&self) -> usize {
        7
    }

    fn flux(&self, u: &[T]) -> Vec<T> {
        let k = Self::k();
        let rho = u[0];
        let (vx, vy, vz) = (u[1] / rho, u[2] / rho, u[3] / rho);
        let (bx, by, bz) = (self.bx, u[5], u[6]);
        let p = self.pressure(u);
        let pm = k * (bx * bx + by * by + bz * bz) / lit(2.0);
        let vb = vx * bx + vy * by + vz * bz;
        vec![
            u[1],
            u[1] * vx + p + pm - k * bx * bx,
            u[2] * vx - k * bx * by,
            u[3] * vx - k * bx * bz,
            (u[4] + p + pm) * vx - k * bx * vb,
            vx * by - vy * bx,
            vx * bz - vz * bx,
        ]
    }

    fn flux_jacobian(&self, u: &[T]) -> DenseMatrix<T> {
        let k = Self::k();
        let g = self.gamma;
        let g1 = g - T::one();
        let w = self.cons_to_prim(u);
        let (rho, vx, vy, vz, p, by, bz) = (w[0], w[1], w[2], w[3], w[4], w[5], w[6]);
        let bx = self.bx;
        let v2 = vx * vx + vy * vy + vz * vz;
        let b2 = bx * bx + by * by + bz * bz;
        let half = lit::<T>(0.5);
        let two = lit::<T>(2.0);
        let z = T::zero();
        let hp = g / g1 * p;
        // ∂F/∂W
        let df_dw = DenseMatrix::from_rows(&[
            [vx, rho, z, z, z, z, z],
            [vx * vx, two * rho * vx, z, z, T::one(), k * by, k * bz],
            [vx * vy, rho * vy, rho * vx, z, z, -k * bx, z],
            [vx * vz, rho * vz, z, rho * vx, z, z, -k * bx],
            [
                half * v2 * vx,
                hp + half * rho * v2 + k * b2 + rho * vx * vx - k * bx * bx,
                rho * vx * vy - k * bx * by,
                rho * vx * vz - k * bx * bz,
                g / g1 * vx,
                two * k * by * vx - k * bx * vy,
                two * k * bz * vx - k * bx * vz,
            ],
            [z, by, -bx, z, z, vx, z],
            [z, bz, z, -bx, z, z, vx],
        ])
        .expect("fixed shape");
        df_dw.matmul(&self.prim_inverse_jacobian(&w, g1))
    }

    fn eigenvalues(&self, u: &[T]) -> Result<Vec<T>> {
        self.admissibility(u)?;
        let vx = u[1] / u[0];
        let s = self.speeds(u[0], self.pressure(u), u[5], u[6]);
        Ok(vec![vx - s.cf, vx - s.ca, vx - s.cs, vx, vx + s.cs, vx + s.ca, vx + s.cf])
    }

    fn eigensystem(&self, u: &[T], subset: &WaveSubset) -> Result<Vec<EigenField<T>>> {
        if *subset == WaveSubset::None {
            return Ok(Vec::new());
        }
        self.admissibility(u)?;
        let w = self.cons_to_prim(u);
        let (rho, vx, p, by, bz) = (w[0], w[1], w[4], w[5], w[6]);
        let s = self.speeds(rho, p, by, bz);
        let a = s.a2.sqrt();
        let one = T::one();
        let z = T::zero();
        let rsq = one / lit::<T>(2.0).sqrt();

        let bt = (by * by + bz * bz).sqrt();
        let tiny = lit::<T>(1e-12) * (one + self.bx.abs());
        let (beta_y, beta_z) = if bt > tiny { (by / bt, bz / bt) } else { (rsq, rsq) };
        let span = s.cf * s.cf - s.cs * s.cs;
        let (alpha_f, alpha_s) = if span > lit::<T>(1e-12) * (s.a2 + s.cf * s.cf) {
            (
                ((s.a2 - s.cs * s.cs) / span).max(z).min(one).sqrt(),
                ((s.cf * s.cf - s.a2) / span).max(z).min(one).sqrt(),
            )
        } else {
            (rsq, rsq)
        };
        let sgn = if self.bx < z { -one } else { one };
        let sq = (lit::<T>(4.0) * T::PI() * rho).sqrt();

        let fast = |sig: T| {
            [
                rho * alpha_f,
                sig * alpha_f * s.cf,
                -sig * alpha_s * s.cs * beta_y * sgn,
                -sig * alpha_s * s.cs * beta_z * sgn,
                rho * alpha_f * s.a2,
                alpha_s * sq * a * beta_y,
                alpha_s * sq * a * beta_z,
            ]
        };
        let slow = |sig: T| {
            [
                rho * alpha_s,
                sig * alpha_s * s.cs,
                sig * alpha_f * s.cf * beta_y * sgn,
                sig * alpha_f * s.cf * beta_z * sgn,
                rho * alpha_s * s.a2,
                -alpha_f * sq * a * beta_y,
                -alpha_f * sq * a * beta_z,
            ]
        };
        // eigenvalue vx + sig·Bx/√(4πρ)
        let alfven = |sig: T| [z, z, -beta_z, beta_y, z, sig * sq * beta_z, -sig * sq * beta_y];
        let entropy = [one, z, z, z, z, z, z];
        let ca_signed = self.bx / sq;
        let alfven_minus = if ca_signed >= z { -one } else { one };

        let prim = [
            (vx - s.cf, fast(-one), Degeneracy::GenuinelyNonlinear),
            (vx - s.ca, alfven(alfven_minus), Degeneracy::LinearlyDegenerate),
            (vx - s.cs, slow(-one), Degeneracy::GenuinelyNonlinear),
            (vx, entropy, Degeneracy::LinearlyDegenerate),
            (vx + s.cs, slow(one), Degeneracy::GenuinelyNonlinear),
            (vx + s.ca, alfven(-alfven_minus), Degeneracy::LinearlyDegenerate),
            (vx + s.cf, fast(one), Degeneracy::GenuinelyNonlinear),
        ];
        let du_dw = self.prim_jacobian(&w);
        let cols: Vec<Vec<T>> = prim.iter().map(|(_, r, _)| du_dw.mul_vec(r)).collect();
        let r = DenseMatrix::from_columns(&cols);
        let l = Lu::factor(&r)?.inverse();
        let fields = prim
            .iter()
            .enumerate()
            .map(|(i, (lam, _, d))| EigenField {
                eigenvalue: *lam,
                left: l.row(i).to_vec(),
                right: cols[i].clone(),
                degeneracy: *d,
            })
            .collect();
        Ok(subset.select(fields))
    }

    fn cons_to_prim(&self, u: &[T]) -> Vec<T> {
        let rho = u[0];
        vec![rho, u[1] / rho, u[2] / rho, u[3] / rho, self.pressure(u), u[5], u[6]]
    }

    fn prim_to_cons(&self, w: &[T]) -> Vec<T> {
        let (rho, vx, vy, vz, p, by, bz) = (w[0], w[1], w[2], w[3], w[4], w[5], w[6]);
        let b2 = self.bx * self.bx + by * by + bz * bz;
        let e = p / (self.gamma - T::one()) + rho * (vx * vx + vy * vy + vz * vz) / lit(2.0) + Self::k() * b2 / lit(2.0);
        vec![rho, rho * vx, rho * vy, rho * vz, e, by, bz]
    }

    fn prim_jacobian(&self, w: &[T]) -> DenseMatrix<T> {
        let k = Self::k();
        let (rho, vx, vy, vz, by, bz) = (w[0], w[1], w[2], w[3], w[5], w[6]);
        let half_v2 = (vx * vx + vy * vy + vz * vz) / lit(2.0);
        let z = T::zero();
        let one = T::one();
        DenseMatrix::from_rows(&[
            [one, z, z, z, z, z, z],
            [vx, rho, z, z, z, z, z],
            [vy, z, rho, z, z, z, z],
            [vz, z, z, rho, z, z, z],
            [half_v2, rho * vx, rho * vy, rho * vz, one / (self.gamma - one), k * by, k * bz],
            [z, z, z, z, z, one, z],
            [z, z, z, z, z, z, one],
        ])
        .expect("fixed shape")
    }

    fn primitive_names(&self) -> Vec<String> {
        ["rho", "vx", "vy", "vz", "p", "By", "Bz"].iter().map(|s| s.to_string()).collect()
    }

    fn admissibility(&self, u: &[T]) -> Result<()> {
        check_len(self, u)?;
        if !(u[0] > T::zero()) {
            return Err(Error::Inadmissible(format!("density {} is not positive", u[0])));
        }
        let p = self.pressure(u);
        if !(p > T::zero()) {
            return Err(Error::Inadmissible(format!("pressure {p} is not positive")));
        }
        Ok(())
    }

    fn shock_indicator(&self, u: &[T]) -> Option<(T, T)> {
        let pm = Self::k() * (self.bx * self.bx + u[5] * u[5] + u[6] * u[6]) / lit(2.0);
        Some((self.pressure(u) + pm, u[1] / u[0]))
    }

    fn reflect(&self, u: &[T]) -> Vec<T> {
        let mut r = u.to_vec();
        r[1] = -r[1];
        r
    }

    fn apply_floor(&self, u: &mut [T], floor: T) -> bool {
        let mut changed = false;
        if !(u[0] >= floor) {
            u[0] = floor;
            changed = true;
        }
        if !(self.pressure(u) >= floor) {
            let ke = (u[1] * u[1] + u[2] * u[2] + u[3] * u[3]) / (lit::<T>(2.0) * u[0]);
            let pm = Self::k() * (self.bx * self.bx + u[5] * u[5] + u[6] * u[6]) / lit(2.0);
            u[4] = floor / (self.gamma - T::one()) + ke + pm;
            changed = true;
        }
        changed
    }

    fn parameters(&self) -> Vec<(&'static str, f64)> {
        vec![("gamma", self.params.gamma), ("bx", self.params.bx)]
    }
}

impl<T: Real> Mhd<T> {
    fn prim_inverse_jacobian(&self, w: &[T], g1: T) -> DenseMatrix<T> {
        let k = Self::k();
        let (rho, vx, vy, vz, by, bz) = (w[0], w[1], w[2], w[3], w[5], w[6]);
        let half_v2 = (vx * vx + vy * vy + vz * vz) / lit(2.0);
        let z = T::zero();
        let one = T::one();
        let ir = one / rho;
        DenseMatrix::from_rows(&[
            [one, z, z, z, z, z, z],
            [-vx * ir, ir, z, z, z, z, z],
            [-vy * ir, z, ir, z, z, z, z],
            [-vz * ir, z, z, ir, z, z, z],
            [g1 * half_v2, -g1 * vx, -g1 * vy, -g1 * vz, g1, -g1 * k * by, -g1 * k * bz],
            [z, z, z, z, z, one, z],
            [z, z, z, z, z, z, one],
        ])
        .expect("fixed shape")
    }
}
