//! Compressible Euler equations with three velocity components.
//!
//! Conserved `(ρ, ρvx, ρvy, ρvz, E)`, primitive `(ρ, vx, vy, vz, p)`,
//! `E = p/(γ−1) + ρv²/2`.

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::num::{lit, Real};
use crate::system::{check_len, field_from_primitive, Degeneracy, EigenField, HyperbolicSystem, WaveSubset};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerParams {
    pub gamma: f64,
}

impl Default for EulerParams {
    fn default() -> Self {
        Self { gamma: 1.4 }
    }
}

#[derive(Debug, Clone)]
pub struct Euler<T> {
    gamma: T,
    params: EulerParams,
}

impl<T: Real> Euler<T> {
    pub fn new(params: EulerParams) -> Result<Self> {
        if !(params.gamma > 1.0) || !params.gamma.is_finite() {
            return Err(Error::InvalidParameter(format!("gamma must exceed 1, got {}", params.gamma)));
        }
        Ok(Self {
            gamma: lit(params.gamma),
            params,
        })
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn pressure(&self, u: &[T]) -> T {
        let ke = (u[1] * u[1] + u[2] * u[2] + u[3] * u[3]) / (lit::<T>(2.0) * u[0]);
        (self.gamma - T::one()) * (u[4] - ke)
    }

    pub fn sound_speed(&self, u: &[T]) -> T {
        (self.gamma * self.pressure(u) / u[0]).abs().sqrt()
    }

    fn prim_inverse_jacobian(&self, w: &[T]) -> DenseMatrix<T> {
        let (rho, vx, vy, vz) = (w[0], w[1], w[2], w[3]);
        let g1 = self.gamma - T::one();
        let half_v2 = (vx * vx + vy * vy + vz * vz) / lit(2.0);
        let z = T::zero();
        let ir = T::one() / rho;
        DenseMatrix::from_rows(&[
            [T::one(), z, z, z, z],
            [-vx * ir, ir, z, z, z],
            [-vy * ir, z, ir, z, z],
            [-vz * ir, z, z, ir, z],
            [g1 * half_v2, -g1 * vx, -g1 * vy, -g1 * vz, g1],
        ])
        .expect("fixed shape")
    }
}

impl<T: Real> HyperbolicSystem<T> for Euler<T> {
    fn name(&self) -> &str {
        "euler"
    }

    fn num_vars(&self) -> usize {
        5
    }

    fn flux(&self, u: &[T]) -> Vec<T> {
        let p = self.pressure(u);
        let vx = u[1] / u[0];
        vec![u[1], u[1] * vx + p, u[2] * vx, u[3] * vx, (u[4] + p) * vx]
    }

    fn flux_jacobian(&self, u: &[T]) -> DenseMatrix<T> {
        let g = self.gamma;
        let g1 = g - T::one();
        let rho = u[0];
        let (vx, vy, vz) = (u[1] / rho, u[2] / rho, u[3] / rho);
        let half_v2 = (vx * vx + vy * vy + vz * vz) / lit(2.0);
        let p = self.pressure(u);
        let h = (u[4] + p) / rho;
        let z = T::zero();
        let one = T::one();
        DenseMatrix::from_rows(&[
            [z, one, z, z, z],
            [g1 * half_v2 - vx * vx, (lit::<T>(3.0) - g) * vx, -g1 * vy, -g1 * vz, g1],
            [-vx * vy, vy, vx, z, z],
            [-vx * vz, vz, z, vx, z],
            [vx * (g1 * half_v2 - h), h - g1 * vx * vx, -g1 * vx * vy, -g1 * vx * vz, g * vx],
        ])
        .expect("fixed shape")
    }

    fn eigenvalues(&self, u: &[T]) -> Result<Vec<T>> {
        self.admissibility(u)?;
        let vx = u[1] / u[0];
        let c = self.sound_speed(u);
        Ok(vec![vx - c, vx, vx, vx, vx + c])
    }

    fn eigensystem(&self, u: &[T], subset: &WaveSubset) -> Result<Vec<EigenField<T>>> {
        if *subset == WaveSubset::None {
            return Ok(Vec::new());
        }
        self.admissibility(u)?;
        let w = self.cons_to_prim(u);
        let (rho, vx) = (w[0], w[1]);
        let a = self.sound_speed(u);
        let a2 = a * a;
        let du_dw = self.prim_jacobian(&w);
        let dw_du = self.prim_inverse_jacobian(&w);
        let z = T::zero();
        let one = T::one();
        let two = lit::<T>(2.0);
        let f = |lam: T, l: [T; 5], r: [T; 5], d: Degeneracy| field_from_primitive(lam, &l, &r, &du_dw, &dw_du, d);
        let fields = vec![
            f(
                vx - a,
                [z, -rho / (two * a), z, z, one / (two * a2)],
                [one, -a / rho, z, z, a2],
                Degeneracy::GenuinelyNonlinear,
            ),
            f(vx, [one, z, z, z, -one / a2], [one, z, z, z, z], Degeneracy::LinearlyDegenerate),
            f(vx, [z, z, one, z, z], [z, z, one, z, z], Degeneracy::LinearlyDegenerate),
            f(vx, [z, z, z, one, z], [z, z, z, one, z], Degeneracy::LinearlyDegenerate),
            f(
                vx + a,
                [z, rho / (two * a), z, z, one / (two * a2)],
                [one, a / rho, z, z, a2],
                Degeneracy::GenuinelyNonlinear,
            ),
        ];
        Ok(subset.select(fields))
    }

    fn cons_to_prim(&self, u: &[T]) -> Vec<T> {
        let rho = u[0];
        vec![rho, u[1] / rho, u[2] / rho, u[3] / rho, self.pressure(u)]
    }

    fn prim_to_cons(&self, w: &[T]) -> Vec<T> {
        let (rho, vx, vy, vz, p) = (w[0], w[1], w[2], w[3], w[4]);
        let e = p / (self.gamma - T::one()) + rho * (vx * vx + vy * vy + vz * vz) / lit(2.0);
        vec![rho, rho * vx, rho * vy, rho * vz, e]
    }

    fn prim_jacobian(&self, w: &[T]) -> DenseMatrix<T> {
        let (rho, vx, vy, vz) = (w[0], w[1], w[2], w[3]);
        let half_v2 = (vx * vx + vy * vy + vz * vz) / lit(2.0);
        let z = T::zero();
        let one = T::one();
        DenseMatrix::from_rows(&[
            [one, z, z, z, z],
            [vx, rho, z, z, z],
            [vy, z, rho, z, z],
            [vz, z, z, rho, z],
            [half_v2, rho * vx, rho * vy, rho * vz, one / (self.gamma - one)],
        ])
        .expect("fixed shape")
    }

    fn primitive_names(&self) -> Vec<String> {
        ["rho", "vx", "vy", "vz", "p"].iter().map(|s| s.to_string()).collect()
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
        Some((self.pressure(u), u[1] / u[0]))
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
            u[4] = floor / (self.gamma - T::one()) + ke;
            changed = true;
        }
        changed
    }

    fn parameters(&self) -> Vec<(&'static str, f64)> {
        vec![("gamma", self.params.gamma)]
    }
}
