//! Hyperbolic relaxation of the one-dimensional compressible Navier–Stokes
//! equations.
//!
//! Conserved `(ρ, ρu, E, ψ1, ψ2)`, where `ψ1` and `ψ2` relax towards the
//! velocity and temperature gradients at rate `1/ε`.

use crate::error::{Error, Result};
use crate::linalg::{eigen_general, DenseMatrix, Lu};
use crate::num::{lit, Real};
use crate::system::{check_len, numerical_fields, Degeneracy, EigenField, HyperbolicSystem, WaveSubset};

/// Dynamic viscosity as a function of temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Viscosity {
    Constant(f64),
    /// `μ0 (T/T0)^β (T + s)/(T0 + s)`
    Sutherland { mu0: f64, t0: f64, beta: f64, s: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NsRelaxParams {
    pub gamma: f64,
    pub epsilon: f64,
    pub viscosity: Viscosity,
    pub gas_constant: f64,
    pub prandtl: f64,
    /// Heat conduction through `ψ2`; off by default.
    pub heat_conduction: bool,
}

impl Default for NsRelaxParams {
    fn default() -> Self {
        Self {
            gamma: 1.4,
            epsilon: 1e-4,
            viscosity: Viscosity::Constant(0.2),
            gas_constant: 1.0,
            prandtl: 0.72,
            heat_conduction: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NsRelax<T> {
    gamma: T,
    eps: T,
    r_gas: T,
    params: NsRelaxParams,
}

/// Temperature and its derivatives with respect to the conserved variables.
struct Thermo<T> {
    u: T,
    p: T,
    t: T,
    p_u: [T; 3],
    t_u: [T; 3],
}

impl<T: Real> NsRelax<T> {
    pub fn new(params: NsRelaxParams) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(params.gamma > 1.0) || !params.gamma.is_finite() {
            return bad(format!("gamma must exceed 1, got {}", params.gamma));
        }
        if !(params.epsilon > 0.0) || !params.epsilon.is_finite() {
            return bad(format!("epsilon must be positive, got {}", params.epsilon));
        }
        if !(params.gas_constant > 0.0) || !(params.prandtl > 0.0) {
            return bad("gas constant and Prandtl number must be positive".into());
        }
        match params.viscosity {
            Viscosity::Constant(mu) if !(mu >= 0.0) || !mu.is_finite() => {
                return bad(format!("mu must be non-negative, got {mu}"));
            }
            Viscosity::Sutherland { mu0, t0, s, .. } if !(mu0 >= 0.0) || !(t0 > 0.0) || !(t0 + s > 0.0) => {
                return bad("invalid Sutherland constants".into());
            }
            _ => {}
        }
        Ok(Self {
            gamma: lit(params.gamma),
            eps: lit(params.epsilon),
            r_gas: lit(params.gas_constant),
            params,
        })
    }

    pub fn params(&self) -> &NsRelaxParams {
        &self.params
    }

    fn thermo(&self, q: &[T]) -> Thermo<T> {
        let g1 = self.gamma - T::one();
        let rho = q[0];
        let u = q[1] / rho;
        let p = g1 * (q[2] - q[1] * u / lit(2.0));
        let t = p / (self.r_gas * rho);
        let p_u = [g1 * u * u / lit(2.0), -g1 * u, g1];
        let rr = self.r_gas * rho;
        let t_u = [(p_u[0] - p / rho) / rr, p_u[1] / rr, p_u[2] / rr];
        Thermo { u, p, t, p_u, t_u }
    }

    /// `(μ, dμ/dT)`
    fn viscosity(&self, t: T) -> (T, T) {
        match self.params.viscosity {
            Viscosity::Constant(mu) => (lit(mu), T::zero()),
            Viscosity::Sutherland { mu0, t0, beta, s } => {
                let (t0, b, s) = (lit::<T>(t0), lit::<T>(beta), lit::<T>(s));
                let ta = t.max(T::min_positive_value());
                let mu = lit::<T>(mu0) * (ta / t0).powf(b) * (ta + s) / (t0 + s);
                (mu, mu * (b / ta + T::one() / (ta + s)))
            }
        }
    }

    /// `(κ, dκ/dT)`
    fn conductivity(&self, t: T) -> (T, T) {
        if !self.params.heat_conduction {
            return (T::zero(), T::zero());
        }
        let (mu, dmu) = self.viscosity(t);
        let cv = self.r_gas / (self.gamma - T::one());
        let f = self.gamma * cv / lit(self.params.prandtl);
        (mu * f, dmu * f)
    }

    pub fn temperature(&self, q: &[T]) -> T {
        self.thermo(q).t
    }
}

impl<T: Real> HyperbolicSystem<T> for NsRelax<T> {
    fn name(&self) -> &str {
        "ns_relax"
    }

    fn num_vars(&self) -> usize {
        5
    }

    fn flux(&self, q: &[T]) -> Vec<T> {
        let th = self.thermo(q);
        let (mu, _) = self.viscosity(th.t);
        let (kappa, _) = self.conductivity(th.t);
        let tau = lit::<T>(4.0 / 3.0) * mu * q[3];
        vec![
            q[1],
            q[1] * th.u + th.p - tau,
            th.u * (q[2] + th.p - tau) + kappa * q[4],
            -th.u / self.eps,
            -th.t / self.eps,
        ]
    }

    fn flux_jacobian(&self, q: &[T]) -> DenseMatrix<T> {
        let th = self.thermo(q);
        let (mu, dmu) = self.viscosity(th.t);
        let (kappa, dkappa) = self.conductivity(th.t);
        let f43 = lit::<T>(4.0 / 3.0);
        let rho = q[0];
        let u = th.u;
        let u_u = [-u / rho, T::one() / rho, T::zero()];
        let h = q[2] + th.p - f43 * mu * q[3];
        let mut c = DenseMatrix::zeros(5, 5);
        c[(0, 1)] = T::one();
        for j in 0..3 {
            let dtau = f43 * q[3] * dmu * th.t_u[j];
            let mom = [-u * u, lit::<T>(2.0) * u, T::zero()][j];
            c[(1, j)] = mom + th.p_u[j] - dtau;
            let de = if j == 2 { T::one() } else { T::zero() };
            c[(2, j)] = u_u[j] * h + u * (de + th.p_u[j] - dtau) + q[4] * dkappa * th.t_u[j];
            c[(3, j)] = -u_u[j] / self.eps;
            c[(4, j)] = -th.t_u[j] / self.eps;
        }
        c[(1, 3)] = -f43 * mu;
        c[(2, 3)] = -f43 * mu * u;
        c[(2, 4)] = kappa;
        c
    }

    fn has_stiff_source(&self) -> bool {
        true
    }

    fn source(&self, q: &[T]) -> Vec<T> {
        let z = T::zero();
        vec![z, z, z, -q[3] / self.eps, -q[4] / self.eps]
    }

    fn source_jacobian(&self, _q: &[T]) -> DenseMatrix<T> {
        let z = T::zero();
        let d = -T::one() / self.eps;
        DenseMatrix::diag(&[z, z, z, d, d])
    }

    fn eigenvalues(&self, q: &[T]) -> Result<Vec<T>> {
        self.admissibility(q)?;
        let a = self.char_matrix(q);
        if self.params.heat_conduction {
            return crate::linalg::eigenvalues_general(&a);
        }
        let a11 = DenseMatrix::from_fn(4, 4, |i, j| a[(i, j)]);
        let mut ev = crate::linalg::eigenvalues_general(&a11)?;
        ev.push(T::zero());
        ev.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
        Ok(ev)
    }

    /// Without heat conduction the last column of `A` vanishes and the
    /// spectrum splits into that of the leading 4×4 block plus a zero
    /// eigenvalue carried by `ψ2`. Fields whose extension to `ψ2` would need
    /// division by a vanishing eigenvalue are withheld.
    fn eigensystem(&self, q: &[T], subset: &WaveSubset) -> Result<Vec<EigenField<T>>> {
        if *subset == WaveSubset::None {
            return Ok(Vec::new());
        }
        self.admissibility(q)?;
        let a = self.char_matrix(q);
        let classify = |p: usize, v: &[T]| {
            if p == 0 || p + 1 == v.len() {
                Degeneracy::GenuinelyNonlinear
            } else {
                Degeneracy::LinearlyDegenerate
            }
        };
        if self.params.heat_conduction {
            return Ok(subset.select(numerical_fields(&a, classify)?));
        }
        let a11 = DenseMatrix::from_fn(4, 4, |i, j| a[(i, j)]);
        let a21: Vec<T> = (0..4).map(|j| a[(4, j)]).collect();
        let e = eigen_general(&a11)?;
        let radius = e.values.iter().fold(T::zero(), |m, x| m.max(x.abs()));
        let cut = lit::<T>(1e-8) * radius.max(T::one());
        let regular = e.values.iter().all(|x| x.abs() > cut);
        let z = T::zero();
        let mut fields: Vec<(usize, EigenField<T>)> = Vec::new();
        for p in 0..4 {
            let lam = e.values[p];
            if lam.abs() <= cut {
                continue;
            }
            let r4 = e.right.column(p);
            let ext = crate::num::dot(&a21, &r4) / lam;
            let mut right = r4;
            right.push(ext);
            let mut left = e.left.row(p).to_vec();
            left.push(z);
            fields.push((
                p,
                EigenField {
                    eigenvalue: lam,
                    left,
                    right,
                    degeneracy: classify(p, &e.values),
                },
            ));
        }
        let mut all: Vec<EigenField<T>> = Vec::with_capacity(5);
        let mut psi2 = None;
        if regular {
            // x A11 = −a21  ⇔  A11ᵀ xᵀ = −a21ᵀ
            let lu_t = Lu::factor(&a11.transpose())?;
            let neg: Vec<T> = a21.iter().map(|&x| -x).collect();
            let mut left = lu_t.solve(&neg)?;
            left.push(T::one());
            psi2 = Some(EigenField {
                eigenvalue: z,
                left,
                right: vec![z, z, z, z, T::one()],
                degeneracy: Degeneracy::LinearlyDegenerate,
            });
        }
        // ascending positions in the five-field list
        let mut inserted = false;
        for (_, f) in fields {
            if !inserted && f.eigenvalue > z {
                if let Some(p) = psi2.take() {
                    all.push(p);
                }
                inserted = true;
            }
            all.push(f);
        }
        if let Some(p) = psi2.take() {
            all.push(p);
        }
        if all.len() < 5 {
            return Ok(match subset {
                WaveSubset::All => all,
                _ => all.into_iter().filter(|f| f.degeneracy == Degeneracy::LinearlyDegenerate).collect(),
            });
        }
        Ok(subset.select(all))
    }

    fn cons_to_prim(&self, q: &[T]) -> Vec<T> {
        let th = self.thermo(q);
        vec![q[0], th.u, th.p, q[3], q[4]]
    }

    fn prim_to_cons(&self, w: &[T]) -> Vec<T> {
        let e = w[2] / (self.gamma - T::one()) + w[0] * w[1] * w[1] / lit(2.0);
        vec![w[0], w[0] * w[1], e, w[3], w[4]]
    }

    fn prim_jacobian(&self, w: &[T]) -> DenseMatrix<T> {
        let z = T::zero();
        let one = T::one();
        DenseMatrix::from_rows(&[
            [one, z, z, z, z],
            [w[1], w[0], z, z, z],
            [w[1] * w[1] / lit(2.0), w[0] * w[1], one / (self.gamma - one), z, z],
            [z, z, z, one, z],
            [z, z, z, z, one],
        ])
        .expect("fixed shape")
    }

    fn primitive_names(&self) -> Vec<String> {
        ["rho", "u", "p", "psi1", "psi2"].iter().map(|s| s.to_string()).collect()
    }

    fn admissibility(&self, q: &[T]) -> Result<()> {
        check_len(self, q)?;
        if !(q[0] > T::zero()) {
            return Err(Error::Inadmissible(format!("density {} is not positive", q[0])));
        }
        let p = self.thermo(q).p;
        if !(p > T::zero()) {
            return Err(Error::Inadmissible(format!("pressure {p} is not positive")));
        }
        Ok(())
    }

    fn shock_indicator(&self, q: &[T]) -> Option<(T, T)> {
        let th = self.thermo(q);
        Some((th.p, th.u))
    }

    fn reflect(&self, q: &[T]) -> Vec<T> {
        let mut r = q.to_vec();
        r[1] = -r[1];
        r[4] = -r[4];
        r
    }

    fn apply_floor(&self, q: &mut [T], floor: T) -> bool {
        let mut changed = false;
        if !(q[0] >= floor) {
            q[0] = floor;
            changed = true;
        }
        if !(self.thermo(q).p >= floor) {
            q[2] = floor / (self.gamma - T::one()) + q[1] * q[1] / (lit::<T>(2.0) * q[0]);
            changed = true;
        }
        changed
    }

    fn parameters(&self) -> Vec<(&'static str, f64)> {
        let mut v = vec![
            ("gamma", self.params.gamma),
            ("epsilon", self.params.epsilon),
            ("gas_constant", self.params.gas_constant),
            ("prandtl", self.params.prandtl),
        ];
        match self.params.viscosity {
            Viscosity::Constant(mu) => v.push(("mu", mu)),
            Viscosity::Sutherland { mu0, t0, beta, s } => {
                v.extend([("mu0", mu0), ("t0", t0), ("beta", beta), ("sutherland_s", s)]);
            }
        }
        v
    }

    fn output_names(&self) -> Vec<String> {
        let mut n = self.primitive_names();
        n.push("T".into());
        n
    }

    fn output_values(&self, q: &[T]) -> Vec<T> {
        let mut w = self.cons_to_prim(q);
        w.push(self.temperature(q));
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::check_jacobian;

    fn sys(mu: f64) -> NsRelax<f64> {
        NsRelax::new(NsRelaxParams {
            viscosity: Viscosity::Constant(mu),
            ..Default::default()
        })
        .unwrap()
    }

    #[test]
    fn left_state_temperature() {
        let s = sys(2.0);
        let q = s.prim_to_cons(&[1.29, 0.0, 2929.73, 0.0, 0.0]);
        assert!((s.temperature(&q) - 2929.73 / 1.29).abs() < 1e-9);
        assert!((s.temperature(&q) - 2271.11).abs() < 1e-2);
    }

    #[test]
    fn relaxation_jacobian() {
        let s = sys(2.0);
        let j = s.source_jacobian(&[1.0, 0.0, 1.0, 0.0, 0.0]);
        assert_eq!(j[(3, 3)], -1e4);
        assert_eq!(j[(4, 4)], -1e4);
        assert_eq!(j[(0, 0)], 0.0);
    }

    #[test]
    fn jacobian_matches_differences() {
        for heat in [false, true] {
            let s = NsRelax::<f64>::new(NsRelaxParams {
                viscosity: Viscosity::Sutherland {
                    mu0: 0.5,
                    t0: 2000.0,
                    beta: 0.7,
                    s: 100.0,
                },
                heat_conduction: heat,
                epsilon: 1.0,
                ..Default::default()
            })
            .unwrap();
            let q = s.prim_to_cons(&[1.3, 0.4, 2900.0, 0.3, -0.2]);
            let scale = s.flux_jacobian(&q).norm_inf();
            assert!(check_jacobian(&s, &q, 1e-7) < 1e-6 * scale);
        }
    }

    #[test]
    fn block_fields_are_eigenpairs() {
        let s = sys(0.2);
        let q = s.prim_to_cons(&[1.5, 3.0, 3500.0, 10.0, -5.0]);
        let a = s.char_matrix(&q);
        let f = s.eigensystem(&q, &WaveSubset::All).unwrap();
        assert_eq!(f.len(), 5);
        let scale = a.norm_inf();
        for (i, fi) in f.iter().enumerate() {
            let ar = a.mul_vec(&fi.right);
            let la = a.vec_mul(&fi.left);
            for k in 0..5 {
                assert!((ar[k] - fi.eigenvalue * fi.right[k]).abs() < 1e-8 * scale);
                assert!((la[k] - fi.eigenvalue * fi.left[k]).abs() < 1e-8 * scale);
            }
            for (j, fj) in f.iter().enumerate() {
                let d = crate::num::dot(&fi.left, &fj.right);
                let tol = 1e-10 * crate::num::norm2(&fi.left) * crate::num::norm2(&fj.right);
                assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < tol.max(1e-12), "{i} {j} {d}");
            }
        }
    }
}
