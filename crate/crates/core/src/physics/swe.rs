//! Shallow water over variable bathymetry with Manning friction.
//!
//! Conserved `(h, hu, hv, b)`, primitive `(h, u, v, b)`. The bottom enters
//! through the non-conservative product `g h ∂b/∂x` in the x-momentum equation.

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::num::{lit, Real};
use crate::system::{check_len, Degeneracy, EigenField, HyperbolicSystem, WaveSubset};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweParams {
    pub g: f64,
    /// Manning roughness; zero disables friction.
    pub n_manning: f64,
    /// Depth below which the velocity is taken as zero.
    pub dry_tol: f64,
}

impl Default for SweParams {
    fn default() -> Self {
        Self {
            g: 9.81,
            n_manning: 0.0,
            dry_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ShallowWater<T> {
    g: T,
    n2: T,
    dry: T,
    params: SweParams,
}

impl<T: Real> ShallowWater<T> {
    pub fn new(params: SweParams) -> Result<Self> {
        if !(params.g > 0.0) || !params.g.is_finite() {
            return Err(Error::InvalidParameter(format!("g must be positive, got {}", params.g)));
        }
        if !(params.n_manning >= 0.0) || !params.n_manning.is_finite() {
            return Err(Error::InvalidParameter(format!("n_manning must be non-negative, got {}", params.n_manning)));
        }
        Ok(Self {
            g: lit(params.g),
            n2: lit(params.n_manning * params.n_manning),
            dry: lit(params.dry_tol),
            params,
        })
    }

    fn velocities(&self, u: &[T]) -> (T, T) {
        if u[0] < self.dry {
            (T::zero(), T::zero())
        } else {
            (u[1] / u[0], u[2] / u[0])
        }
    }

    pub fn celerity(&self, u: &[T]) -> T {
        (self.g * u[0].max(T::zero())).sqrt()
    }
}

impl<T: Real> HyperbolicSystem<T> for ShallowWater<T> {
    fn name(&self) -> &str {
        "swe"
    }

    fn num_vars(&self) -> usize {
        4
    }

    fn flux(&self, u: &[T]) -> Vec<T> {
        let (vx, _) = self.velocities(u);
        let h = u[0];
        vec![u[1], u[1] * vx + self.g * h * h / lit(2.0), u[2] * vx, T::zero()]
    }

    fn flux_jacobian(&self, u: &[T]) -> DenseMatrix<T> {
        let (vx, vy) = self.velocities(u);
        let z = T::zero();
        let one = T::one();
        DenseMatrix::from_rows(&[
            [z, one, z, z],
            [self.g * u[0] - vx * vx, lit::<T>(2.0) * vx, z, z],
            [-vx * vy, vy, vx, z],
            [z, z, z, z],
        ])
        .expect("fixed shape")
    }

    fn has_nonconservative(&self) -> bool {
        true
    }

    fn noncons_matrix(&self, u: &[T]) -> DenseMatrix<T> {
        let mut b = DenseMatrix::zeros(4, 4);
        b.set(1, 3, self.g * u[0]);
        b
    }

    fn has_stiff_source(&self) -> bool {
        self.params.n_manning > 0.0
    }

    fn source(&self, u: &[T]) -> Vec<T> {
        let z = T::zero();
        if self.n2 == z || u[0] < self.dry {
            return vec![z; 4];
        }
        let (vx, vy) = self.velocities(u);
        let speed = (vx * vx + vy * vy).sqrt();
        let c = -self.g * self.n2 * speed / u[0].cbrt();
        vec![z, c * vx, c * vy, z]
    }

    fn source_jacobian(&self, u: &[T]) -> DenseMatrix<T> {
        let mut j = DenseMatrix::zeros(4, 4);
        if self.n2 == T::zero() || u[0] < self.dry {
            return j;
        }
        let h = u[0];
        let (vx, vy) = self.velocities(u);
        let speed = (vx * vx + vy * vy).sqrt();
        let k = self.g * self.n2 / (h * h.cbrt());
        let seven_thirds = lit::<T>(7.0 / 3.0);
        j.set(1, 0, seven_thirds * k * vx * speed);
        j.set(2, 0, seven_thirds * k * vy * speed);
        if speed > T::zero() {
            j.set(1, 1, -k * (lit::<T>(2.0) * vx * vx + vy * vy) / speed);
            j.set(1, 2, -k * vx * vy / speed);
            j.set(2, 1, -k * vx * vy / speed);
            j.set(2, 2, -k * (vx * vx + lit::<T>(2.0) * vy * vy) / speed);
        }
        j
    }

    fn eigenvalues(&self, u: &[T]) -> Result<Vec<T>> {
        self.admissibility(u)?;
        let (vx, _) = self.velocities(u);
        let c = self.celerity(u);
        let mut ev = vec![vx - c, T::zero(), vx, vx + c];
        ev.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        Ok(ev)
    }

    fn eigensystem(&self, u: &[T], subset: &WaveSubset) -> Result<Vec<EigenField<T>>> {
        if *subset == WaveSubset::None {
            return Ok(Vec::new());
        }
        self.admissibility(u)?;
        let (vx, vy) = self.velocities(u);
        let c = self.celerity(u);
        let z = T::zero();
        let one = T::one();
        let two = lit::<T>(2.0);
        let ld = Degeneracy::LinearlyDegenerate;
        let gnl = Degeneracy::GenuinelyNonlinear;
        let mut fields = vec![EigenField {
            eigenvalue: vx,
            left: vec![-vy, z, one, z],
            right: vec![z, z, one, z],
            degeneracy: ld,
        }];
        let wet = c > lit::<T>(1e-8) * (one + vx.abs());
        if wet {
            let r1 = vx - c;
            let r4 = vx + c;
            fields.push(EigenField {
                eigenvalue: r1,
                left: vec![(c + vx) / (two * c), -one / (two * c), z, -c / (two * r1)],
                right: vec![one, r1, vy, z],
                degeneracy: gnl,
            });
            fields.push(EigenField {
                eigenvalue: r4,
                left: vec![(c - vx) / (two * c), one / (two * c), z, c / (two * r4)],
                right: vec![one, r4, vy, z],
                degeneracy: gnl,
            });
            let res = vx * vx - c * c;
            if res.abs() > lit::<T>(1e-8) * c * c {
                fields.push(EigenField {
                    eigenvalue: z,
                    left: vec![z, z, z, c * c / res],
                    right: vec![one, z, vy, res / (c * c)],
                    degeneracy: ld,
                });
            }
        }
        fields.sort_by(|a, b| a.eigenvalue.partial_cmp(&b.eigenvalue).expect("finite"));
        if !wet || fields.len() < 4 {
            // Incomplete set: only the well-defined linearly degenerate fields are offered.
            return Ok(match subset {
                WaveSubset::None => Vec::new(),
                _ => fields.into_iter().filter(|f| f.degeneracy == ld).collect(),
            });
        }
        Ok(subset.select(fields))
    }

    fn cons_to_prim(&self, u: &[T]) -> Vec<T> {
        let (vx, vy) = self.velocities(u);
        vec![u[0], vx, vy, u[3]]
    }

    fn prim_to_cons(&self, w: &[T]) -> Vec<T> {
        vec![w[0], w[0] * w[1], w[0] * w[2], w[3]]
    }

    fn prim_jacobian(&self, w: &[T]) -> DenseMatrix<T> {
        let z = T::zero();
        let one = T::one();
        DenseMatrix::from_rows(&[[one, z, z, z], [w[1], w[0], z, z], [w[2], z, w[0], z], [z, z, z, one]])
            .expect("fixed shape")
    }

    fn primitive_names(&self) -> Vec<String> {
        ["h", "u", "v", "b"].iter().map(|s| s.to_string()).collect()
    }

    fn admissibility(&self, u: &[T]) -> Result<()> {
        check_len(self, u)?;
        if !(u[0] >= T::zero()) {
            return Err(Error::Inadmissible(format!("depth {} is negative", u[0])));
        }
        Ok(())
    }

    fn shock_indicator(&self, u: &[T]) -> Option<(T, T)> {
        Some((u[0], self.velocities(u).0))
    }

    fn reflect(&self, u: &[T]) -> Vec<T> {
        let mut r = u.to_vec();
        r[1] = -r[1];
        r
    }

    /// Clips negative depth and removes momentum from dry cells.
    fn apply_floor(&self, u: &mut [T], _floor: T) -> bool {
        let mut changed = false;
        if !(u[0] >= T::zero()) {
            u[0] = T::zero();
            changed = true;
        }
        if u[0] < self.dry && (u[1] != T::zero() || u[2] != T::zero()) {
            u[1] = T::zero();
            u[2] = T::zero();
            changed = true;
        }
        changed
    }

    fn parameters(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("g", self.params.g),
            ("n_manning", self.params.n_manning),
            ("dry_tol", self.params.dry_tol),
        ]
    }

    fn output_names(&self) -> Vec<String> {
        let mut n = self.primitive_names();
        n.push("h+b".into());
        n
    }

    fn output_values(&self, u: &[T]) -> Vec<T> {
        let mut w = self.cons_to_prim(u);
        w.push(u[0] + u[3]);
        w
    }
}
