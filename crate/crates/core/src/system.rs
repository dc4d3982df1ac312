//! The contract every physics system implements.
//!
//! A system supplies its flux, Jacobians, non-conservative matrix, source,
//! eigenstructure and variable conversions. All callbacks are pure; the
//! scheme may call them from any thread.

use crate::error::{Error, Result};
use crate::linalg::{eigen_general, DenseMatrix};
use crate::num::{lit, Real};

/// Conserved state vector `U`.
pub type State<T> = Vec<T>;

/// Classification of a characteristic field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degeneracy {
    GenuinelyNonlinear,
    LinearlyDegenerate,
}

/// One characteristic field, with vectors in the conserved-variable basis.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenField<T> {
    pub eigenvalue: T,
    pub left: Vec<T>,
    pub right: Vec<T>,
    pub degeneracy: Degeneracy,
}

impl<T: Real> EigenField<T> {
    /// Projects a jump onto this field, `l · dU`.
    pub fn strength(&self, du: &[T]) -> T {
        crate::num::dot(&self.left, du)
    }
}

/// Selection of the fields that receive the anti-diffusive correction.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum WaveSubset {
    All,
    #[default]
    LinearlyDegenerate,
    /// Positions in the ascending list of all fields.
    Indices(Vec<usize>),
    None,
}

impl WaveSubset {
    /// Keeps the fields selected by this subset. `fields` must be the full,
    /// ascending list.
    pub fn select<T: Real>(&self, fields: Vec<EigenField<T>>) -> Vec<EigenField<T>> {
        match self {
            WaveSubset::All => fields,
            WaveSubset::None => Vec::new(),
            WaveSubset::LinearlyDegenerate => fields
                .into_iter()
                .filter(|f| f.degeneracy == Degeneracy::LinearlyDegenerate)
                .collect(),
            WaveSubset::Indices(idx) => fields
                .into_iter()
                .enumerate()
                .filter(|(i, _)| idx.contains(i))
                .map(|(_, f)| f)
                .collect(),
        }
    }
}

/// A one-dimensional hyperbolic system `∂U/∂t + ∂F/∂x + B ∂U/∂x = S`.
pub trait HyperbolicSystem<T: Real>: Send + Sync {
    fn name(&self) -> &str;

    /// Number of conserved variables `M`.
    fn num_vars(&self) -> usize;

    fn flux(&self, u: &[T]) -> Vec<T>;

    /// `C(U) = ∂F/∂U`
    fn flux_jacobian(&self, u: &[T]) -> DenseMatrix<T>;

    fn has_nonconservative(&self) -> bool {
        false
    }

    /// `B(U)`; zero for conservative systems.
    fn noncons_matrix(&self, _u: &[T]) -> DenseMatrix<T> {
        DenseMatrix::zeros(self.num_vars(), self.num_vars())
    }

    /// `A(U) = C(U) + B(U)` without an admissibility check.
    fn char_matrix(&self, u: &[T]) -> DenseMatrix<T> {
        let c = self.flux_jacobian(u);
        if self.has_nonconservative() {
            c.add(&self.noncons_matrix(u))
        } else {
            c
        }
    }

    fn has_stiff_source(&self) -> bool {
        false
    }

    fn source(&self, _u: &[T]) -> Vec<T> {
        vec![T::zero(); self.num_vars()]
    }

    fn source_jacobian(&self, _u: &[T]) -> DenseMatrix<T> {
        DenseMatrix::zeros(self.num_vars(), self.num_vars())
    }

    /// Ascending eigenvalues of `A(U)`.
    fn eigenvalues(&self, u: &[T]) -> Result<Vec<T>> {
        crate::linalg::eigenvalues_general(&self.char_matrix(u))
    }

    /// Characteristic fields selected by `subset`, in ascending eigenvalue order.
    fn eigensystem(&self, u: &[T], subset: &WaveSubset) -> Result<Vec<EigenField<T>>>;

    fn cons_to_prim(&self, u: &[T]) -> Vec<T>;

    fn prim_to_cons(&self, w: &[T]) -> Vec<T>;

    /// `∂U/∂W` evaluated at the primitive state `w`.
    fn prim_jacobian(&self, w: &[T]) -> DenseMatrix<T>;

    fn primitive_names(&self) -> Vec<String>;

    fn admissibility(&self, u: &[T]) -> Result<()>;

    /// Shock indicator variable and normal velocity, used by the flattener.
    fn shock_indicator(&self, _u: &[T]) -> Option<(T, T)> {
        None
    }

    /// State mirrored across a reflecting wall (normal velocity negated).
    fn reflect(&self, u: &[T]) -> Vec<T> {
        u.to_vec()
    }

    /// Applies the positivity floor in place; returns true when anything changed.
    fn apply_floor(&self, _u: &mut [T], _floor: T) -> bool {
        false
    }

    /// Named physical constants.
    fn parameters(&self) -> Vec<(&'static str, f64)> {
        Vec::new()
    }

    /// Column names written to output files.
    fn output_names(&self) -> Vec<String> {
        self.primitive_names()
    }

    fn output_values(&self, u: &[T]) -> Vec<T> {
        self.cons_to_prim(u)
    }

    /// Largest characteristic speed magnitude.
    fn max_speed(&self, u: &[T]) -> Result<T> {
        let ev = self.eigenvalues(u)?;
        Ok(ev.iter().fold(T::zero(), |m, x| m.max(x.abs())))
    }
}

/// `A(U) = C(U) + B(U)` after checking admissibility.
pub fn char_matrix<T: Real, S: HyperbolicSystem<T> + ?Sized>(sys: &S, u: &[T]) -> Result<DenseMatrix<T>> {
    check_len(sys, u)?;
    sys.admissibility(u)?;
    Ok(sys.char_matrix(u))
}

/// Largest discrepancy between the analytic `C(U)` and central differences of `F`.
pub fn check_jacobian<T: Real, S: HyperbolicSystem<T> + ?Sized>(sys: &S, u: &[T], h: T) -> T {
    let m = sys.num_vars();
    let c = sys.flux_jacobian(u);
    let mut worst = T::zero();
    let two = lit::<T>(2.0);
    for j in 0..m {
        let step = h * T::one().max(u[j].abs());
        let mut up = u.to_vec();
        let mut dn = u.to_vec();
        up[j] = up[j] + step;
        dn[j] = dn[j] - step;
        let fp = sys.flux(&up);
        let fm = sys.flux(&dn);
        for i in 0..m {
            let fd = (fp[i] - fm[i]) / (two * step);
            worst = worst.max((c[(i, j)] - fd).abs());
        }
    }
    worst
}

pub(crate) fn check_len<T: Real, S: HyperbolicSystem<T> + ?Sized>(sys: &S, u: &[T]) -> Result<()> {
    if u.len() != sys.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: sys.num_vars(),
            found: u.len(),
        });
    }
    if !u.iter().all(|x| x.is_finite()) {
        return Err(Error::Inadmissible("non-finite state component".into()));
    }
    Ok(())
}

/// Builds fields from a numerical eigendecomposition of `A(U)`.
///
/// `degeneracy` classifies the field with the given ascending position.
pub fn numerical_fields<T: Real>(
    a: &DenseMatrix<T>,
    degeneracy: impl Fn(usize, &[T]) -> Degeneracy,
) -> Result<Vec<EigenField<T>>> {
    let e = eigen_general(a)?;
    let n = e.values.len();
    Ok((0..n)
        .map(|p| EigenField {
            eigenvalue: e.values[p],
            left: e.left.row(p).to_vec(),
            right: e.right.column(p),
            degeneracy: degeneracy(p, &e.values),
        })
        .collect())
}

/// Converts a primitive-basis field to the conserved basis:
/// `r = (∂U/∂W) r_w`, `l = l_w (∂W/∂U)`, then rescales so `l · r = 1`.
pub fn field_from_primitive<T: Real>(
    eigenvalue: T,
    l_w: &[T],
    r_w: &[T],
    du_dw: &DenseMatrix<T>,
    dw_du: &DenseMatrix<T>,
    degeneracy: Degeneracy,
) -> EigenField<T> {
    let right = du_dw.mul_vec(r_w);
    let mut left = dw_du.vec_mul(l_w);
    let n = crate::num::dot(&left, &right);
    if n != T::zero() && n.is_finite() {
        left.iter_mut().for_each(|x| *x = *x / n);
    }
    EigenField {
        eigenvalue,
        left,
        right,
        degeneracy,
    }
}

/// Test and utility system with constant matrices: `F = C U`, non-conservative
/// part `B ∂U/∂x`, optional linear source `S = K U`.
#[derive(Debug, Clone)]
pub struct LinearSystem<T> {
    pub c: DenseMatrix<T>,
    pub b: Option<DenseMatrix<T>>,
    pub k: Option<DenseMatrix<T>>,
    /// Field classification; every field is linearly degenerate by default.
    pub degeneracy: Vec<Degeneracy>,
}

impl<T: Real> LinearSystem<T> {
    pub fn conservative(c: DenseMatrix<T>) -> Self {
        let n = c.rows();
        Self {
            c,
            b: None,
            k: None,
            degeneracy: vec![Degeneracy::LinearlyDegenerate; n],
        }
    }

    pub fn with_noncons(mut self, b: DenseMatrix<T>) -> Self {
        self.b = Some(b);
        self
    }

    pub fn with_source(mut self, k: DenseMatrix<T>) -> Self {
        self.k = Some(k);
        self
    }
}

impl<T: Real> HyperbolicSystem<T> for LinearSystem<T> {
    fn name(&self) -> &str {
        "linear"
    }

    fn num_vars(&self) -> usize {
        self.c.rows()
    }

    fn flux(&self, u: &[T]) -> Vec<T> {
        self.c.mul_vec(u)
    }

    fn flux_jacobian(&self, _u: &[T]) -> DenseMatrix<T> {
        self.c.clone()
    }

    fn has_nonconservative(&self) -> bool {
        self.b.is_some()
    }

    fn noncons_matrix(&self, _u: &[T]) -> DenseMatrix<T> {
        self.b
            .clone()
            .unwrap_or_else(|| DenseMatrix::zeros(self.num_vars(), self.num_vars()))
    }

    fn has_stiff_source(&self) -> bool {
        self.k.is_some()
    }

    fn source(&self, u: &[T]) -> Vec<T> {
        match &self.k {
            Some(k) => k.mul_vec(u),
            None => vec![T::zero(); self.num_vars()],
        }
    }

    fn source_jacobian(&self, _u: &[T]) -> DenseMatrix<T> {
        self.k
            .clone()
            .unwrap_or_else(|| DenseMatrix::zeros(self.num_vars(), self.num_vars()))
    }

    fn eigensystem(&self, u: &[T], subset: &WaveSubset) -> Result<Vec<EigenField<T>>> {
        if *subset == WaveSubset::None {
            return Ok(Vec::new());
        }
        let fields = numerical_fields(&self.char_matrix(u), |p, _| self.degeneracy[p])?;
        Ok(subset.select(fields))
    }

    fn cons_to_prim(&self, u: &[T]) -> Vec<T> {
        u.to_vec()
    }

    fn prim_to_cons(&self, w: &[T]) -> Vec<T> {
        w.to_vec()
    }

    fn prim_jacobian(&self, _w: &[T]) -> DenseMatrix<T> {
        DenseMatrix::identity(self.num_vars())
    }

    fn primitive_names(&self) -> Vec<String> {
        (0..self.num_vars()).map(|i| format!("u{i}")).collect()
    }

    fn admissibility(&self, u: &[T]) -> Result<()> {
        check_len(self, u)
    }
}
