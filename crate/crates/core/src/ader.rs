//! Second-order space-time predictor with implicit treatment of stiff sources.
//!
//! The local solution is expanded as `U(x, t) = U(t) + x ∂U(t)/∂x` with a
//! linear-in-time Galerkin representation through the half-time and
//! full-time values. The coupled equations are solved by Picard iteration;
//! each pass linearizes the source about the current iterate and solves for
//! both time levels at once.

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, Lu};
use crate::num::{lit, norm_inf, Real};
use crate::system::HyperbolicSystem;

/// Predicted half-time and full-time states and gradients.
#[derive(Debug, Clone, PartialEq)]
pub struct AderState<T> {
    pub u_half: Vec<T>,
    pub g_half: Vec<T>,
    pub u_one: Vec<T>,
    pub g_one: Vec<T>,
    pub picard_iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AderOptions {
    pub max_picard: usize,
    /// Relative Picard tolerance on `‖ΔU½‖∞ + ‖ΔU¹‖∞`.
    pub tol: f64,
    /// Gradients are solved implicitly when `Δt ‖∂S/∂U‖∞` exceeds this.
    pub stiff_threshold: f64,
}

impl Default for AderOptions {
    fn default() -> Self {
        Self {
            max_picard: 25,
            tol: 1e-10,
            stiff_threshold: 1.0,
        }
    }
}

/// Runs the predictor, failing on Picard non-convergence or an inadmissible result.
pub fn ader_predict<T: Real, S: HyperbolicSystem<T> + ?Sized>(
    sys: &S,
    u0: &[T],
    g0: &[T],
    dt: T,
) -> Result<AderState<T>> {
    ader_predict_with(sys, u0, g0, dt, AderOptions::default())
}

pub fn ader_predict_with<T: Real, S: HyperbolicSystem<T> + ?Sized>(
    sys: &S,
    u0: &[T],
    g0: &[T],
    dt: T,
    opts: AderOptions,
) -> Result<AderState<T>> {
    sys.admissibility(u0)?;
    let (state, residual) = ader_iterate(sys, u0, g0, dt, opts);
    if !state.converged {
        return Err(Error::PicardNonConvergence {
            iterations: state.picard_iterations,
            residual: crate::num::to_f64(residual),
        });
    }
    sys.admissibility(&state.u_half)?;
    sys.admissibility(&state.u_one)?;
    Ok(state)
}

/// Picard iteration that always returns its last iterate; `converged` reports
/// whether the tolerance was met. The second value is the final residual.
pub fn ader_iterate<T: Real, S: HyperbolicSystem<T> + ?Sized>(
    sys: &S,
    u0: &[T],
    g0: &[T],
    dt: T,
    opts: AderOptions,
) -> (AderState<T>, T) {
    let m = u0.len();
    let mut uh = u0.to_vec();
    let mut u1 = u0.to_vec();
    let mut gh = g0.to_vec();
    let mut g1 = g0.to_vec();
    let stiff = sys.has_stiff_source();
    let c46 = lit::<T>(4.0 / 6.0) * dt;
    let c16 = lit::<T>(1.0 / 6.0) * dt;
    let tol = lit::<T>(opts.tol) * (T::one() + norm_inf(u0));
    let mut residual = T::infinity();

    for pass in 1..=opts.max_picard {
        let ah = sys.char_matrix(&uh).mul_vec(&gh);
        let a1 = sys.char_matrix(&u1).mul_vec(&g1);

        let (new_uh, new_u1, new_gh, new_g1) = if stiff {
            let sh = sys.source(&uh);
            let s1 = sys.source(&u1);
            let jh = sys.source_jacobian(&uh);
            let j1 = sys.source_jacobian(&u1);
            // residuals of the two U equations at the current iterate
            let rh: Vec<T> = (0..m)
                .map(|i| uh[i] - u0[i] - c46 * sh[i] + c16 * s1[i] + c46 * ah[i] - c16 * a1[i])
                .collect();
            let r1: Vec<T> = (0..m).map(|i| u1[i] - u0[i] - dt * sh[i] + dt * ah[i]).collect();
            let big = coupled_matrix(&jh, &j1, c46, c16, dt);
            let lu = Lu::factor_perturbed(&big, T::epsilon() * big.norm_inf().max(T::one()))
                .expect("square by construction");
            let mut rhs: Vec<T> = rh.iter().chain(&r1).map(|&x| -x).collect();
            let delta = lu.solve(&rhs).expect("dimension matches");
            let nuh: Vec<T> = (0..m).map(|i| uh[i] + delta[i]).collect();
            let nu1: Vec<T> = (0..m).map(|i| u1[i] + delta[m + i]).collect();

            let stiffness = dt * jh.norm_inf().max(j1.norm_inf());
            let (ngh, ng1) = if stiffness > lit(opts.stiff_threshold) {
                rhs.clear();
                rhs.extend_from_slice(g0);
                rhs.extend_from_slice(g0);
                let g = lu.solve(&rhs).expect("dimension matches");
                (g[..m].to_vec(), g[m..].to_vec())
            } else {
                let jgh = jh.mul_vec(&gh);
                let jg1 = j1.mul_vec(&g1);
                let ngh = (0..m).map(|i| g0[i] + c46 * jgh[i] - c16 * jg1[i]).collect();
                let ng1 = (0..m).map(|i| g0[i] + dt * jgh[i]).collect();
                (ngh, ng1)
            };
            (nuh, nu1, ngh, ng1)
        } else {
            let nuh = (0..m).map(|i| u0[i] - c46 * ah[i] + c16 * a1[i]).collect();
            let nu1 = (0..m).map(|i| u0[i] - dt * ah[i]).collect();
            (nuh, nu1, g0.to_vec(), g0.to_vec())
        };

        residual = diff_inf(&new_uh, &uh) + diff_inf(&new_u1, &u1);
        uh = new_uh;
        u1 = new_u1;
        gh = new_gh;
        g1 = new_g1;
        let finite = uh.iter().chain(&u1).all(|x| x.is_finite());
        if !finite {
            return (state(uh, gh, u1, g1, pass, false), residual);
        }
        if residual <= tol {
            return (state(uh, gh, u1, g1, pass, true), residual);
        }
    }
    (state(uh, gh, u1, g1, opts.max_picard, false), residual)
}

fn state<T>(u_half: Vec<T>, g_half: Vec<T>, u_one: Vec<T>, g_one: Vec<T>, it: usize, ok: bool) -> AderState<T> {
    AderState {
        u_half,
        g_half,
        u_one,
        g_one,
        picard_iterations: it,
        converged: ok,
    }
}

fn diff_inf<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |m, (&x, &y)| m.max((x - y).abs()))
}

/// `[[I − (4/6)Δt J½, (1/6)Δt J¹], [−Δt J½, I]]`
fn coupled_matrix<T: Real>(jh: &DenseMatrix<T>, j1: &DenseMatrix<T>, c46: T, c16: T, dt: T) -> DenseMatrix<T> {
    let m = jh.rows();
    DenseMatrix::from_fn(2 * m, 2 * m, |i, j| {
        let eye = if i == j { T::one() } else { T::zero() };
        match (i < m, j < m) {
            (true, true) => eye - c46 * jh[(i, j)],
            (true, false) => c16 * j1[(i, j - m)],
            (false, true) => -dt * jh[(i - m, j)],
            (false, false) => eye,
        }
    })
}

/// Time evolution of the predicted solution, `U½ (2 − 2t/Δt) + U¹ (2t/Δt − 1)`.
pub fn fan_evaluate<T: Real>(a: &AderState<T>, t: T, dt: T) -> Vec<T> {
    let two = lit::<T>(2.0);
    let wh = two - two * t / dt;
    let w1 = two * t / dt - T::one();
    a.u_half.iter().zip(&a.u_one).map(|(&h, &o)| wh * h + w1 * o).collect()
}

/// Side of a zone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Half-time trace at a zone face, `U½ ± (Δx/2) ∂U½/∂x`.
pub fn cell_face_trace<T: Real>(a: &AderState<T>, side: Side, dx: T) -> Vec<T> {
    let h = dx / lit(2.0);
    let s = match side {
        Side::Right => h,
        Side::Left => -h,
    };
    a.u_half.iter().zip(&a.g_half).map(|(&u, &g)| u + s * g).collect()
}

/// Closed-form amplification factor of the predictor for `du/dt = −u/ε`.
pub fn relaxation_amplification(tau: f64) -> f64 {
    (1.0 - tau / 3.0) / (1.0 + 2.0 * tau / 3.0 + tau * tau / 6.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::LinearSystem;

    #[test]
    fn lax_wendroff_predictor() {
        let a = DenseMatrix::<f64>::from_rows(&[[0.2, 1.0], [0.5, -0.3]]).unwrap();
        let sys = LinearSystem::conservative(a.clone());
        let (u0, g0, dt) = ([1.0, 2.0], [0.3, -0.4], 0.1);
        let st = ader_predict(&sys, &u0, &g0, dt).unwrap();
        let ag = a.mul_vec(&g0);
        for i in 0..2 {
            assert!((st.u_half[i] - (u0[i] - 0.5 * dt * ag[i])).abs() < 1e-14);
            assert!((st.u_one[i] - (u0[i] - dt * ag[i])).abs() < 1e-14);
        }
        assert_eq!(st.g_half, g0.to_vec());
        assert_eq!(st.g_one, g0.to_vec());
    }

    #[test]
    fn scalar_relaxation() {
        for tau in [1e-3, 1.0, 10.0, 1e3, 1e6] {
            let eps = 1.0;
            let sys = LinearSystem::conservative(DenseMatrix::<f64>::zeros(1, 1))
                .with_source(DenseMatrix::diag(&[-1.0 / eps]));
            let st = ader_predict(&sys, &[1.0], &[0.0], tau * eps).unwrap();
            assert!((st.u_one[0] - relaxation_amplification(tau)).abs() < 1e-12, "{tau}");
        }
    }

    #[test]
    fn fan_weights() {
        let st = AderState {
            u_half: vec![1.0],
            g_half: vec![2.0],
            u_one: vec![3.0],
            g_one: vec![0.0],
            picard_iterations: 1,
            converged: true,
        };
        assert_eq!(fan_evaluate(&st, 0.5, 1.0), vec![1.0]);
        assert_eq!(fan_evaluate(&st, 1.0, 1.0), vec![3.0]);
        assert_eq!(fan_evaluate(&st, 0.0, 1.0), vec![-1.0]);
        assert_eq!(cell_face_trace(&st, Side::Right, 0.5), vec![1.5]);
        assert_eq!(cell_face_trace(&st, Side::Left, 0.5), vec![0.5]);
    }
}
