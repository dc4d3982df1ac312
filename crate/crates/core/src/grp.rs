//! Gradient of the resolved state inside the Riemann fan and the
//! time-centred fluxes and fluctuations built from it.
//!
//! The gradient comes from a least-squares solve of the differentiated jump
//! conditions across the two extremal waves. The wave-curvature unknowns are
//! dropped, so the stacked system is `2M × M`.

use crate::linalg::{least_squares_with, DenseMatrix, Tolerances};
use crate::num::{lit, Real};
use crate::riemann::{btilde_unchecked, WaveSpeeds};
use crate::system::HyperbolicSystem;

/// Inputs of the face gradient problem.
#[derive(Debug, Clone, PartialEq)]
pub struct GrpFaceInput<T> {
    pub ul: Vec<T>,
    pub ur: Vec<T>,
    pub gl: Vec<T>,
    pub gr: Vec<T>,
    pub speeds: WaveSpeeds<T>,
    pub u_star: Vec<T>,
}

/// In-fan gradient `∂U*/∂x`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrpFaceSolution<T> {
    pub grad_star: Vec<T>,
    pub ls_residual: T,
    /// True when the stacked system was rank deficient and the gradient was zeroed.
    pub degraded: bool,
}

/// Gradient from the conservative jump conditions
/// `(S I − A*)² ∂U* = (S I − A_side)² ∂U_side` for `S ∈ {S_R, S_L}`.
pub fn grp_gradient_conservative<T: Real, S: HyperbolicSystem<T> + ?Sized>(
    sys: &S,
    input: &GrpFaceInput<T>,
) -> GrpFaceSolution<T> {
    let a_star = sys.char_matrix(&input.u_star);
    let a_l = sys.char_matrix(&input.ul);
    let a_r = sys.char_matrix(&input.ur);
    let (sl, sr) = (input.speeds.s_left, input.speeds.s_right);
    let sq = |m: DenseMatrix<T>| m.matmul(&m);
    let top = sq(a_star.shifted_neg(sr));
    let bot = sq(a_star.shifted_neg(sl));
    let rhs_top = sq(a_r.shifted_neg(sr)).mul_vec(&input.gr);
    let rhs_bot = sq(a_l.shifted_neg(sl)).mul_vec(&input.gl);
    solve_stacked(top, bot, rhs_top, rhs_bot)
}

/// Gradient from the path-conservative jump conditions
/// `(S I − C* − B̃)(S I − A*) ∂U* = (S I − C_side − B̃)(S I − A_side) ∂U_side`.
///
/// With `B ≡ 0` this reduces to [`grp_gradient_conservative`].
pub fn grp_gradient_noncons<T: Real, S: HyperbolicSystem<T> + ?Sized>(
    sys: &S,
    input: &GrpFaceInput<T>,
) -> GrpFaceSolution<T> {
    let c_star = sys.flux_jacobian(&input.u_star);
    let c_l = sys.flux_jacobian(&input.ul);
    let c_r = sys.flux_jacobian(&input.ur);
    let a_star = sys.char_matrix(&input.u_star);
    let a_l = sys.char_matrix(&input.ul);
    let a_r = sys.char_matrix(&input.ur);
    let bt_r = btilde_unchecked(sys, &input.u_star, &input.ur);
    let bt_l = btilde_unchecked(sys, &input.ul, &input.u_star);
    let (sl, sr) = (input.speeds.s_left, input.speeds.s_right);

    let top = c_star.add(&bt_r).shifted_neg(sr).matmul(&a_star.shifted_neg(sr));
    let bot = c_star.add(&bt_l).shifted_neg(sl).matmul(&a_star.shifted_neg(sl));
    let rhs_top = c_r
        .add(&bt_r)
        .shifted_neg(sr)
        .matmul(&a_r.shifted_neg(sr))
        .mul_vec(&input.gr);
    let rhs_bot = c_l
        .add(&bt_l)
        .shifted_neg(sl)
        .matmul(&a_l.shifted_neg(sl))
        .mul_vec(&input.gl);
    solve_stacked(top, bot, rhs_top, rhs_bot)
}

fn solve_stacked<T: Real>(top: DenseMatrix<T>, bot: DenseMatrix<T>, rt: Vec<T>, rb: Vec<T>) -> GrpFaceSolution<T> {
    let m = top.cols();
    let a = top.vstack(&bot);
    let mut b = rt;
    b.extend(rb);
    let zero = || GrpFaceSolution {
        grad_star: vec![T::zero(); m],
        ls_residual: T::zero(),
        degraded: true,
    };
    if !a.is_finite() || !b.iter().all(|x| x.is_finite()) {
        return zero();
    }
    if b.iter().all(|&x| x == T::zero()) {
        return GrpFaceSolution {
            grad_star: vec![T::zero(); m],
            ls_residual: T::zero(),
            degraded: false,
        };
    }
    match least_squares_with(&a, &b, &Tolerances::default()) {
        Ok(rep) if !rep.is_rank_deficient() => GrpFaceSolution {
            grad_star: rep.solution,
            ls_residual: rep.residual_norm,
            degraded: false,
        },
        Ok(rep) => GrpFaceSolution {
            ls_residual: rep.residual_norm,
            ..zero()
        },
        Err(_) => zero(),
    }
}

/// `U + t (ξ I − A(U)) g`
pub fn evolve_state<T: Real, S: HyperbolicSystem<T> + ?Sized>(sys: &S, u: &[T], g: &[T], xi: T, t: T) -> Vec<T> {
    if t == T::zero() || g.iter().all(|&x| x == T::zero()) {
        return u.to_vec();
    }
    let ag = sys.char_matrix(u).mul_vec(g);
    u.iter()
        .zip(g)
        .zip(ag)
        .map(|((&ui, &gi), agi)| ui + t * (xi * gi - agi))
        .collect()
}

/// `(A(U*))² ∂U*`, the second-order time correction shared by fluxes and fluctuations.
pub fn a_squared_grad<T: Real, S: HyperbolicSystem<T> + ?Sized>(sys: &S, u_star: &[T], grad_star: &[T]) -> Vec<T> {
    let a = sys.char_matrix(u_star);
    a.mul_vec(&a.mul_vec(grad_star))
}

/// Time-centred flux `F* − (Δt/2)(A*)² ∂U*`.
pub fn grp_flux_conservative<T: Real, S: HyperbolicSystem<T> + ?Sized>(
    sys: &S,
    f_star: &[T],
    u_star: &[T],
    grad_star: &[T],
    dt: T,
) -> Vec<T> {
    let corr = a_squared_grad(sys, u_star, grad_star);
    let h = dt / lit(2.0);
    f_star.iter().zip(corr).map(|(&f, c)| f - h * c).collect()
}

/// Time-centred fluctuations `D⁻ − (Δt/2)(A*)² ∂U*`, `D⁺ + (Δt/2)(A*)² ∂U*`.
pub fn grp_fluctuations<T: Real, S: HyperbolicSystem<T> + ?Sized>(
    d_minus: &[T],
    d_plus: &[T],
    sys: &S,
    u_star: &[T],
    grad_star: &[T],
    dt: T,
) -> (Vec<T>, Vec<T>) {
    let corr = a_squared_grad(sys, u_star, grad_star);
    let h = dt / lit(2.0);
    let dm = d_minus.iter().zip(&corr).map(|(&d, &c)| d - h * c).collect();
    let dp = d_plus.iter().zip(&corr).map(|(&d, &c)| d + h * c).collect();
    (dm, dp)
}
