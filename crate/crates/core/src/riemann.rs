//! Face-local HLL and HLLI machinery for conservative and path-conservative systems.

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::num::{lit, norm_inf, to_f64, Real};
use crate::system::{EigenField, HyperbolicSystem};

/// Extremal signal speeds bounding the Riemann fan, `s_left < s_right`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSpeeds<T> {
    pub s_left: T,
    pub s_right: T,
}

impl<T: Real> WaveSpeeds<T> {
    /// Builds a pair, widening it symmetrically to the minimum gap
    /// `1e-12 · max(1, |S_L|, |S_R|)` when the bounds (nearly) coincide.
    pub fn new(s_left: T, s_right: T) -> Self {
        let (lo, hi) = if s_left <= s_right { (s_left, s_right) } else { (s_right, s_left) };
        let gap = lit::<T>(1e-12) * T::one().max(lo.abs()).max(hi.abs());
        if hi - lo >= gap {
            return Self { s_left: lo, s_right: hi };
        }
        let mid = (lo + hi) / lit(2.0);
        let half = gap / lit(2.0);
        Self {
            s_left: mid - half,
            s_right: mid + half,
        }
    }

    pub fn width(&self) -> T {
        self.s_right - self.s_left
    }

    /// True when the whole fan moves to the right (`S_L ≥ 0`).
    pub fn right_moving(&self) -> bool {
        self.s_left >= T::zero()
    }

    /// True when the whole fan moves to the left (`S_R ≤ 0`).
    pub fn left_moving(&self) -> bool {
        self.s_right <= T::zero()
    }

    pub fn max_abs(&self) -> T {
        self.s_left.abs().max(self.s_right.abs())
    }
}

/// Davis-type bounds from the spectra at `U_L`, `U_R` and their average.
pub fn wave_speed_estimates<T: Real, S: HyperbolicSystem<T> + ?Sized>(
    sys: &S,
    ul: &[T],
    ur: &[T],
) -> Result<WaveSpeeds<T>> {
    sys.admissibility(ul)?;
    sys.admissibility(ur)?;
    let avg: Vec<T> = ul.iter().zip(ur).map(|(&a, &b)| (a + b) / lit(2.0)).collect();
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for u in [ul, ur, &avg] {
        let ev = sys.eigenvalues(u)?;
        lo = lo.min(ev[0]);
        hi = hi.max(ev[ev.len() - 1]);
    }
    Ok(WaveSpeeds::new(lo, hi))
}

/// Conservative HLL resolved state.
pub fn hll_state_conservative<T: Real>(ul: &[T], ur: &[T], fl: &[T], fr: &[T], s: WaveSpeeds<T>) -> Vec<T> {
    let inv = T::one() / s.width();
    (0..ul.len())
        .map(|i| (s.s_right * ur[i] - s.s_left * ul[i] - (fr[i] - fl[i])) * inv)
        .collect()
}

/// HLL resolved flux.
pub fn hll_flux<T: Real>(ul: &[T], ur: &[T], fl: &[T], fr: &[T], s: WaveSpeeds<T>) -> Vec<T> {
    let inv = T::one() / s.width();
    let (sl, sr) = (s.s_left, s.s_right);
    (0..ul.len())
        .map(|i| (sr * fl[i] - sl * fr[i] + sr * sl * (ur[i] - ul[i])) * inv)
        .collect()
}

const GAUSS_NODES: [f64; 3] = [
    0.5 - 0.387_298_334_620_741_7, // ½ − ½√(3/5)
    0.5,
    0.5 + 0.387_298_334_620_741_7,
];
const GAUSS_WEIGHTS: [f64; 3] = [5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0];

/// Path-averaged non-conservative matrix along the straight segment from
/// `ua` to `ub`, by 3-point Gauss–Legendre quadrature.
pub fn btilde<T: Real, S: HyperbolicSystem<T> + ?Sized>(sys: &S, ua: &[T], ub: &[T]) -> Result<DenseMatrix<T>> {
    let m = sys.num_vars();
    if !sys.has_nonconservative() {
        return Ok(DenseMatrix::zeros(m, m));
    }
    for &s in &GAUSS_NODES {
        let node = segment_point(ua, ub, lit(s));
        sys.admissibility(&node)?;
    }
    Ok(btilde_unchecked(sys, ua, ub))
}

/// [`btilde`] without admissibility checks at the quadrature nodes.
pub fn btilde_unchecked<T: Real, S: HyperbolicSystem<T> + ?Sized>(sys: &S, ua: &[T], ub: &[T]) -> DenseMatrix<T> {
    let m = sys.num_vars();
    let mut acc = DenseMatrix::zeros(m, m);
    if !sys.has_nonconservative() {
        return acc;
    }
    for (&s, &w) in GAUSS_NODES.iter().zip(&GAUSS_WEIGHTS) {
        let node = segment_point(ua, ub, lit(s));
        acc = acc.add(&sys.noncons_matrix(&node).scale(lit(w)));
    }
    acc
}

fn segment_point<T: Real>(ua: &[T], ub: &[T], s: T) -> Vec<T> {
    ua.iter().zip(ub).map(|(&a, &b)| a + s * (b - a)).collect()
}

/// Jump across the segment path `ua → ub`: `F(ub) − F(ua) + B̃(ua, ub)(ub − ua)`.
pub fn path_jump<T: Real, S: HyperbolicSystem<T> + ?Sized>(sys: &S, ua: &[T], ub: &[T]) -> Vec<T> {
    let fa = sys.flux(ua);
    let fb = sys.flux(ub);
    let mut out: Vec<T> = fb.iter().zip(&fa).map(|(&b, &a)| b - a).collect();
    if sys.has_nonconservative() {
        let du: Vec<T> = ub.iter().zip(ua).map(|(&b, &a)| b - a).collect();
        let bd = btilde_unchecked(sys, ua, ub).mul_vec(&du);
        out.iter_mut().zip(bd).for_each(|(o, x)| *o = *o + x);
    }
    out
}

/// Resolved state of the path-conservative HLL solver.
#[derive(Debug, Clone, PartialEq)]
pub struct HllResolution<T> {
    pub u_star: Vec<T>,
    /// Resolved flux; only meaningful for conservative systems.
    pub f_star: Option<Vec<T>>,
    pub fixed_point_iterations: usize,
    pub converged: bool,
}

/// Options for the fixed-point solve of the path-conservative HLL state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointOptions {
    pub tol: f64,
    pub max_iterations: usize,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iterations: 100,
        }
    }
}

/// Path-conservative HLL state, solved by fixed-point iteration from the
/// conservative HLL state.
pub fn hll_state_noncons<T: Real, S: HyperbolicSystem<T> + ?Sized>(
    sys: &S,
    ul: &[T],
    ur: &[T],
    speeds: WaveSpeeds<T>,
) -> Result<HllResolution<T>> {
    hll_state_noncons_with(sys, ul, ur, speeds, FixedPointOptions::default())
}

pub fn hll_state_noncons_with<T: Real, S: HyperbolicSystem<T> + ?Sized>(
    sys: &S,
    ul: &[T],
    ur: &[T],
    speeds: WaveSpeeds<T>,
    opts: FixedPointOptions,
) -> Result<HllResolution<T>> {
    let fl = sys.flux(ul);
    let fr = sys.flux(ur);
    let mut u = hll_state_conservative(ul, ur, &fl, &fr, speeds);
    if !sys.has_nonconservative() {
        return Ok(HllResolution {
            f_star: Some(hll_flux(ul, ur, &fl, &fr, speeds)),
            u_star: u,
            fixed_point_iterations: 0,
            converged: true,
        });
    }
    let base = u.clone();
    let inv = T::one() / speeds.width();
    let tol = lit::<T>(opts.tol);
    let mut residual = T::infinity();
    for it in 1..=opts.max_iterations {
        let bl = btilde_unchecked(sys, ul, &u);
        let br = btilde_unchecked(sys, &u, ur);
        let dl: Vec<T> = u.iter().zip(ul).map(|(&a, &b)| a - b).collect();
        let dr: Vec<T> = ur.iter().zip(&u).map(|(&a, &b)| a - b).collect();
        let tl = bl.mul_vec(&dl);
        let tr = br.mul_vec(&dr);
        let next: Vec<T> = (0..u.len()).map(|i| base[i] - (tl[i] + tr[i]) * inv).collect();
        residual = next
            .iter()
            .zip(&u)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()));
        let converged = residual <= tol * (T::one() + norm_inf(&next));
        u = next;
        if !u.iter().all(|x| x.is_finite()) {
            break;
        }
        if converged {
            return Ok(HllResolution {
                u_star: u,
                f_star: None,
                fixed_point_iterations: it,
                converged: true,
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iterations,
        residual: to_f64(residual),
        last_iterate: u.iter().map(|&x| to_f64(x)).collect(),
    })
}

/// HLL fluctuations `D⁻ = S_L (U* − U_L)`, `D⁺ = S_R (U_R − U*)`.
pub fn hll_fluctuations<T: Real>(speeds: WaveSpeeds<T>, u_star: &[T], ul: &[T], ur: &[T]) -> (Vec<T>, Vec<T>) {
    let dm = u_star.iter().zip(ul).map(|(&s, &l)| speeds.s_left * (s - l)).collect();
    let dp = ur.iter().zip(u_star).map(|(&r, &s)| speeds.s_right * (r - s)).collect();
    (dm, dp)
}

/// Weight `δ = 1 − min(λ,0)/S_L − max(λ,0)/S_R` for a subsonic fan.
pub fn delta_weight<T: Real>(lambda: T, speeds: WaveSpeeds<T>) -> T {
    T::one() - lambda.min(T::zero()) / speeds.s_left - lambda.max(T::zero()) / speeds.s_right
}

/// How the flattener is applied to the HLLI correction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FlattenerMode {
    /// Shock-sensitive `φ` from the indicator variable.
    #[default]
    On,
    /// `φ = 1` everywhere.
    Off,
    /// `φ = 0` everywhere, which reduces HLLI to HLL.
    Zero,
}

/// Flattener `φ ∈ [0, 1]`, close to zero at strong compressive jumps.
pub fn flattener<T: Real, S: HyperbolicSystem<T> + ?Sized>(sys: &S, ul: &[T], ur: &[T]) -> T {
    flattener_with(sys, ul, ur, FlattenerMode::On)
}

pub fn flattener_with<T: Real, S: HyperbolicSystem<T> + ?Sized>(
    sys: &S,
    ul: &[T],
    ur: &[T],
    mode: FlattenerMode,
) -> T {
    match mode {
        FlattenerMode::Off => return T::one(),
        FlattenerMode::Zero => return T::zero(),
        FlattenerMode::On => {}
    }
    let (Some((ql, vl)), Some((qr, vr))) = (sys.shock_indicator(ul), sys.shock_indicator(ur)) else {
        return T::one();
    };
    flattener_formula(ql, vl, qr, vr)
}

/// The flattener formula on raw indicator values.
pub fn flattener_formula<T: Real>(ql: T, vl: T, qr: T, vr: T) -> T {
    if vr >= vl {
        return T::one();
    }
    let (eta1, eta2) = (lit::<T>(0.25), lit::<T>(0.75));
    let qmin = ql.min(qr);
    if qmin <= T::zero() {
        return if ql == qr { T::one() } else { T::zero() };
    }
    let jump = (qr - ql).abs() / qmin;
    let x = ((jump - eta1) / (eta2 - eta1)).max(T::zero()).min(T::one());
    T::one() - x
}

/// Anti-diffusive HLLI term `φ S_R S_L/(S_R − S_L) Σ δ^p (l^p · dU) r^p`.
///
/// It is subtracted from the HLL flux (or from `D⁻`) and added to `D⁺`.
pub fn hlli_correction<T: Real>(speeds: WaveSpeeds<T>, phi: T, fields: &[EigenField<T>], du: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); du.len()];
    if fields.is_empty() || phi == T::zero() {
        return out;
    }
    let pre = phi * speeds.s_right * speeds.s_left / speeds.width();
    for f in fields {
        let w = delta_weight(f.eigenvalue, speeds) * f.strength(du) * pre;
        for (o, &r) in out.iter_mut().zip(&f.right) {
            *o = *o + w * r;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{Degeneracy, LinearSystem};

    #[test]
    fn gap_enforced() {
        let s = WaveSpeeds::new(1.0f64, 1.0);
        assert!(s.s_left < s.s_right);
        assert!((s.width() - 1e-12).abs() < 1e-15);
        let s = WaveSpeeds::new(-1.0, 2.0);
        assert_eq!((s.s_left, s.s_right), (-1.0, 2.0));
    }

    #[test]
    fn burgers_slot() {
        let s = WaveSpeeds::new(0.0, 2.0);
        let u = hll_state_conservative(&[2.0f64], &[0.0], &[2.0], &[0.0], s);
        assert_eq!(u, vec![1.0]);
    }

    #[test]
    fn rusanov_form() {
        let s = WaveSpeeds::new(-3.0, 3.0);
        let (ul, ur, fl, fr) = ([1.0f64, 2.0], [0.5, -1.0], [0.3, 0.1], [-0.7, 2.0]);
        let f = hll_flux(&ul, &ur, &fl, &fr, s);
        for i in 0..2 {
            let rus = 0.5 * (fl[i] + fr[i]) - 1.5 * (ur[i] - ul[i]);
            assert!((f[i] - rus).abs() < 1e-14);
        }
    }

    #[test]
    fn delta_examples() {
        let s = WaveSpeeds::new(-1.0, 2.0);
        assert_eq!(delta_weight(0.0, s), 1.0);
        assert_eq!(delta_weight(2.0, s), 0.0);
        assert_eq!(delta_weight(1.0, s), 0.5);
        assert_eq!(delta_weight(-1.0, s), 0.0);
    }

    #[test]
    fn flattener_formula_cases() {
        assert_eq!(flattener_formula(1.0, 0.0, 1.0, -1.0), 1.0);
        assert_eq!(flattener_formula(1.0, 0.0, 5.0, 1.0), 1.0);
        assert_eq!(flattener_formula(1.0, 0.0, 2.0, -1.0), 0.0);
        assert!((flattener_formula(1.0f64, 0.0, 1.5, -1.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn constant_b_closed_form() {
        let b0 = DenseMatrix::<f64>::from_rows(&[[0.5, 1.0], [0.2, -0.3]]).unwrap();
        let sys = LinearSystem::conservative(DenseMatrix::zeros(2, 2)).with_noncons(b0.clone());
        let (ul, ur) = ([1.0f64, 2.0], [-0.5, 0.7]);
        let s = WaveSpeeds::new(-2.0, 1.5);
        let res = hll_state_noncons(&sys, &ul, &ur, s).unwrap();
        let du = [ur[0] - ul[0], ur[1] - ul[1]];
        let bdu = b0.mul_vec(&du);
        for i in 0..2 {
            let exact = (1.5 * ur[i] + 2.0 * ul[i] - bdu[i]) / 3.5;
            assert!((res.u_star[i] - exact).abs() < 1e-14);
        }
        assert!(res.fixed_point_iterations <= 2);
    }

    #[test]
    fn hlli_empty_or_flat() {
        let s = WaveSpeeds::new(-1.0, 1.0);
        let f = EigenField {
            eigenvalue: 0.0,
            left: vec![1.0, 0.0],
            right: vec![1.0, 0.0],
            degeneracy: Degeneracy::LinearlyDegenerate,
        };
        assert_eq!(hlli_correction(s, 1.0, &[], &[1.0, 1.0]), vec![0.0, 0.0]);
        assert_eq!(hlli_correction(s, 0.0, std::slice::from_ref(&f), &[1.0, 1.0]), vec![0.0, 0.0]);
        assert_eq!(hlli_correction(s, 1.0, std::slice::from_ref(&f), &[0.0, 3.0]), vec![0.0, 0.0]);
        assert_eq!(hlli_correction(s, 1.0, &[f], &[2.0, 3.0]), vec![-1.0, 0.0]);
    }
}
