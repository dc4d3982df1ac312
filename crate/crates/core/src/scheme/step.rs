//! Face solves, zone updates and the time loop.

use rayon::prelude::*;

use super::grid::{reconstruct_extended, CellGrid, GHOST_DEPTH};
use super::{EigenState, Form, SchemeConfig, SmoothTerm};
use crate::ader::{ader_iterate, cell_face_trace, AderState, Side};
use crate::error::{Error, Result};
use crate::grp::{evolve_state, grp_gradient_conservative, grp_gradient_noncons, a_squared_grad, GrpFaceInput};
use crate::num::{lit, to_f64, Real};
use crate::riemann::{
    flattener_with, hll_flux, hll_fluctuations, hll_state_conservative, hll_state_noncons_with, hlli_correction,
    path_jump, wave_speed_estimates,
};
use crate::system::HyperbolicSystem;

/// Diagnostics of one accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepReport {
    pub dt_used: f64,
    pub max_signal_speed: f64,
    pub floors_applied: usize,
    /// Faces whose in-fan gradient was zeroed because the stacked system was rank deficient.
    pub faces_degraded: usize,
    pub picard_failures: usize,
    /// Faces whose path-conservative state fell back to the conservative estimate.
    pub fixed_point_failures: usize,
}

/// Accumulated diagnostics of a run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunSummary {
    pub steps: usize,
    pub t_final: f64,
    pub min_dt: f64,
    pub max_dt: f64,
    pub floors_applied: usize,
    pub faces_degraded: usize,
    pub picard_failures: usize,
    pub fixed_point_failures: usize,
}

impl RunSummary {
    fn absorb(&mut self, r: &StepReport) {
        self.steps += 1;
        self.min_dt = if self.steps == 1 { r.dt_used } else { self.min_dt.min(r.dt_used) };
        self.max_dt = self.max_dt.max(r.dt_used);
        self.floors_applied += r.floors_applied;
        self.faces_degraded += r.faces_degraded;
        self.picard_failures += r.picard_failures;
        self.fixed_point_failures += r.fixed_point_failures;
    }
}

/// `cfl Δx / max_j max|λ(U_j)|`
pub fn compute_dt<T: Real, S: HyperbolicSystem<T> + ?Sized>(sys: &S, grid: &CellGrid<T>, cfl: f64) -> Result<T> {
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(Error::InvalidParameter(format!("cfl must lie in (0, 1], got {cfl}")));
    }
    let speeds = grid
        .means
        .par_iter()
        .map(|u| sys.max_speed(u))
        .collect::<Result<Vec<T>>>()?;
    let smax = speeds.into_iter().fold(T::zero(), |m, s| m.max(s));
    if !(smax >= lit(1e-30)) {
        return Err(Error::ZeroSignalSpeed(to_f64(smax)));
    }
    Ok(lit::<T>(cfl) * grid.dx / smax)
}

/// Flux-form update of a conservative system.
pub fn step_flux_form<T: Real, S: HyperbolicSystem<T> + ?Sized>(
    sys: &S,
    grid: &CellGrid<T>,
    dt: T,
    cfg: &SchemeConfig,
) -> Result<(CellGrid<T>, StepReport)> {
    advance(sys, grid, dt, cfg, Form::Flux, false)
}

/// Fluctuation-form update; valid for conservative and non-conservative systems.
pub fn step_fluctuation_form<T: Real, S: HyperbolicSystem<T> + ?Sized>(
    sys: &S,
    grid: &CellGrid<T>,
    dt: T,
    cfg: &SchemeConfig,
) -> Result<(CellGrid<T>, StepReport)> {
    advance(sys, grid, dt, cfg, Form::Fluctuation, false)
}

/// Flux-form update with predicted zone and in-fan states and a
/// half-time source.
pub fn step_flux_form_stiff<T: Real, S: HyperbolicSystem<T> + ?Sized>(
    sys: &S,
    grid: &CellGrid<T>,
    dt: T,
    cfg: &SchemeConfig,
) -> Result<(CellGrid<T>, StepReport)> {
    advance(sys, grid, dt, cfg, Form::Flux, true)
}

/// Fluctuation-form update with predicted zone and in-fan states and a
/// half-time source.
pub fn step_fluctuation_form_stiff<T: Real, S: HyperbolicSystem<T> + ?Sized>(
    sys: &S,
    grid: &CellGrid<T>,
    dt: T,
    cfg: &SchemeConfig,
) -> Result<(CellGrid<T>, StepReport)> {
    advance(sys, grid, dt, cfg, Form::Fluctuation, true)
}

/// Chooses the form from the system (or `cfg.form`) and the stiff path from
/// `cfg.stiff` and the presence of a source.
pub fn step<T: Real, S: HyperbolicSystem<T> + ?Sized>(
    sys: &S,
    grid: &CellGrid<T>,
    dt: T,
    cfg: &SchemeConfig,
) -> Result<(CellGrid<T>, StepReport)> {
    let form = cfg.form.unwrap_or(if sys.has_nonconservative() {
        Form::Fluctuation
    } else {
        Form::Flux
    });
    advance(sys, grid, dt, cfg, form, cfg.stiff && sys.has_stiff_source())
}

/// Advances to `t_end`, clamping the last step to land on it exactly.
pub fn run_to_time<T: Real, S: HyperbolicSystem<T> + ?Sized>(
    sys: &S,
    grid: CellGrid<T>,
    t_end: T,
    cfg: &SchemeConfig,
) -> Result<(CellGrid<T>, RunSummary)> {
    run_to_time_with(sys, grid, t_end, cfg, |_, _, _| {})
}

/// As [`run_to_time`], calling `observer(grid, t, report)` after every step.
pub fn run_to_time_with<T: Real, S: HyperbolicSystem<T> + ?Sized>(
    sys: &S,
    mut grid: CellGrid<T>,
    t_end: T,
    cfg: &SchemeConfig,
    mut observer: impl FnMut(&CellGrid<T>, T, &StepReport),
) -> Result<(CellGrid<T>, RunSummary)> {
    if !(t_end > T::zero()) {
        return Err(Error::InvalidParameter("t_end must be positive".into()));
    }
    let mut t = T::zero();
    let mut summary = RunSummary::default();
    let slack = lit::<T>(1e-12) * t_end;
    while t < t_end {
        if summary.steps >= cfg.max_steps {
            return Err(Error::MaxStepsExceeded(cfg.max_steps));
        }
        let mut dt = compute_dt(sys, &grid, cfg.cfl)?;
        if t + dt >= t_end - slack {
            dt = t_end - t;
        }
        let (next, report) = step(sys, &grid, dt, cfg)?;
        grid = next;
        t = if dt == t_end - t { t_end } else { t + dt };
        summary.absorb(&report);
        observer(&grid, t, &report);
    }
    summary.t_final = to_f64(t);
    Ok((grid, summary))
}

struct FaceOut<T> {
    flux: Vec<T>,
    dm: Vec<T>,
    dp: Vec<T>,
    speed: T,
    degraded: bool,
    fp_fail: bool,
    picard_fail: bool,
}

struct FaceData<'a, T> {
    ul: Vec<T>,
    ur: Vec<T>,
    gl: &'a [T],
    gr: &'a [T],
    ul_half: Vec<T>,
    ur_half: Vec<T>,
}

fn sub<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

fn add<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

fn axpy<T: Real>(a: &[T], s: T, b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x + s * y).collect()
}

/// Predictor on `(u, g)`; returns the state and whether Picard converged.
/// Falls back to a zero gradient, then to a frozen state, when the iterate
/// is unusable.
fn predict<T: Real, S: HyperbolicSystem<T> + ?Sized>(
    sys: &S,
    u: &[T],
    g: &[T],
    dt: T,
    cfg: &SchemeConfig,
) -> (AderState<T>, bool) {
    let usable = |a: &AderState<T>| sys.admissibility(&a.u_half).is_ok() && sys.admissibility(&a.u_one).is_ok();
    let (st, _) = ader_iterate(sys, u, g, dt, cfg.ader);
    if usable(&st) {
        let ok = st.converged;
        return (st, ok);
    }
    let zero = vec![T::zero(); g.len()];
    let (st, _) = ader_iterate(sys, u, &zero, dt, cfg.ader);
    if usable(&st) {
        return (st, false);
    }
    (
        AderState {
            u_half: u.to_vec(),
            g_half: zero.clone(),
            u_one: u.to_vec(),
            g_one: zero,
            picard_iterations: 0,
            converged: false,
        },
        false,
    )
}

/// `A(U½)(U¹ − U½)`, the in-fan time correction of the stiff variants.
fn fan_correction<T: Real, S: HyperbolicSystem<T> + ?Sized>(sys: &S, st: &AderState<T>) -> Vec<T> {
    sys.char_matrix(&st.u_half).mul_vec(&sub(&st.u_one, &st.u_half))
}

fn solve_face<T: Real, S: HyperbolicSystem<T> + ?Sized>(
    sys: &S,
    d: &FaceData<'_, T>,
    dt: T,
    cfg: &SchemeConfig,
    stiff: bool,
) -> Result<FaceOut<T>> {
    let grp = cfg.solver.uses_grp();
    let half = dt / lit(2.0);
    let speeds = wave_speed_estimates(sys, &d.ul, &d.ur)?;
    let mut out = FaceOut {
        flux: Vec::new(),
        dm: Vec::new(),
        dp: Vec::new(),
        speed: speeds.max_abs(),
        degraded: false,
        fp_fail: false,
        picard_fail: false,
    };

    if speeds.right_moving() || speeds.left_moving() {
        let from_left = speeds.right_moving();
        let (u, g) = if from_left { (&d.ul, d.gl) } else { (&d.ur, d.gr) };
        if stiff && grp {
            let (st, ok) = predict(sys, u, g, dt, cfg);
            out.picard_fail = !ok;
            let tc = fan_correction(sys, &st);
            out.flux = add(&sys.flux(u), &tc);
            let jump = path_jump(sys, &d.ul, &d.ur);
            if from_left {
                out.dm = tc.clone();
                out.dp = sub(&jump, &tc);
            } else {
                out.dm = add(&jump, &tc);
                out.dp = tc.iter().map(|&x| -x).collect();
            }
        } else {
            let mut up = if grp { evolve_state(sys, u, g, T::zero(), half) } else { u.clone() };
            if sys.admissibility(&up).is_err() {
                up = u.clone();
            }
            out.flux = sys.flux(&up);
            out.dm = path_jump(sys, &d.ul, &up);
            out.dp = path_jump(sys, &up, &d.ur);
        }
        return Ok(out);
    }

    let conservative = !sys.has_nonconservative();
    let u_star = match hll_state_noncons_with(sys, &d.ul, &d.ur, speeds, cfg.fixed_point) {
        Ok(r) => r.u_star,
        Err(_) => {
            out.fp_fail = true;
            hll_state_conservative(&d.ul, &d.ur, &sys.flux(&d.ul), &sys.flux(&d.ur), speeds)
        }
    };
    let (mut dm, mut dp) = hll_fluctuations(speeds, &u_star, &d.ul, &d.ur);
    let mut flux = if conservative {
        hll_flux(&d.ul, &d.ur, &sys.flux(&d.ul), &sys.flux(&d.ur), speeds)
    } else {
        Vec::new()
    };

    let mut star_half = u_star.clone();
    if grp {
        let input = GrpFaceInput {
            ul: d.ul.clone(),
            ur: d.ur.clone(),
            gl: d.gl.to_vec(),
            gr: d.gr.to_vec(),
            speeds,
            u_star: u_star.clone(),
        };
        let sol = if conservative {
            grp_gradient_conservative(sys, &input)
        } else {
            grp_gradient_noncons(sys, &input)
        };
        out.degraded = sol.degraded;
        let g_star = sol.grad_star;
        // time correction added to F* and D⁻, subtracted from D⁺
        let tc = if stiff {
            let (st, ok) = predict(sys, &u_star, &g_star, dt, cfg);
            out.picard_fail = !ok;
            star_half = st.u_half.clone();
            fan_correction(sys, &st)
        } else {
            star_half = evolve_state(sys, &u_star, &g_star, T::zero(), half);
            a_squared_grad(sys, &u_star, &g_star).iter().map(|&x| -half * x).collect()
        };
        dm = add(&dm, &tc);
        dp = sub(&dp, &tc);
        if conservative {
            flux = add(&flux, &tc);
        }
    }

    if cfg.solver.uses_hlli() {
        let phi = flattener_with(sys, &d.ul, &d.ur, cfg.flattener);
        if phi != T::zero() {
            let avg: Vec<T> = d
                .ul_half
                .iter()
                .zip(&d.ur_half)
                .map(|(&a, &b)| (a + b) / lit(2.0))
                .collect();
            let mut at = match cfg.eigen_state {
                EigenState::TraceAverage => avg,
                EigenState::Star => star_half,
            };
            if sys.admissibility(&at).is_err() {
                at = u_star.clone();
            }
            if let Ok(fields) = sys.eigensystem(&at, &cfg.wave_subset) {
                let c = hlli_correction(speeds, phi, &fields, &sub(&d.ur_half, &d.ul_half));
                if c.iter().all(|x| x.is_finite()) {
                    dm = sub(&dm, &c);
                    dp = add(&dp, &c);
                    if conservative {
                        flux = sub(&flux, &c);
                    }
                }
            }
        }
    }
    out.flux = flux;
    out.dm = dm;
    out.dp = dp;
    Ok(out)
}

fn advance<T: Real, S: HyperbolicSystem<T> + ?Sized>(
    sys: &S,
    grid: &CellGrid<T>,
    dt: T,
    cfg: &SchemeConfig,
    form: Form,
    stiff: bool,
) -> Result<(CellGrid<T>, StepReport)> {
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    if form == Form::Flux && sys.has_nonconservative() {
        return Err(Error::InvalidParameter(
            "flux form requires a system without non-conservative products".into(),
        ));
    }
    let m = sys.num_vars();
    if grid.num_vars() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: grid.num_vars(),
        });
    }
    let n = grid.n_zones;
    let dx = grid.dx;
    let half_dx = dx / lit(2.0);
    let half_dt = dt / lit(2.0);
    let grp = cfg.solver.uses_grp();

    let ext = grid.extended_means(sys);
    for u in &ext[GHOST_DEPTH - 1..GHOST_DEPTH + n + 1] {
        sys.admissibility(u)?;
    }
    let grads = reconstruct_extended(sys, &ext, dx, cfg.limiter_vars, grid.boundary);
    let active = 1..ext.len() - 1;

    // Zone predictions: ADER states on the stiff path, `A(U_j) g_j` otherwise.
    let mut picard_failures = 0;
    let mut ader: Vec<Option<AderState<T>>> = vec![None; ext.len()];
    let mut ag: Vec<Vec<T>> = vec![vec![T::zero(); m]; ext.len()];
    if stiff {
        let states: Vec<(AderState<T>, bool)> = active
            .clone()
            .into_par_iter()
            .map(|k| predict(sys, &ext[k], &grads[k], dt, cfg))
            .collect();
        for (k, (st, ok)) in active.clone().zip(states) {
            if !ok && (GHOST_DEPTH..GHOST_DEPTH + n).contains(&k) {
                picard_failures += 1;
            }
            ader[k] = Some(st);
        }
    } else if grp {
        for k in active.clone() {
            ag[k] = sys.char_matrix(&ext[k]).mul_vec(&grads[k]);
        }
    }

    let faces: Vec<FaceOut<T>> = (0..=n)
        .into_par_iter()
        .map(|f| {
            let (kl, kr) = (f + GHOST_DEPTH - 1, f + GHOST_DEPTH);
            let ul = axpy(&ext[kl], half_dx, &grads[kl]);
            let ur = axpy(&ext[kr], -half_dx, &grads[kr]);
            let (ul_half, ur_half) = match (&ader[kl], &ader[kr]) {
                (Some(a), Some(b)) if grp => (cell_face_trace(a, Side::Right, dx), cell_face_trace(b, Side::Left, dx)),
                _ if grp => (axpy(&ul, -half_dt, &ag[kl]), axpy(&ur, -half_dt, &ag[kr])),
                _ => (ul.clone(), ur.clone()),
            };
            let data = FaceData {
                ul,
                ur,
                gl: &grads[kl],
                gr: &grads[kr],
                ul_half,
                ur_half,
            };
            solve_face(sys, &data, dt, cfg, stiff && grp)
        })
        .collect::<Result<Vec<_>>>()?;

    let ratio = dt / dx;
    let mut means = Vec::with_capacity(n);
    let mut floors = 0;
    for j in 0..n {
        let k = j + GHOST_DEPTH;
        let u0 = &ext[k];
        let mut u: Vec<T> = match form {
            Form::Flux => (0..m)
                .map(|i| u0[i] - ratio * (faces[j + 1].flux[i] - faces[j].flux[i]))
                .collect(),
            Form::Fluctuation => {
                let smooth = smooth_term(sys, u0, &grads[k], ader[k].as_ref(), dx, cfg);
                (0..m)
                    .map(|i| u0[i] - ratio * (faces[j + 1].dm[i] + faces[j].dp[i] + smooth[i]))
                    .collect()
            }
        };
        if let Some(st) = &ader[k] {
            let s = sys.source(&st.u_half);
            u.iter_mut().zip(s).for_each(|(x, s)| *x = *x + dt * s);
        }
        if !u.iter().all(|x| x.is_finite()) {
            return Err(Error::Inadmissible(format!("non-finite state in zone {j}")));
        }
        if sys.apply_floor(&mut u, lit(cfg.floor)) {
            floors += 1;
        }
        sys.admissibility(&u)
            .map_err(|e| Error::Inadmissible(format!("zone {j}: {e}")))?;
        means.push(u);
    }

    let report = StepReport {
        dt_used: to_f64(dt),
        max_signal_speed: faces.iter().fold(0.0, |s, f| s.max(to_f64(f.speed))),
        floors_applied: floors,
        faces_degraded: faces.iter().filter(|f| f.degraded).count(),
        picard_failures: picard_failures + faces.iter().filter(|f| f.picard_fail).count(),
        fixed_point_failures: faces.iter().filter(|f| f.fp_fail).count(),
    };
    let next = CellGrid {
        n_zones: n,
        dx,
        x_origin: grid.x_origin,
        means,
        gradients: grads[GHOST_DEPTH..GHOST_DEPTH + n].to_vec(),
        boundary: grid.boundary,
    };
    Ok((next, report))
}

/// `Δx` times the zone-interior term of the fluctuation form.
fn smooth_term<T: Real, S: HyperbolicSystem<T> + ?Sized>(
    sys: &S,
    u0: &[T],
    g0: &[T],
    ader: Option<&AderState<T>>,
    dx: T,
    cfg: &SchemeConfig,
) -> Vec<T> {
    let (u, g) = match ader {
        Some(st) if cfg.center_smooth_term => (st.u_half.as_slice(), st.g_half.as_slice()),
        _ => (u0, g0),
    };
    if g.iter().all(|&x| x == T::zero()) {
        return vec![T::zero(); u.len()];
    }
    let h = dx / lit(2.0);
    match cfg.smooth_term {
        SmoothTerm::PathIntegral => path_jump(sys, &axpy(u, -h, g), &axpy(u, h, g)),
        SmoothTerm::Linearized => sys.char_matrix(u).mul_vec(g).iter().map(|&x| dx * x).collect(),
    }
}
