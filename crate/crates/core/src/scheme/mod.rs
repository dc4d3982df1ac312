//! One-step second-order finite-volume schemes built on the HLL/HLLI
//! generalized Riemann problem solvers.
//!
//! Conservative systems are advanced in flux form; systems with
//! non-conservative products in fluctuation form. Either form has a variant
//! that predicts zone and in-fan states with the implicit space-time
//! predictor when the source is stiff.

mod grid;
mod step;

pub use grid::{mc_limit, mc_reconstruct, Boundary, CellGrid, LimitVars, GHOST_DEPTH};
pub use step::{
    compute_dt, run_to_time, run_to_time_with, step, step_fluctuation_form, step_fluctuation_form_stiff,
    step_flux_form, step_flux_form_stiff, RunSummary, StepReport,
};

use crate::ader::AderOptions;
use crate::error::{Error, Result};
use crate::riemann::{FixedPointOptions, FlattenerMode};
use crate::system::WaveSubset;

/// Face solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Solver {
    HllGrp,
    #[default]
    HlliGrp,
    /// First order in time; kept for dissipation comparisons.
    Hll,
    /// First order in time; kept for dissipation comparisons.
    Hlli,
}

impl Solver {
    pub fn uses_grp(self) -> bool {
        matches!(self, Solver::HllGrp | Solver::HlliGrp)
    }

    pub fn uses_hlli(self) -> bool {
        matches!(self, Solver::HlliGrp | Solver::Hlli)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Solver::HllGrp => "hll-grp",
            Solver::HlliGrp => "hlli-grp",
            Solver::Hll => "hll",
            Solver::Hlli => "hlli",
        }
    }
}

impl std::str::FromStr for Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "hll-grp" => Ok(Solver::HllGrp),
            "hlli-grp" => Ok(Solver::HlliGrp),
            "hll" => Ok(Solver::Hll),
            "hlli" => Ok(Solver::Hlli),
            other => Err(Error::InvalidParameter(format!("unknown solver '{other}'"))),
        }
    }
}

/// Update form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    Flux,
    Fluctuation,
}

/// Discretisation of the zone-interior term `Δt A(U_j) ∂U_j/∂x` in the
/// fluctuation form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SmoothTerm {
    /// Path jump between the two face traces of the zone. For conservative
    /// systems this is `F(U_j⁺) − F(U_j⁻)`, which makes the fluctuation form
    /// reproduce the flux form.
    #[default]
    PathIntegral,
    /// `Δx A(U_j) ∂U_j/∂x`.
    Linearized,
}

/// State at which the eigenvectors of the HLLI correction are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EigenState {
    /// Average of the two time-advanced face traces.
    #[default]
    TraceAverage,
    /// Time-advanced resolved state in the fan.
    Star,
}

/// Numerical options of the scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeConfig {
    pub solver: Solver,
    pub cfl: f64,
    /// Use the stiff-source variants when the system has a stiff source.
    pub stiff: bool,
    /// Forced update form; chosen from the system when `None`.
    pub form: Option<Form>,
    pub flattener: FlattenerMode,
    pub limiter_vars: LimitVars,
    pub smooth_term: SmoothTerm,
    /// Evaluate the smooth term with the predicted half-time zone state.
    pub center_smooth_term: bool,
    pub eigen_state: EigenState,
    pub wave_subset: WaveSubset,
    /// Positivity floor for density, pressure and depth.
    pub floor: f64,
    pub max_steps: usize,
    pub ader: AderOptions,
    pub fixed_point: FixedPointOptions,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        Self {
            solver: Solver::HlliGrp,
            cfl: 0.8,
            stiff: true,
            form: None,
            flattener: FlattenerMode::On,
            limiter_vars: LimitVars::Primitive,
            smooth_term: SmoothTerm::PathIntegral,
            center_smooth_term: false,
            eigen_state: EigenState::TraceAverage,
            wave_subset: WaveSubset::LinearlyDegenerate,
            floor: 1e-12,
            max_steps: 1_000_000,
            ader: AderOptions::default(),
            fixed_point: FixedPointOptions::default(),
        }
    }
}

impl SchemeConfig {
    pub fn with_solver(mut self, solver: Solver) -> Self {
        self.solver = solver;
        self
    }

    pub fn with_cfl(mut self, cfl: f64) -> Self {
        self.cfl = cfl;
        self
    }
}
