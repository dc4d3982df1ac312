//! Grid initialisation, the time loop and error evaluation for a configuration.

use std::f64::consts::PI;

use grp_core::physics::by_name;
use grp_core::scheme::{run_to_time, Boundary, CellGrid, RunSummary};
use grp_core::system::HyperbolicSystem;

use crate::config::{InitialCondition, ProblemConfig};
use crate::csv::write_csv;
use crate::error::Result;
use crate::exact::{sample, star_state};
use crate::norms::{ErrorReport, Reference};

pub struct RunOutcome {
    pub system: Box<dyn HyperbolicSystem<f64>>,
    pub initial: CellGrid<f64>,
    pub grid: CellGrid<f64>,
    pub summary: RunSummary,
    pub errors: Option<ErrorReport>,
}

/// Primitive initial state at `x`.
pub fn initial_primitive(cfg: &ProblemConfig, x: f64) -> Vec<f64> {
    match &cfg.initial {
        InitialCondition::TwoState { x_disc, left, right } => {
            if x <= *x_disc {
                left.clone()
            } else {
                right.clone()
            }
        }
        InitialCondition::SlopePerturbation { h0, q0, bed_slope } => {
            let h = if (1.0..=1.25).contains(&x) { 1.2 * h0 } else { *h0 };
            vec![h, q0 / h, 0.0, bed_slope * x]
        }
        InitialCondition::DensitySine {
            amplitude,
            velocity,
            pressure,
        } => {
            let len = cfg.domain_right - cfg.domain_left;
            let phase = 2.0 * PI * (x - cfg.domain_left) / len;
            vec![1.0 + amplitude * phase.sin(), *velocity, 0.0, 0.0, *pressure]
        }
    }
}

/// Zone-centre samples of the initial data.
pub fn initial_grid(cfg: &ProblemConfig, sys: &dyn HyperbolicSystem<f64>) -> Result<CellGrid<f64>> {
    Ok(CellGrid::from_fn(cfg.domain_left, cfg.domain_right, cfg.n_zones, cfg.boundary, |x| {
        sys.prim_to_cons(&initial_primitive(cfg, x))
    })?)
}

/// Primitive reference solution at zone centres and time `t`, when one is known.
pub fn reference_solution(cfg: &ProblemConfig, grid: &CellGrid<f64>, t: f64) -> Result<Option<(Vec<Vec<f64>>, Reference)>> {
    let centres = (0..grid.n_zones).map(|j| grid.cell_center(j));
    match &cfg.initial {
        InitialCondition::TwoState { x_disc, left, right }
            if cfg.system == "euler" && cfg.boundary == Boundary::Transmissive =>
        {
            let gamma = cfg.param("gamma").unwrap_or(1.4);
            let star = star_state(left, right, gamma)?;
            let rows = centres.map(|x| sample(left, right, gamma, star, (x - x_disc) / t)).collect();
            Ok(Some((rows, Reference::ExactRiemann)))
        }
        InitialCondition::DensitySine { velocity, .. } if cfg.boundary == Boundary::Periodic => {
            let len = cfg.domain_right - cfg.domain_left;
            let rows = centres
                .map(|x| {
                    let back = cfg.domain_left + (x - velocity * t - cfg.domain_left).rem_euclid(len);
                    initial_primitive(cfg, back)
                })
                .collect();
            Ok(Some((rows, Reference::Analytic)))
        }
        _ => Ok(None),
    }
}

/// Runs the configuration to `t_end`, writes the CSV when an output path is
/// set, and measures errors against a reference when one exists.
pub fn run_problem(cfg: &ProblemConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let system = by_name::<f64>(&cfg.system, &cfg.params)?;
    let initial = initial_grid(cfg, system.as_ref())?;
    let (grid, summary) = run_to_time(system.as_ref(), initial.clone(), cfg.t_end, &cfg.scheme())?;
    if let Some(path) = &cfg.output {
        write_csv(&grid, system.as_ref(), path)?;
    }
    let errors = reference_solution(cfg, &grid, cfg.t_end)?.map(|(reference, kind)| {
        let computed: Vec<Vec<f64>> = grid.means.iter().map(|u| system.cons_to_prim(u)).collect();
        ErrorReport::compute(system.primitive_names(), &computed, &reference, grid.dx, kind)
    });
    Ok(RunOutcome {
        system,
        initial,
        grid,
        summary,
        errors,
    })
}
