//! Grid-refinement studies on problems with a reference solution.

use crate::config::ProblemConfig;
use crate::error::{HarnessError, Result};
use crate::run::run_problem;

/// Errors below this are treated as exact and yield no order.
const ROUNDING_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n_zones: usize,
    pub l1: f64,
    /// `log(L1_coarse / L1_fine) / log(n_fine / n_coarse)` against the
    /// previous row; `log2` of the error ratio when grids double.
    pub order: Option<f64>,
}

/// `L1` error of the first primitive variable on each grid.
pub fn convergence_study(cfg: &ProblemConfig, grids: &[usize]) -> Result<Vec<ConvergenceRow>> {
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(grids.len());
    for &n in grids {
        let mut c = cfg.clone();
        c.n_zones = n;
        c.output = None;
        let out = run_problem(&c)?;
        let report = out
            .errors
            .ok_or_else(|| HarnessError::invalid("initial_profile", "no reference solution for this problem"))?;
        let l1 = report.l1[0];
        let order = rows.last().and_then(|prev| {
            (prev.l1 > ROUNDING_FLOOR && l1 > ROUNDING_FLOOR)
                .then(|| (prev.l1 / l1).ln() / (n as f64 / prev.n_zones as f64).ln())
        });
        rows.push(ConvergenceRow { n_zones: n, l1, order });
    }
    Ok(rows)
}
