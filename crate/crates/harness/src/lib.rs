//! Problem presets, reference solutions, error norms and CSV output for the
//! GRP finite-volume solvers.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod convergence;
pub mod csv;
pub mod error;
pub mod exact;
pub mod norms;
pub mod presets;
pub mod run;

pub use config::{parse_config, InitialCondition, ProblemConfig};
pub use convergence::{convergence_study, ConvergenceRow};
pub use csv::{read_csv, render_csv, write_csv};
pub use error::{HarnessError, Result};
pub use exact::{euler_exact_riemann, star_state, StarState};
pub use norms::{ErrorReport, Reference};
pub use presets::{preset, preset_names, preset_text};
pub use run::{run_problem, RunOutcome};
