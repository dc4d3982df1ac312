//! Second-order generalized Riemann problem solvers built on HLL and HLLI,
//! for one-dimensional hyperbolic systems in conservative or
//! non-conservative form with optional stiff sources.
//!
//! Everything is generic over the scalar type through [`num::Real`]; the
//! aliases at the crate root fix it to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod ader;
pub mod error;
pub mod grp;
pub mod linalg;
pub mod num;
pub mod physics;
pub mod riemann;
pub mod scheme;
pub mod system;

pub use error::{Error, Result};
pub use num::Real;
pub use scheme::{Boundary, LimitVars, RunSummary, SchemeConfig, Solver, StepReport};
pub use system::{Degeneracy, EigenField, HyperbolicSystem, WaveSubset};

pub type Matrix = linalg::DenseMatrix<f64>;
pub type Grid = scheme::CellGrid<f64>;
pub type Field = system::EigenField<f64>;
pub type Speeds = riemann::WaveSpeeds<f64>;
pub type DynSystem = Box<dyn system::HyperbolicSystem<f64>>;
pub type EulerSystem = physics::Euler<f64>;
pub type MhdSystem = physics::Mhd<f64>;
pub type SweSystem = physics::ShallowWater<f64>;
pub type NsRelaxSystem = physics::NsRelax<f64>;
