//! Concrete systems and a name-based registry.

pub mod euler;
pub mod mhd;
pub mod nsrelax;
pub mod swe;

use std::collections::BTreeMap;

pub use euler::{Euler, EulerParams};
pub use mhd::{Mhd, MhdParams};
pub use nsrelax::{NsRelax, NsRelaxParams, Viscosity};
pub use swe::{ShallowWater, SweParams};

use crate::error::{Error, Result};
use crate::num::Real;
use crate::system::HyperbolicSystem;

/// Registered system names.
pub const SYSTEM_NAMES: [&str; 4] = ["euler", "mhd", "swe", "ns_relax"];

/// Parameter keys understood by each system.
pub fn parameter_keys(name: &str) -> Result<&'static [&'static str]> {
    Ok(match canonical(name)? {
        "euler" => &["gamma"],
        "mhd" => &["gamma", "bx"],
        "swe" => &["g", "n_manning", "dry_tol"],
        _ => &[
            "gamma",
            "epsilon",
            "mu",
            "mu0",
            "t0",
            "beta",
            "sutherland_s",
            "gas_constant",
            "prandtl",
            "heat_conduction",
        ],
    })
}

fn canonical(name: &str) -> Result<&'static str> {
    match name.to_ascii_lowercase().as_str() {
        "euler" => Ok("euler"),
        "mhd" => Ok("mhd"),
        "swe" | "shallow_water" => Ok("swe"),
        "ns_relax" | "nsrelax" | "ns-relax" => Ok("ns_relax"),
        other => Err(Error::UnknownSystem(other.to_string())),
    }
}

/// Builds a system from its name and named parameters. Missing parameters
/// take their defaults.
pub fn by_name<T: Real + 'static>(name: &str, params: &BTreeMap<String, f64>) -> Result<Box<dyn HyperbolicSystem<T>>> {
    let get = |k: &str, d: f64| params.get(k).copied().unwrap_or(d);
    Ok(match canonical(name)? {
        "euler" => Box::new(Euler::new(EulerParams {
            gamma: get("gamma", EulerParams::default().gamma),
        })?),
        "mhd" => {
            let d = MhdParams::default();
            Box::new(Mhd::new(MhdParams {
                gamma: get("gamma", d.gamma),
                bx: get("bx", d.bx),
            })?)
        }
        "swe" => {
            let d = SweParams::default();
            Box::new(ShallowWater::new(SweParams {
                g: get("g", d.g),
                n_manning: get("n_manning", d.n_manning),
                dry_tol: get("dry_tol", d.dry_tol),
            })?)
        }
        _ => {
            let d = NsRelaxParams::default();
            let viscosity = if params.contains_key("mu0") {
                Viscosity::Sutherland {
                    mu0: get("mu0", 0.0),
                    t0: get("t0", 273.15),
                    beta: get("beta", 0.5),
                    s: get("sutherland_s", 110.4),
                }
            } else {
                match d.viscosity {
                    Viscosity::Constant(mu) => Viscosity::Constant(get("mu", mu)),
                    v => v,
                }
            };
            Box::new(NsRelax::new(NsRelaxParams {
                gamma: get("gamma", d.gamma),
                epsilon: get("epsilon", d.epsilon),
                viscosity,
                gas_constant: get("gas_constant", d.gas_constant),
                prandtl: get("prandtl", d.prandtl),
                heat_conduction: get("heat_conduction", 0.0) != 0.0,
            })?)
        }
    })
}
