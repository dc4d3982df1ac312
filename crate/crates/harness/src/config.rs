//! Problem descriptions in a flat `key = value` text format.
//!
//! ```text
//! # Sod shock tube
//! system = euler
//! gamma = 1.4
//! domain_left = -0.5
//! domain_right = 0.5
//! n_zones = 200
//! x_disc = 0
//! left_state = 1, 0, 0, 0, 1
//! right_state = 0.125, 0, 0, 0, 0.1
//! t_end = 0.2
//! ```
//!
//! States are primitive variables. Instead of two states an analytic
//! `initial_profile` may be named together with its parameters.

use std::collections::BTreeMap;
use std::path::PathBuf;

use grp_core::physics::{by_name, parameter_keys, SYSTEM_NAMES};
use grp_core::riemann::FlattenerMode;
use grp_core::scheme::{Boundary, LimitVars, SchemeConfig, Solver};

use crate::error::{HarnessError, Result};

const SCHEME_KEYS: [&str; 16] = [
    "system",
    "domain_left",
    "domain_right",
    "n_zones",
    "x_disc",
    "left_state",
    "right_state",
    "initial_profile",
    "cfl",
    "t_end",
    "solver",
    "stiff",
    "boundary",
    "flattener",
    "limiter_vars",
    "center_smooth_term",
];

const PROFILE_KEYS: [&str; 6] = ["h0", "q0", "bed_slope", "amplitude", "velocity", "pressure"];

/// Initial data.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    /// `left` for `x < x_disc`, `right` otherwise.
    TwoState { x_disc: f64, left: Vec<f64>, right: Vec<f64> },
    /// Shallow water at depth `h0` with a `0.2 h0` bump on `[1, 1.25]`,
    /// discharge `q0` and bottom `b = bed_slope x`.
    SlopePerturbation { h0: f64, q0: f64, bed_slope: f64 },
    /// Euler density wave `ρ = 1 + amplitude sin(2π x / L)` carried at
    /// constant `velocity` and `pressure` over a periodic domain of length `L`.
    DensitySine { amplitude: f64, velocity: f64, pressure: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig {
    pub system: String,
    pub params: BTreeMap<String, f64>,
    pub domain_left: f64,
    pub domain_right: f64,
    pub n_zones: usize,
    pub initial: InitialCondition,
    pub cfl: f64,
    pub t_end: f64,
    pub solver: Solver,
    pub stiff: bool,
    pub boundary: Boundary,
    pub flattener: FlattenerMode,
    pub limiter_vars: LimitVars,
    pub center_smooth_term: bool,
    pub output: Option<PathBuf>,
}

impl ProblemConfig {
    pub fn scheme(&self) -> SchemeConfig {
        SchemeConfig {
            solver: self.solver,
            cfl: self.cfl,
            stiff: self.stiff,
            flattener: self.flattener,
            limiter_vars: self.limiter_vars,
            center_smooth_term: self.center_smooth_term,
            ..SchemeConfig::default()
        }
    }

    pub fn param(&self, key: &str) -> Option<f64> {
        self.params.get(key).copied()
    }

    /// Checks cross-field constraints.
    pub fn validate(&self) -> Result<()> {
        if !(self.domain_left < self.domain_right) {
            return Err(HarnessError::invalid("domain_right", "must exceed domain_left"));
        }
        if self.n_zones < 8 {
            return Err(HarnessError::invalid("n_zones", format!("at least 8 zones required, got {}", self.n_zones)));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(HarnessError::invalid("cfl", format!("must lie in (0, 1], got {}", self.cfl)));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(HarnessError::invalid("t_end", "must be positive"));
        }
        let sys = by_name::<f64>(&self.system, &self.params).map_err(|e| HarnessError::invalid("system", e.to_string()))?;
        let m = sys.num_vars();
        match &self.initial {
            InitialCondition::TwoState { x_disc, left, right } => {
                if !(self.domain_left < *x_disc && *x_disc < self.domain_right) {
                    return Err(HarnessError::invalid("x_disc", "must lie strictly inside the domain"));
                }
                for (key, s) in [("left_state", left), ("right_state", right)] {
                    if s.len() != m {
                        return Err(HarnessError::invalid(
                            key,
                            format!("{} expects {m} primitive values, got {}", self.system, s.len()),
                        ));
                    }
                    sys.admissibility(&sys.prim_to_cons(s))
                        .map_err(|e| HarnessError::invalid(key, e.to_string()))?;
                }
            }
            InitialCondition::SlopePerturbation { h0, .. } => {
                if sys.name() != "swe" {
                    return Err(HarnessError::invalid("initial_profile", "slope_perturbation needs system = swe"));
                }
                if !(*h0 > 0.0) {
                    return Err(HarnessError::invalid("h0", "must be positive"));
                }
            }
            InitialCondition::DensitySine { amplitude, pressure, .. } => {
                if sys.name() != "euler" {
                    return Err(HarnessError::invalid("initial_profile", "density_sine needs system = euler"));
                }
                if !(amplitude.abs() < 1.0) || !(*pressure > 0.0) {
                    return Err(HarnessError::invalid("amplitude", "density and pressure must stay positive"));
                }
            }
        }
        Ok(())
    }
}

struct Entry {
    line: usize,
    value: String,
}

fn is_param_key(key: &str) -> bool {
    SYSTEM_NAMES
        .iter()
        .any(|s| parameter_keys(s).map(|k| k.contains(&key)).unwrap_or(false))
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<ProblemConfig> {
    let mut entries = Entries::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((k, v)) = content.split_once('=') else {
            return Err(HarnessError::Parse {
                line,
                message: format!("expected `key = value`, found `{content}`"),
            });
        };
        let key = k.trim().to_string();
        let value = v.trim().to_string();
        if key.is_empty() || value.is_empty() {
            return Err(HarnessError::Parse {
                line,
                message: "empty key or value".into(),
            });
        }
        if !(SCHEME_KEYS.contains(&key.as_str())
            || PROFILE_KEYS.contains(&key.as_str())
            || key == "output"
            || is_param_key(&key))
        {
            return Err(HarnessError::Parse {
                line,
                message: format!("unknown key `{key}`"),
            });
        }
        if let Some(prev) = entries.get(&key) {
            return Err(HarnessError::Parse {
                line,
                message: format!("duplicate key `{key}` (first set on line {})", prev.line),
            });
        }
        entries.insert(key, Entry { line, value });
    }
    build(entries)
}

type Entries = BTreeMap<String, Entry>;

fn parse_err(ent: &Entry, message: String) -> HarnessError {
    HarnessError::Parse { line: ent.line, message }
}

fn required(e: &mut Entries, key: &str) -> Result<Entry> {
    e.remove(key).ok_or_else(|| HarnessError::invalid(key, "missing required key"))
}

fn real(key: &str, ent: Entry) -> Result<f64> {
    ent.value
        .parse::<f64>()
        .map_err(|_| parse_err(&ent, format!("`{key}` expects a number, found `{}`", ent.value)))
}

fn opt_real(e: &mut Entries, key: &str) -> Result<Option<f64>> {
    e.remove(key).map(|x| real(key, x)).transpose()
}

fn profile_real(e: &mut Entries, key: &str, profile: &str) -> Result<f64> {
    opt_real(e, key)?.ok_or_else(|| HarnessError::invalid(key, format!("required by initial_profile = {profile}")))
}

fn flag(e: &mut Entries, key: &str, default: bool) -> Result<bool> {
    let Some(ent) = e.remove(key) else {
        return Ok(default);
    };
    match ent.value.to_ascii_lowercase().as_str() {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        _ => Err(parse_err(&ent, format!("`{key}` expects true or false, found `{}`", ent.value))),
    }
}

fn list(key: &str, ent: Entry) -> Result<Vec<f64>> {
    ent.value
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| parse_err(&ent, format!("`{key}` expects comma-separated numbers, found `{}`", s.trim())))
        })
        .collect()
}

fn choice<V: std::str::FromStr>(e: &mut Entries, key: &str) -> Result<Option<V>>
where
    V::Err: std::fmt::Display,
{
    e.remove(key)
        .map(|x| x.value.parse::<V>().map_err(|err| HarnessError::invalid(key, err.to_string())))
        .transpose()
}

fn build(mut e: Entries) -> Result<ProblemConfig> {
    let system = required(&mut e, "system")?.value;
    let allowed = parameter_keys(&system).map_err(|err| HarnessError::invalid("system", err.to_string()))?;

    let mut params = BTreeMap::new();
    let param_keys: Vec<String> = e.keys().filter(|k| is_param_key(k)).cloned().collect();
    for key in param_keys {
        let ent = e.remove(&key).expect("present");
        if !allowed.contains(&key.as_str()) {
            return Err(HarnessError::invalid(&key, format!("not a parameter of system `{system}`")));
        }
        params.insert(key.clone(), real(&key, ent)?);
    }

    let domain_left = real("domain_left", required(&mut e, "domain_left")?)?;
    let domain_right = real("domain_right", required(&mut e, "domain_right")?)?;
    let nz = required(&mut e, "n_zones")?;
    let n_zones = nz
        .value
        .parse::<usize>()
        .map_err(|_| parse_err(&nz, format!("`n_zones` expects a positive integer, found `{}`", nz.value)))?;
    let t_end = real("t_end", required(&mut e, "t_end")?)?;
    let cfl = opt_real(&mut e, "cfl")?.unwrap_or(0.8);

    let profile = e.remove("initial_profile").map(|x| x.value.to_ascii_lowercase());
    let initial = match profile.as_deref() {
        None | Some("two_state") => InitialCondition::TwoState {
            x_disc: profile_real(&mut e, "x_disc", "two_state")?,
            left: list("left_state", required(&mut e, "left_state")?)?,
            right: list("right_state", required(&mut e, "right_state")?)?,
        },
        Some(p @ "slope_perturbation") => InitialCondition::SlopePerturbation {
            h0: profile_real(&mut e, "h0", p)?,
            q0: profile_real(&mut e, "q0", p)?,
            bed_slope: profile_real(&mut e, "bed_slope", p)?,
        },
        Some(p @ "density_sine") => InitialCondition::DensitySine {
            amplitude: profile_real(&mut e, "amplitude", p)?,
            velocity: profile_real(&mut e, "velocity", p)?,
            pressure: profile_real(&mut e, "pressure", p)?,
        },
        Some(other) => return Err(HarnessError::invalid("initial_profile", format!("unknown profile `{other}`"))),
    };

    let solver = choice::<Solver>(&mut e, "solver")?.unwrap_or_default();
    let boundary = choice::<Boundary>(&mut e, "boundary")?.unwrap_or_default();
    let limiter_vars = choice::<LimitVars>(&mut e, "limiter_vars")?.unwrap_or_default();
    let flattener = match e.remove("flattener").map(|x| x.value.to_ascii_lowercase()) {
        None => FlattenerMode::On,
        Some(s) => match s.as_str() {
            "on" | "true" => FlattenerMode::On,
            "off" | "false" => FlattenerMode::Off,
            "zero" => FlattenerMode::Zero,
            _ => return Err(HarnessError::invalid("flattener", format!("expected on, off or zero, found `{s}`"))),
        },
    };
    let stiff = flag(&mut e, "stiff", true)?;
    let center_smooth_term = flag(&mut e, "center_smooth_term", false)?;
    let output = e.remove("output").map(|x| PathBuf::from(x.value));

    if let Some((key, ent)) = e.into_iter().next() {
        return Err(parse_err(&ent, format!("`{key}` does not apply to this initial profile")));
    }

    let cfg = ProblemConfig {
        system,
        params,
        domain_left,
        domain_right,
        n_zones,
        initial,
        cfl,
        t_end,
        solver,
        stiff,
        boundary,
        flattener,
        limiter_vars,
        center_smooth_term,
        output,
    };
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "system = euler\ndomain_left = 0\ndomain_right = 1\nn_zones = 16\nx_disc = 0.5\n\
                           left_state = 1,0,0,0,1\nright_state = 1,0,0,0,1\nt_end = 0.1\n";

    #[test]
    fn defaults_fill_scheme_options() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.cfl, 0.8);
        assert_eq!(c.solver, Solver::HlliGrp);
        assert!(c.stiff);
        assert_eq!(c.boundary, Boundary::Transmissive);
        assert!(c.params.is_empty());
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = format!("# header\n\n{MINIMAL}gamma = 1.4 # trailing\n");
        assert_eq!(parse_config(&text).unwrap().param("gamma"), Some(1.4));
    }

    #[test]
    fn missing_system() {
        let text = MINIMAL.replace("system = euler\n", "");
        match parse_config(&text) {
            Err(HarnessError::Validation { key, .. }) => assert_eq!(key, "system"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_key_reports_line() {
        let text = format!("{MINIMAL}viscosity_model = fancy\n");
        match parse_config(&text) {
            Err(HarnessError::Parse { line, .. }) => assert_eq!(line, 9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn foreign_parameter_rejected() {
        let text = format!("{MINIMAL}g = 9.81\n");
        assert!(matches!(parse_config(&text), Err(HarnessError::Validation { key, .. }) if key == "g"));
    }

    #[test]
    fn malformed_values() {
        assert!(matches!(
            parse_config(&MINIMAL.replace("n_zones = 16", "n_zones = many")),
            Err(HarnessError::Parse { line: 4, .. })
        ));
        assert!(matches!(
            parse_config(&MINIMAL.replace("n_zones = 16", "n_zones = 4")),
            Err(HarnessError::Validation { key, .. }) if key == "n_zones"
        ));
        assert!(matches!(
            parse_config(&MINIMAL.replace("x_disc = 0.5", "x_disc = 2")),
            Err(HarnessError::Validation { key, .. }) if key == "x_disc"
        ));
        assert!(matches!(
            parse_config(&MINIMAL.replace("1,0,0,0,1\nright", "1,0,0,1\nright")),
            Err(HarnessError::Validation { key, .. }) if key == "left_state"
        ));
        assert!(matches!(parse_config("system euler"), Err(HarnessError::Parse { line: 1, .. })));
        assert!(matches!(
            parse_config(&format!("{MINIMAL}cfl = 0.5\ncfl = 0.6\n")),
            Err(HarnessError::Parse { line: 10, .. })
        ));
    }

    #[test]
    fn profile_keys_need_their_profile() {
        let text = format!("{MINIMAL}h0 = 1\n");
        assert!(matches!(parse_config(&text), Err(HarnessError::Parse { line: 9, .. })));
    }
}
