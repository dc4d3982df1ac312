//! Named problem configurations, stored as checked-in config files.

use crate::config::{parse_config, ProblemConfig};
use crate::error::{HarnessError, Result};

const PRESETS: &[(&str, &str)] = &[
    ("euler-colliding", include_str!("../presets/euler-colliding.cfg")),
    ("euler-smooth-pulse", include_str!("../presets/euler-smooth-pulse.cfg")),
    ("euler-stationary-contact", include_str!("../presets/euler-stationary-contact.cfg")),
    ("lax", include_str!("../presets/lax.cfg")),
    ("mhd-alfven-stationary", include_str!("../presets/mhd-alfven-stationary.cfg")),
    ("mhd-brio-wu", include_str!("../presets/mhd-brio-wu.cfg")),
    ("mhd-dai-woodward", include_str!("../presets/mhd-dai-woodward.cfg")),
    ("mhd-seven-wave", include_str!("../presets/mhd-seven-wave.cfg")),
    ("mhd-switch-on", include_str!("../presets/mhd-switch-on.cfg")),
    ("ns-relax-mu0.001", include_str!("../presets/ns-relax-mu0.001.cfg")),
    ("ns-relax-mu0.01", include_str!("../presets/ns-relax-mu0.01.cfg")),
    ("ns-relax-mu0.2", include_str!("../presets/ns-relax-mu0.2.cfg")),
    ("ns-relax-mu2", include_str!("../presets/ns-relax-mu2.cfg")),
    ("sod", include_str!("../presets/sod.cfg")),
    ("swe-rp0", include_str!("../presets/swe-rp0.cfg")),
    ("swe-rp1", include_str!("../presets/swe-rp1.cfg")),
    ("swe-rp2", include_str!("../presets/swe-rp2.cfg")),
    ("swe-rp3", include_str!("../presets/swe-rp3.cfg")),
    ("swe-rp4", include_str!("../presets/swe-rp4.cfg")),
    ("swe-slope-1", include_str!("../presets/swe-slope-1.cfg")),
    ("swe-slope-2", include_str!("../presets/swe-slope-2.cfg")),
    ("swe-slope-3", include_str!("../presets/swe-slope-3.cfg")),
];

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}

/// Raw text of a preset.
pub fn preset_text(name: &str) -> Result<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| HarnessError::UnknownPreset(name.to_string()))
}

pub fn preset(name: &str) -> Result<ProblemConfig> {
    parse_config(preset_text(name)?)
}
