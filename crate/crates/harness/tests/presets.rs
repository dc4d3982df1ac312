//! Presets audited field by field against a transcription of the published
//! problem tables and texts.

use grp_harness::{preset, preset_names, InitialCondition, ProblemConfig};

const SQRT_4PI: f64 = 3.544_907_701_811_032;

struct TwoState {
    name: &'static str,
    system: &'static str,
    params: &'static [(&'static str, f64)],
    domain: (f64, f64),
    n_zones: usize,
    x_disc: f64,
    left: Vec<f64>,
    right: Vec<f64>,
    cfl: f64,
    t_end: f64,
}

fn euler(name: &'static str, gamma: f64, left: [f64; 5], right: [f64; 5], t_end: f64) -> TwoState {
    let params: &'static [(&str, f64)] = if gamma == 1.4 { &[("gamma", 1.4)] } else { &[("gamma", 5.0 / 3.0)] };
    TwoState {
        name,
        system: "euler",
        params,
        domain: (-0.5, 0.5),
        n_zones: 200,
        x_disc: 0.0,
        left: left.to_vec(),
        right: right.to_vec(),
        cfl: 0.8,
        t_end,
    }
}

fn mhd(name: &'static str, params: &'static [(&'static str, f64)], left: [f64; 7], right: [f64; 7], t_end: f64) -> TwoState {
    TwoState {
        name,
        system: "mhd",
        params,
        domain: (-0.5, 0.5),
        n_zones: 400,
        x_disc: 0.0,
        left: left.to_vec(),
        right: right.to_vec(),
        cfl: 0.8,
        t_end,
    }
}

#[allow(clippy::too_many_arguments)]
fn swe(name: &'static str, l: [f64; 4], r: [f64; 4], t_end: f64, xl: f64, xr: f64, xc: f64) -> TwoState {
    TwoState {
        name,
        system: "swe",
        params: &[("g", 9.81)],
        domain: (xl, xr),
        n_zones: 100,
        x_disc: xc,
        left: l.to_vec(),
        right: r.to_vec(),
        cfl: 0.9,
        t_end,
    }
}

fn ns(name: &'static str, params: &'static [(&'static str, f64)]) -> TwoState {
    TwoState {
        name,
        system: "ns_relax",
        params,
        domain: (-1.0, 1.0),
        n_zones: 100,
        x_disc: 0.0,
        left: vec![1.29, 0.0, 2929.73, 0.0, 0.0],
        right: vec![1.784, 0.0, 4349.31, 0.0, 0.0],
        cfl: 0.7,
        t_end: 0.01,
    }
}

fn table() -> Vec<TwoState> {
    let r = 1.0 / (4.0 * std::f64::consts::PI);
    vec![
        euler("sod", 1.4, [1.0, 0.0, 0.0, 0.0, 1.0], [0.125, 0.0, 0.0, 0.0, 0.1], 0.2),
        euler("lax", 1.4, [0.445, 0.698, 0.0, 0.0, 3.528], [0.5, 0.0, 0.0, 0.0, 0.571], 0.13),
        euler("euler-colliding", 5.0 / 3.0, [1.0, 2.0, 0.0, 0.0, 0.2], [1.5, -2.0, 0.0, 0.0, 0.2], 0.4),
        euler("euler-stationary-contact", 1.4, [1.0, 0.0, 0.0, 0.0, 1.0], [0.1, 0.0, 0.0, 0.0, 1.0], 0.25),
        mhd(
            "mhd-brio-wu",
            &[("gamma", 2.0), ("bx", 0.75 * SQRT_4PI)],
            [1.0, 0.0, 0.0, 0.0, 1.0, SQRT_4PI, 0.0],
            [0.125, 0.0, 0.0, 0.0, 0.1, -SQRT_4PI, 0.0],
            0.1,
        ),
        mhd(
            "mhd-seven-wave",
            &[("gamma", 5.0 / 3.0), ("bx", 2.0)],
            [1.08, 1.2, 0.01, 0.5, 0.95, 3.6, 2.0],
            [1.0, 0.0, 0.0, 0.0, 1.0, 4.0, 2.0],
            0.2,
        ),
        mhd(
            "mhd-dai-woodward",
            &[("gamma", 5.0 / 3.0), ("bx", 0.0)],
            [0.15, 21.55, 1.0, 1.0, 0.28, -2.0, -1.0],
            [0.1, -26.45, 0.0, 0.0, 0.1, 2.0, 1.0],
            0.04,
        ),
        mhd(
            "mhd-switch-on",
            &[("gamma", 5.0 / 3.0), ("bx", SQRT_4PI)],
            [1.0, 0.0, 0.0, 0.0, 1.0, SQRT_4PI, 0.0],
            [0.2, 0.0, 0.0, 0.0, 0.1, 0.0, 0.0],
            0.15,
        ),
        mhd(
            "mhd-alfven-stationary",
            &[("gamma", 1.4), ("bx", 1.0)],
            [r, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0],
            [r, -1.0, -1.0, -1.0, 1.0, 1.0, 1.0],
            0.1,
        ),
        swe("swe-rp0", [2.0, 0.0, 1.0, 0.0], [1.0, 0.0, -1.0, 1.0], 1.0, 0.0, 1.0, 0.5),
        swe("swe-rp1", [1.0, 0.0, 0.0, 0.0], [1e-14, 0.0, 0.0, 0.0], 0.075, 0.0, 1.0, 0.5),
        swe("swe-rp2", [1.46184, 0.0, 0.0, 0.0], [0.30873, 0.0, 0.0, 0.2], 1.0, -5.0, 5.0, 0.0),
        swe("swe-rp3", [0.75, -9.49365, 0.0, 0.0], [1.10594, -4.94074, 0.0, 0.2], 1.0, -15.0, 5.0, 0.0),
        swe("swe-rp4", [0.75, -1.35624, 0.0, 0.0], [1.10594, -4.94074, 0.0, 0.2], 1.0, -10.0, 4.0, 0.0),
        ns("ns-relax-mu2", &[("gamma", 1.4), ("epsilon", 1e-4), ("mu", 2.0)]),
        ns("ns-relax-mu0.2", &[("gamma", 1.4), ("epsilon", 1e-4), ("mu", 0.2)]),
        ns("ns-relax-mu0.01", &[("gamma", 1.4), ("epsilon", 1e-4), ("mu", 0.01)]),
        ns("ns-relax-mu0.001", &[("gamma", 1.4), ("epsilon", 1e-4), ("mu", 0.001)]),
    ]
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-15 * b.abs().max(1.0)
}

fn check_params(cfg: &ProblemConfig, expected: &[(&str, f64)]) {
    assert_eq!(cfg.params.len(), expected.len(), "parameter count");
    for (k, v) in expected {
        let got = cfg.param(k).unwrap_or_else(|| panic!("missing {k}"));
        assert!(close(got, *v), "{k}: {got} vs {v}");
    }
}

#[test]
fn two_state_presets_match_the_tables() {
    for row in table() {
        let cfg = preset(row.name).unwrap();
        assert_eq!(cfg.system, row.system, "{}", row.name);
        check_params(&cfg, row.params);
        assert_eq!((cfg.domain_left, cfg.domain_right), row.domain, "{}", row.name);
        assert_eq!(cfg.n_zones, row.n_zones, "{}", row.name);
        assert_eq!(cfg.cfl, row.cfl, "{}", row.name);
        assert_eq!(cfg.t_end, row.t_end, "{}", row.name);
        let InitialCondition::TwoState { x_disc, left, right } = &cfg.initial else {
            panic!("{} is not a two-state problem", row.name);
        };
        assert_eq!(*x_disc, row.x_disc, "{}", row.name);
        for (got, want) in left.iter().zip(&row.left).chain(right.iter().zip(&row.right)) {
            assert!(close(*got, *want), "{}: {got} vs {want}", row.name);
        }
        assert_eq!((left.len(), right.len()), (row.left.len(), row.right.len()));
    }
}

#[test]
fn slope_presets_match_the_table() {
    let rows = [
        ("swe-slope-1", 0.09564, 0.1, 0.02, -0.01),
        ("swe-slope-2", 0.02402, 0.002, 0.1, -0.01),
        ("swe-slope-3", 0.44894, 2.0, 0.1, -1.0 / 3f64.sqrt()),
    ];
    for (name, h0, q0, n, bx) in rows {
        let cfg = preset(name).unwrap();
        assert_eq!(cfg.system, "swe");
        check_params(&cfg, &[("g", 9.81), ("n_manning", n)]);
        assert_eq!((cfg.domain_left, cfg.domain_right, cfg.n_zones, cfg.cfl), (0.0, 25.0, 100, 0.9));
        match cfg.initial {
            InitialCondition::SlopePerturbation { h0: a, q0: b, bed_slope: c } => {
                assert!(close(a, h0) && close(b, q0) && close(c, bx), "{name}");
            }
            other => panic!("{name}: {other:?}"),
        }
    }
}

#[test]
fn every_preset_is_audited() {
    let audited: Vec<&str> = table()
        .iter()
        .map(|r| r.name)
        .chain(["swe-slope-1", "swe-slope-2", "swe-slope-3", "euler-smooth-pulse"])
        .collect();
    for name in preset_names() {
        assert!(audited.contains(&name), "{name} has no audit row");
    }
}
