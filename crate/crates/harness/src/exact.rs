//! Exact self-similar solution of the Euler Riemann problem for an ideal gas.
//!
//! Used only as a reference for error norms. States are
//! `(ρ, v_x, v_y, v_z, p)`; the transverse velocities are passive and
//! taken from the side of the contact the sample lies on.

use crate::error::{HarnessError, Result};

/// Star-region pressure and velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarState {
    pub p: f64,
    pub u: f64,
}

struct Side {
    rho: f64,
    u: f64,
    p: f64,
    c: f64,
}

impl Side {
    fn new(w: &[f64], gamma: f64) -> Result<Self> {
        if w.len() != 5 {
            return Err(HarnessError::Oracle(format!("expected 5 primitive values, got {}", w.len())));
        }
        if !(w[0] > 0.0 && w[4] > 0.0) {
            return Err(HarnessError::Oracle("density and pressure must be positive".into()));
        }
        Ok(Self {
            rho: w[0],
            u: w[1],
            p: w[4],
            c: (gamma * w[4] / w[0]).sqrt(),
        })
    }

    /// Pressure function `f_K(p)` and its derivative.
    fn f(&self, p: f64, g: f64) -> (f64, f64) {
        if p > self.p {
            let a = 2.0 / ((g + 1.0) * self.rho);
            let b = (g - 1.0) / (g + 1.0) * self.p;
            let s = (a / (p + b)).sqrt();
            ((p - self.p) * s, s * (1.0 - 0.5 * (p - self.p) / (p + b)))
        } else {
            let e = (g - 1.0) / (2.0 * g);
            let r = p / self.p;
            (
                2.0 * self.c / (g - 1.0) * (r.powf(e) - 1.0),
                r.powf(-(g + 1.0) / (2.0 * g)) / (self.rho * self.c),
            )
        }
    }
}

/// Solves for the star state by Newton iteration on the pressure function.
pub fn star_state(left: &[f64], right: &[f64], gamma: f64) -> Result<StarState> {
    let (l, r) = (Side::new(left, gamma)?, Side::new(right, gamma)?);
    let g = gamma;
    let du = r.u - l.u;
    if 2.0 * (l.c + r.c) / (g - 1.0) <= du {
        return Err(HarnessError::Oracle("the data generate vacuum".into()));
    }
    // Primitive-variable guess, kept positive.
    let pv = 0.5 * (l.p + r.p) - 0.125 * du * (l.rho + r.rho) * (l.c + r.c);
    let mut p = pv.max(1e-8 * l.p.min(r.p));
    for _ in 0..200 {
        let (fl, dl) = l.f(p, g);
        let (fr, dr) = r.f(p, g);
        let res = fl + fr + du;
        if res.abs() <= 1e-12 {
            break;
        }
        let next = p - res / (dl + dr);
        p = if next > 0.0 { next } else { 0.5 * p };
    }
    let (fl, _) = l.f(p, g);
    let (fr, _) = r.f(p, g);
    let res = fl + fr + du;
    if !(res.abs() <= 1e-12 * (1.0 + du.abs() + l.c + r.c)) {
        return Err(HarnessError::Oracle(format!("pressure iteration stalled at residual {res:e}")));
    }
    Ok(StarState {
        p,
        u: 0.5 * (l.u + r.u) + 0.5 * (fr - fl),
    })
}

/// Samples the solution at `xi = x / t`.
pub fn euler_exact_riemann(left: &[f64], right: &[f64], gamma: f64, xi: f64) -> Result<Vec<f64>> {
    let star = star_state(left, right, gamma)?;
    Ok(sample(left, right, gamma, star, xi))
}

/// Samples at `xi` given a precomputed star state.
pub fn sample(left: &[f64], right: &[f64], gamma: f64, star: StarState, xi: f64) -> Vec<f64> {
    let g = gamma;
    let (w, sign) = if xi <= star.u { (left, -1.0) } else { (right, 1.0) };
    let (rho, u, p) = (w[0], w[1], w[4]);
    let c = (g * p / rho).sqrt();
    let ratio = star.p / p;
    let gm = (g - 1.0) / (g + 1.0);
    let out = |r: f64, v: f64, q: f64| vec![r, v, w[2], w[3], q];
    if star.p > p {
        // shock
        let s = u + sign * c * ((g + 1.0) / (2.0 * g) * ratio + (g - 1.0) / (2.0 * g)).sqrt();
        if sign * (xi - s) >= 0.0 {
            out(rho, u, p)
        } else {
            out(rho * (ratio + gm) / (gm * ratio + 1.0), star.u, star.p)
        }
    } else {
        let c_star = c * ratio.powf((g - 1.0) / (2.0 * g));
        let head = u + sign * c;
        let tail = star.u + sign * c_star;
        if sign * (xi - head) >= 0.0 {
            out(rho, u, p)
        } else if sign * (xi - tail) <= 0.0 {
            out(rho * ratio.powf(1.0 / g), star.u, star.p)
        } else {
            // inside the fan
            let cf = 2.0 / (g + 1.0) - sign * gm / c * (u - xi);
            let v = 2.0 / (g + 1.0) * (-sign * c + (g - 1.0) / 2.0 * u + xi);
            out(rho * cf.powf(2.0 / (g - 1.0)), v, p * cf.powf(2.0 * g / (g - 1.0)))
        }
    }
}
