//! Uniform zone grids, ghost zones and MC-limited reconstruction.

use crate::error::{Error, Result};
use crate::num::{lit, Real};
use crate::system::HyperbolicSystem;

/// Number of ghost zones on each side.
pub const GHOST_DEPTH: usize = 2;

/// Boundary treatment applied to the ghost zones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// Copy the nearest interior mean; ghost gradients are zero.
    #[default]
    Transmissive,
    Periodic,
    /// Mirror with the normal velocity negated.
    Reflective,
    /// Linear extrapolation of the two outermost interior means.
    Extrapolate,
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "transmissive" | "outflow" => Ok(Self::Transmissive),
            "periodic" => Ok(Self::Periodic),
            "reflective" | "wall" => Ok(Self::Reflective),
            "extrapolate" | "linear" => Ok(Self::Extrapolate),
            other => Err(Error::InvalidParameter(format!("unknown boundary kind '{other}'"))),
        }
    }
}

/// Variables in which slopes are limited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LimitVars {
    #[default]
    Primitive,
    Conserved,
}

impl std::str::FromStr for LimitVars {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "primitive" => Ok(Self::Primitive),
            "conserved" => Ok(Self::Conserved),
            other => Err(Error::InvalidParameter(format!("unknown limiter variables '{other}'"))),
        }
    }
}

/// Zone means and gradients on a uniform one-dimensional mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct CellGrid<T> {
    pub n_zones: usize,
    pub dx: T,
    /// Left edge of the first zone.
    pub x_origin: T,
    pub means: Vec<Vec<T>>,
    /// Conserved-variable slopes per unit length from the last reconstruction.
    pub gradients: Vec<Vec<T>>,
    pub boundary: Boundary,
}

impl<T: Real> CellGrid<T> {
    /// Samples `init` at zone centres of `n_zones` equal zones on `[x_left, x_right]`.
    pub fn from_fn(
        x_left: T,
        x_right: T,
        n_zones: usize,
        boundary: Boundary,
        init: impl Fn(T) -> Vec<T>,
    ) -> Result<Self> {
        if n_zones == 0 {
            return Err(Error::InvalidParameter("n_zones must be positive".into()));
        }
        if !(x_right > x_left) {
            return Err(Error::InvalidParameter("domain must have positive length".into()));
        }
        let dx = (x_right - x_left) / lit(n_zones as f64);
        let means: Vec<Vec<T>> = (0..n_zones)
            .map(|j| init(x_left + (lit::<T>(j as f64) + lit(0.5)) * dx))
            .collect();
        Self::from_means(x_left, dx, means, boundary)
    }

    pub fn from_means(x_origin: T, dx: T, means: Vec<Vec<T>>, boundary: Boundary) -> Result<Self> {
        let n = means.len();
        if n == 0 {
            return Err(Error::InvalidParameter("grid needs at least one zone".into()));
        }
        let m = means[0].len();
        if let Some(bad) = means.iter().find(|u| u.len() != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: bad.len(),
            });
        }
        if !(dx > T::zero()) {
            return Err(Error::InvalidParameter("dx must be positive".into()));
        }
        Ok(Self {
            n_zones: n,
            dx,
            x_origin,
            gradients: vec![vec![T::zero(); m]; n],
            means,
            boundary,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.means[0].len()
    }

    pub fn cell_center(&self, j: usize) -> T {
        self.x_origin + (lit::<T>(j as f64) + lit(0.5)) * self.dx
    }

    /// `Σ_j U_j Δx` per component.
    pub fn totals(&self) -> Vec<T> {
        let m = self.num_vars();
        let mut out = vec![T::zero(); m];
        for u in &self.means {
            for (o, &x) in out.iter_mut().zip(u) {
                *o = *o + x * self.dx;
            }
        }
        out
    }

    /// Means extended by [`GHOST_DEPTH`] ghost zones on each side.
    pub fn extended_means<S: HyperbolicSystem<T> + ?Sized>(&self, sys: &S) -> Vec<Vec<T>> {
        let n = self.n_zones;
        let g = GHOST_DEPTH;
        let mut ext = Vec::with_capacity(n + 2 * g);
        let ghost = |k: usize, left: bool| -> Vec<T> {
            // k = 1 is adjacent to the boundary
            let (edge, inner) = if left { (0, k.min(n) - 1) } else { (n - 1, n - k.min(n)) };
            match self.boundary {
                Boundary::Transmissive => self.means[edge].clone(),
                Boundary::Periodic => {
                    if left {
                        self.means[(n * g - k) % n].clone()
                    } else {
                        self.means[(k - 1) % n].clone()
                    }
                }
                Boundary::Reflective => sys.reflect(&self.means[inner]),
                Boundary::Extrapolate => {
                    let next = if left { 1.min(n - 1) } else { n.saturating_sub(2) };
                    let kk = lit::<T>(k as f64);
                    self.means[edge]
                        .iter()
                        .zip(&self.means[next])
                        .map(|(&e, &i)| e + kk * (e - i))
                        .collect()
                }
            }
        };
        for k in (1..=g).rev() {
            ext.push(ghost(k, true));
        }
        ext.extend(self.means.iter().cloned());
        for k in 1..=g {
            ext.push(ghost(k, false));
        }
        ext
    }
}

/// `minmod(2Δ₋, 2Δ₊, (Δ₋+Δ₊)/2)`
pub fn mc_limit<T: Real>(dm: T, dp: T) -> T {
    let two = lit::<T>(2.0);
    let c = (dm + dp) / two;
    let (a, b) = (two * dm, two * dp);
    if a > T::zero() && b > T::zero() && c > T::zero() {
        a.min(b).min(c)
    } else if a < T::zero() && b < T::zero() && c < T::zero() {
        a.max(b).max(c)
    } else {
        T::zero()
    }
}

/// Per-component MC slope per unit length from three consecutive values.
pub fn mc_reconstruct<T: Real>(left: &[T], center: &[T], right: &[T], dx: T) -> Vec<T> {
    center
        .iter()
        .zip(left)
        .zip(right)
        .map(|((&c, &l), &r)| mc_limit(c - l, r - c) / dx)
        .collect()
}

/// Conserved-variable gradients for every extended zone except the outermost
/// ghost on each side, whose gradients are left at zero.
pub(crate) fn reconstruct_extended<T: Real, S: HyperbolicSystem<T> + ?Sized>(
    sys: &S,
    ext: &[Vec<T>],
    dx: T,
    vars: LimitVars,
    boundary: Boundary,
) -> Vec<Vec<T>> {
    let m = ext[0].len();
    let len = ext.len();
    let half = dx / lit(2.0);
    let prims: Vec<Vec<T>> = match vars {
        LimitVars::Primitive => ext.iter().map(|u| sys.cons_to_prim(u)).collect(),
        LimitVars::Conserved => Vec::new(),
    };
    let mut grads = vec![vec![T::zero(); m]; len];
    for k in 1..len - 1 {
        let ghost = k < GHOST_DEPTH || k >= len - GHOST_DEPTH;
        if ghost && boundary == Boundary::Transmissive {
            continue;
        }
        let g = match vars {
            LimitVars::Conserved => mc_reconstruct(&ext[k - 1], &ext[k], &ext[k + 1], dx),
            LimitVars::Primitive => {
                let gw = mc_reconstruct(&prims[k - 1], &prims[k], &prims[k + 1], dx);
                sys.prim_jacobian(&prims[k]).mul_vec(&gw)
            }
        };
        if !g.iter().all(|x| x.is_finite()) {
            continue;
        }
        // Fall back to a constant profile when either face trace is inadmissible.
        let lo: Vec<T> = ext[k].iter().zip(&g).map(|(&u, &s)| u - half * s).collect();
        let hi: Vec<T> = ext[k].iter().zip(&g).map(|(&u, &s)| u + half * s).collect();
        if sys.admissibility(&lo).is_ok() && sys.admissibility(&hi).is_ok() {
            grads[k] = g;
        }
    }
    grads
}
