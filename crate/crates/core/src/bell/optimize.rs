//! Numerical search for CHSH settings, used as an independent check on the
//! closed-form maximum.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::linalg3::{self, Vec3};
use super::{chsh_value, correlation_matrix, BellError, ChshSettings};
use crate::qstate::DensityMatrix;

pub const DEFAULT_BUDGET: usize = 200;
/// A sweep that gains less than this ends the refinement.
pub const SWEEP_IMPROVEMENT_TOL: f64 = 1e-9;
const GRID_POINTS: usize = 24;
const GOLDEN_ITERATIONS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizedSettings {
    pub settings: ChshSettings,
    /// Signed `tr(ρB)` at the returned settings.
    pub value: f64,
    /// Full refinement sweeps performed.
    pub sweeps: usize,
    /// Set when `T = 0`: every setting gives zero and the returned one is arbitrary.
    pub degenerate: bool,
}

impl OptimizedSettings {
    pub fn abs_value(&self) -> f64 {
        self.value.abs()
    }
}

fn to_spherical(v: &Vec3) -> (f64, f64) {
    let theta = v[2].clamp(-1.0, 1.0).acos();
    if v[0] == 0.0 && v[1] == 0.0 {
        return (theta, 0.0);
    }
    (theta, v[1].atan2(v[0]).rem_euclid(TAU))
}

fn from_spherical(theta: f64, phi: f64) -> Vec3 {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

/// Eight angles `(θ, φ)` for `a, a′, b, b′`.
#[derive(Clone, Copy)]
struct Angles([f64; 8]);

impl Angles {
    fn from_settings(s: &ChshSettings) -> Self {
        let mut out = [0.0; 8];
        for (k, v) in [s.a(), s.a_prime(), s.b(), s.b_prime()].iter().enumerate() {
            let (theta, phi) = to_spherical(v);
            out[2 * k] = theta;
            out[2 * k + 1] = phi;
        }
        Self(out)
    }

    fn settings(&self) -> ChshSettings {
        let v = |k: usize| from_spherical(self.0[2 * k], self.0[2 * k + 1]);
        ChshSettings::normalized(v(0), v(1), v(2), v(3)).expect("spherical vectors are unit")
    }
}

/// Settings maximising `|tr ρB|`: analytic seed from the singular vectors
/// of `T`, then deterministic coordinate refinement.
pub fn optimize_settings(rho: &DensityMatrix, budget: usize) -> Result<OptimizedSettings, BellError> {
    let t = correlation_matrix(rho)?;
    if linalg3::max_abs(&t) == 0.0 {
        let settings = ChshSettings::tsirelson();
        return Ok(OptimizedSettings {
            settings,
            value: chsh_value(rho, &settings),
            sweeps: 0,
            degenerate: true,
        });
    }

    let (u, v) = linalg3::symmetric_eigenpairs(&linalg3::gram(&t));
    let (u1, u2) = (u[0].max(0.0), u[1].max(0.0));
    let tv1 = linalg3::mat_vec(&t, &v[0]);
    let tv2 = linalg3::mat_vec(&t, &v[1]);
    let a = linalg3::scale(&tv1, 1.0 / linalg3::norm(&tv1));
    let a_prime = if linalg3::norm(&tv2) > 1e-12 {
        linalg3::scale(&tv2, 1.0 / linalg3::norm(&tv2))
    } else {
        linalg3::orthogonal_unit(&a)
    };
    let (sin, cos) = u2.sqrt().atan2(u1.sqrt()).sin_cos();
    let b = linalg3::add(&linalg3::scale(&v[0], cos), &linalg3::scale(&v[1], sin));
    let b_prime = linalg3::sub(&linalg3::scale(&v[0], cos), &linalg3::scale(&v[1], sin));
    let seed = ChshSettings::normalized(a, a_prime, b, b_prime)?;

    optimize_settings_from(rho, &seed, budget)
}

/// Coordinate ascent on `|tr ρB|` over the eight spherical angles,
/// starting from `start`.
pub fn optimize_settings_from(
    rho: &DensityMatrix,
    start: &ChshSettings,
    budget: usize,
) -> Result<OptimizedSettings, BellError> {
    let objective = |angles: &Angles| chsh_value(rho, &angles.settings()).abs();
    let mut angles = Angles::from_settings(start);
    let mut best = objective(&angles);
    let mut sweeps = 0;

    while sweeps < budget.max(1) {
        sweeps += 1;
        let before = best;
        for coord in 0..8 {
            let (x, f) = line_search(&angles, coord, &objective);
            if f > best {
                angles.0[coord] = x;
                best = f;
            }
        }
        // Canonical angles keep φ meaningful away from the poles.
        angles = Angles::from_settings(&angles.settings());
        if best - before < SWEEP_IMPROVEMENT_TOL {
            break;
        }
    }

    let settings = angles.settings();
    Ok(OptimizedSettings {
        settings,
        value: chsh_value(rho, &settings),
        sweeps,
        degenerate: false,
    })
}

/// Coarse periodic grid followed by golden-section refinement around the
/// best grid point.
fn line_search(angles: &Angles, coord: usize, objective: &impl Fn(&Angles) -> f64) -> (f64, f64) {
    let eval = |x: f64| {
        let mut trial = *angles;
        trial.0[coord] = x;
        objective(&trial)
    };
    let origin = angles.0[coord];
    let step = TAU / GRID_POINTS as f64;
    let (mut x_best, mut f_best) = (origin, eval(origin));
    for k in 1..GRID_POINTS {
        let x = origin + step * k as f64;
        let f = eval(x);
        if f > f_best {
            x_best = x;
            f_best = f;
        }
    }

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (x_best - step, x_best + step);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (eval(x1), eval(x2));
    for _ in 0..GOLDEN_ITERATIONS {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = eval(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = eval(x1);
        }
    }
    let (x_gs, f_gs) = if f1 > f2 { (x1, f1) } else { (x2, f2) };
    if f_gs > f_best {
        (x_gs, f_gs)
    } else {
        (x_best, f_best)
    }
}
