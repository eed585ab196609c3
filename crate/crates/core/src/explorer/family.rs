//! A one-parameter curve of constant linear entropy through the first
//! published state.
//!
//! Along `t ∈ [0, 1]` the coupling grows as `c(t) = 0.125 + 0.01·t` and the
//! `|01⟩` population as `p22(t) = p22(ρ₁) + 0.05·t`, with `p11 = 0`. The
//! `|11⟩` population `p44` is then solved by bisection so that `S₁₂` stays
//! fixed; `p33` takes up the remaining weight. Only the lower branch
//! `p44 ≤ (1 − p22)/2` is used, which contains `ρ₁`.

use serde::{Deserialize, Serialize};

use super::{analyze_xstate, make_xstate, ExplorerError, StateRecord, XStateParams};
use crate::bell::{chsh_max, CorrelationAnalysis};
use crate::paper;
use crate::parallel::map_indexed;
use crate::qstate::{linear_entropy, DensityMatrix};

pub const COUPLING_SLOPE: f64 = 0.01;
pub const P22_SLOPE: f64 = 0.05;
const BISECTION_CAP: usize = 200;

/// Linear entropy of `ρ₁`; the family's default level.
pub fn default_target_entropy() -> f64 {
    linear_entropy(&paper::rho1()).linear_entropy
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyPoint {
    pub t: f64,
    pub params: XStateParams,
    pub rho: DensityMatrix,
    pub s12: f64,
    pub correlations: CorrelationAnalysis,
}

impl FamilyPoint {
    pub fn violates(&self) -> bool {
        self.correlations.violates()
    }

    pub fn record(&self) -> Result<StateRecord, ExplorerError> {
        analyze_xstate(&self.params, format!("family-t{}", crate::format::format_sig(self.t)))
    }
}

/// The state at parameter `t` on the curve with `S₁₂ = target_entropy`.
pub fn one_parameter_family(t: f64, target_entropy: f64) -> Result<FamilyPoint, ExplorerError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(ExplorerError::InvalidArgument(format!("t = {t} outside [0, 1]")));
    }
    if !target_entropy.is_finite() {
        return Err(ExplorerError::InvalidArgument("non-finite target entropy".into()));
    }
    let anchor = paper::rho1_params();
    let c = anchor.c() + COUPLING_SLOPE * t;
    let p22 = anchor.p22() + P22_SLOPE * t;
    let rest = 1.0 - p22;
    let target_purity = 1.0 - target_entropy;
    let purity = |p44: f64| {
        let p33 = rest - p44;
        p22 * p22 + p33 * p33 + p44 * p44 + 2.0 * c * c
    };

    // Purity falls monotonically on [0, rest/2].
    let (mut lo, mut hi) = (0.0, rest / 2.0);
    if !(purity(lo) >= target_purity && purity(hi) <= target_purity) {
        return Err(ExplorerError::NoRoot { t, target: target_entropy });
    }
    for _ in 0..BISECTION_CAP {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if purity(mid) > target_purity {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let p44 = if (purity(lo) - target_purity).abs() <= (purity(hi) - target_purity).abs() {
        lo
    } else {
        hi
    };

    let params = XStateParams::new(0.0, p22, rest - p44, p44, c)
        .map_err(|_| ExplorerError::NoRoot { t, target: target_entropy })?;
    let rho = make_xstate(&params)?;
    Ok(FamilyPoint {
        t,
        params,
        s12: linear_entropy(&rho).linear_entropy,
        correlations: chsh_max(&rho)?,
        rho,
    })
}

/// `points` evenly spaced samples of the family, `t = 0` first.
pub fn family_sweep(points: usize, target_entropy: f64) -> Result<Vec<FamilyPoint>, ExplorerError> {
    if points == 0 {
        return Err(ExplorerError::InvalidArgument("points must be at least 1".into()));
    }
    let t_of = |k: usize| {
        if points == 1 {
            0.0
        } else {
            k as f64 / (points - 1) as f64
        }
    };
    map_indexed(0..points, |k| one_parameter_family(t_of(k), target_entropy))
        .into_iter()
        .collect()
}

/// Range of `t` on which the family violates CHSH.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ViolatingInterval {
    pub start: f64,
    pub end: f64,
}

/// The first contiguous run of violating samples, with interior endpoints
/// refined by bisection on `chsh_max(t) − 2`.
pub fn violating_interval(
    points: usize,
    target_entropy: f64,
) -> Result<Option<ViolatingInterval>, ExplorerError> {
    let sweep = family_sweep(points.max(2), target_entropy)?;
    let Some(first) = sweep.iter().position(FamilyPoint::violates) else {
        return Ok(None);
    };
    let last = sweep[first..]
        .iter()
        .position(|p| !p.violates())
        .map_or(sweep.len() - 1, |offset| first + offset - 1);

    let start = if first == 0 {
        sweep[0].t
    } else {
        refine_crossing(sweep[first - 1].t, sweep[first].t, target_entropy)?
    };
    let end = if last == sweep.len() - 1 {
        sweep[last].t
    } else {
        refine_crossing(sweep[last].t, sweep[last + 1].t, target_entropy)?
    };
    Ok(Some(ViolatingInterval { start, end }))
}

/// Bisection for the point where violation switches on or off between `a`
/// and `b`. Returns the endpoint on the violating side.
fn refine_crossing(a: f64, b: f64, target_entropy: f64) -> Result<f64, ExplorerError> {
    let violates = |t: f64| -> Result<bool, ExplorerError> {
        Ok(one_parameter_family(t, target_entropy)?.violates())
    };
    let side_a = violates(a)?;
    let (mut lo, mut hi) = (a, b);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if violates(mid)? == side_a {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if side_a { lo } else { hi })
}
