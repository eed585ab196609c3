//! Seeded random restarts with stochastic hill-climbing over X-state
//! parameters, looking for CHSH violation at high linear entropy.

use rand::Rng;

use super::sampling::{rng_for, standard_normal};
use super::{analyze_xstate, ExplorerError, StateRecord, XStateParams};
use crate::bell::CLASSICAL_BOUND;
use crate::parallel::map_indexed;

/// Weight on entropy shortfall relative to the CHSH objective.
pub const PENALTY_WEIGHT: f64 = 1e3;
pub const MAX_EVALUATIONS: usize = 100_000;
const CLIMB_STEPS: usize = 100;
const EVALUATIONS_PER_RESTART: usize = CLIMB_STEPS + 1;
const BATCH: usize = 32;
const INITIAL_STEP: f64 = 0.05;
const STEP_DECAY: f64 = 0.97;
/// Records closer than this in every parameter count as the same state.
const DISTINCT_TOL: f64 = 1e-9;
/// Clearance required above the entropy threshold.
pub const ENTROPY_MARGIN: f64 = 1e-6;
/// Clearance required above the classical bound.
pub const CHSH_MARGIN: f64 = 1e-3;

fn score(params: &XStateParams, threshold: f64) -> f64 {
    let target = threshold + ENTROPY_MARGIN;
    params.chsh_max() - PENALTY_WEIGHT * (target - params.linear_entropy()).max(0.0)
}

fn qualifies(s12: f64, chsh: f64, threshold: f64) -> bool {
    s12 >= threshold + ENTROPY_MARGIN && chsh > CLASSICAL_BOUND + CHSH_MARGIN
}

fn random_params(rng: &mut impl Rng) -> XStateParams {
    let e: [f64; 4] = std::array::from_fn(|_| -(1.0 - rng.gen::<f64>()).ln());
    let total: f64 = e.iter().sum();
    let p = e.map(|x| x / total);
    let c = (p[1] * p[2]).sqrt() * rng.gen::<f64>();
    project(p, c).expect("simplex draw is feasible")
}

/// Clamps to the feasible set: non-negative populations summing to one and
/// `0 ≤ c ≤ √(p22·p33)`.
fn project(p: [f64; 4], c: f64) -> Option<XStateParams> {
    let p = p.map(|x| x.max(0.0));
    let total: f64 = p.iter().sum();
    if !(total > 0.0) {
        return None;
    }
    let p = p.map(|x| x / total);
    let c = c.clamp(0.0, (p[1] * p[2]).sqrt());
    XStateParams::new(p[0], p[1], p[2], p[3], c).ok()
}

struct Climb {
    params: XStateParams,
    score: f64,
}

fn climb(seed: u64, restart: usize, threshold: f64) -> Climb {
    let mut rng = rng_for(seed, restart as u64);
    let mut params = random_params(&mut rng);
    let mut best = score(&params, threshold);
    let mut step = INITIAL_STEP;
    for _ in 0..CLIMB_STEPS {
        let [p11, p22, p33, p44, c] = params.as_array();
        let mut jitter = || step * standard_normal(&mut rng);
        let proposal = project(
            [p11 + jitter(), p22 + jitter(), p33 + jitter(), p44 + jitter()],
            c + jitter(),
        );
        if let Some(candidate) = proposal {
            let s = score(&candidate, threshold);
            if s > best {
                params = candidate;
                best = s;
            }
        }
        step *= STEP_DECAY;
    }
    Climb { params, score: best }
}

/// At least `count` distinct X-states with `S₁₂ ≥ threshold` that violate
/// CHSH, each clearing both bounds by [`ENTROPY_MARGIN`] and
/// [`CHSH_MARGIN`]. Every returned record is re-derived from its parameters
/// by the full analysis path, not taken from the search loop.
pub fn find_counterexamples(
    threshold: f64,
    count: usize,
    seed: u64,
) -> Result<Vec<StateRecord>, ExplorerError> {
    if !(0.0..=0.75).contains(&threshold) {
        return Err(ExplorerError::InvalidArgument(format!(
            "threshold {threshold} outside [0, 0.75]"
        )));
    }
    if count == 0 {
        return Err(ExplorerError::InvalidArgument("count must be at least 1".into()));
    }

    let max_restarts = MAX_EVALUATIONS / EVALUATIONS_PER_RESTART;
    let mut found: Vec<StateRecord> = Vec::new();
    let mut best: Option<Climb> = None;
    let mut restarts = 0;

    while restarts < max_restarts {
        let batch_end = (restarts + BATCH).min(max_restarts);
        let climbs = map_indexed(restarts..batch_end, |r| climb(seed, r, threshold));
        for (offset, result) in climbs.into_iter().enumerate() {
            let restart = restarts + offset;
            let p = result.params;
            if qualifies(p.linear_entropy(), p.chsh_max(), threshold) {
                let record = analyze_xstate(&p, format!("search-{seed}-{restart}"))?;
                let distinct = found.iter().all(|other| {
                    let q = other.params.expect("search records carry parameters");
                    p.as_array()
                        .iter()
                        .zip(q.as_array())
                        .any(|(a, b)| (a - b).abs() > DISTINCT_TOL)
                });
                if qualifies(record.s12, record.chsh_max, threshold) && distinct {
                    found.push(record);
                    if found.len() == count {
                        return Ok(found);
                    }
                }
            }
            if best.as_ref().is_none_or(|b| result.score > b.score) {
                best = Some(result);
            }
        }
        restarts = batch_end;
    }

    let best = best
        .and_then(|b| analyze_xstate(&b.params, format!("search-{seed}-best")).ok())
        .map(Box::new);
    Err(ExplorerError::SearchExhausted {
        evaluations: restarts * EVALUATIONS_PER_RESTART,
        found: found.len(),
        requested: count,
        best,
    })
}
