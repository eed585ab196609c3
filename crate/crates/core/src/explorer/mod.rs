//! Constructive search over X-shaped states: grid scans, counterexample
//! mining above the entropy threshold, a constant-entropy family through
//! the first published state, and random sampling.

pub mod csv;
pub mod family;
pub mod sampling;
pub mod search;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bell::{chsh_max, exceeds_classical_bound, BellError};
use crate::entanglement::{concurrence, EntanglementError};
use crate::parallel::map_indexed;
use crate::qstate::{linear_entropy, ComplexMatrix4, DensityMatrix, StateError, RENORMALIZE_TRACE_TOL};

pub use family::{
    default_target_entropy, family_sweep, one_parameter_family, violating_interval, FamilyPoint,
    ViolatingInterval,
};
pub use sampling::{sample_random_state, sample_records, sample_states};
pub use search::find_counterexamples;

/// Tolerance on `p11 + p22 + p33 + p44 = 1` and on `c² ≤ p22·p33`.
pub const PARAM_TOL: f64 = 1e-12;

/// The entropy bound claimed to rule out CHSH violation: `1/√2 − 1/4`.
pub fn santos_threshold() -> f64 {
    std::f64::consts::FRAC_1_SQRT_2 - 0.25
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExplorerError {
    #[error("infeasible X-state parameters: {0}")]
    InfeasibleParams(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid has no feasible points")]
    EmptyGrid,
    #[error("search exhausted after {evaluations} evaluations ({found} of {requested} found)")]
    SearchExhausted {
        evaluations: usize,
        found: usize,
        requested: usize,
        best: Option<Box<StateRecord>>,
    },
    #[error("no state with linear entropy {target} on the family at t = {t}")]
    NoRoot { t: f64, target: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Bell(#[from] BellError),
    #[error(transparent)]
    Entanglement(#[from] EntanglementError),
}

/// Populations and the real `|01⟩–|10⟩` coherence of an X-shaped state
/// with vanishing `|00⟩–|11⟩` coherence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XStateParams {
    p11: f64,
    p22: f64,
    p33: f64,
    p44: f64,
    c: f64,
}

impl XStateParams {
    pub fn new(p11: f64, p22: f64, p33: f64, p44: f64, c: f64) -> Result<Self, ExplorerError> {
        let all = [p11, p22, p33, p44, c];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(ExplorerError::InfeasibleParams("non-finite value".into()));
        }
        if let Some(p) = [p11, p22, p33, p44].into_iter().find(|&p| p < 0.0) {
            return Err(ExplorerError::InfeasibleParams(format!("negative population {p}")));
        }
        if c < 0.0 {
            return Err(ExplorerError::InfeasibleParams(format!("negative coupling {c}")));
        }
        let sum = p11 + p22 + p33 + p44;
        if (sum - 1.0).abs() > PARAM_TOL {
            return Err(ExplorerError::InfeasibleParams(format!("populations sum to {sum}")));
        }
        if c * c > p22 * p33 + PARAM_TOL {
            return Err(ExplorerError::InfeasibleParams(format!(
                "c² = {} exceeds p22·p33 = {}",
                c * c,
                p22 * p33
            )));
        }
        Ok(Self { p11, p22, p33, p44, c })
    }

    /// Rescales all five values by the population sum when it is within
    /// the renormalisation tolerance of one.
    pub fn normalized(p11: f64, p22: f64, p33: f64, p44: f64, c: f64) -> Result<Self, ExplorerError> {
        let sum = p11 + p22 + p33 + p44;
        if !((sum - 1.0).abs() <= RENORMALIZE_TRACE_TOL) {
            return Err(ExplorerError::InfeasibleParams(format!("populations sum to {sum}")));
        }
        Self::new(p11 / sum, p22 / sum, p33 / sum, p44 / sum, c / sum)
    }

    pub fn p11(&self) -> f64 {
        self.p11
    }

    pub fn p22(&self) -> f64 {
        self.p22
    }

    pub fn p33(&self) -> f64 {
        self.p33
    }

    pub fn p44(&self) -> f64 {
        self.p44
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.p11, self.p22, self.p33, self.p44, self.c]
    }

    pub fn matrix(&self) -> ComplexMatrix4 {
        let mut m = ComplexMatrix4::from_real_diagonal([self.p11, self.p22, self.p33, self.p44]);
        m[(1, 2)].re = self.c;
        m[(2, 1)].re = self.c;
        m
    }

    /// `1 − tr ρ²` in closed form.
    pub fn linear_entropy(&self) -> f64 {
        1.0 - (self.p11 * self.p11
            + self.p22 * self.p22
            + self.p33 * self.p33
            + self.p44 * self.p44
            + 2.0 * self.c * self.c)
    }

    /// `2√(u₁ + u₂)` in closed form: `T = diag(2c, 2c, p11 − p22 − p33 + p44)`.
    pub fn chsh_max(&self) -> f64 {
        let transverse = 4.0 * self.c * self.c;
        let longitudinal = (self.p11 - self.p22 - self.p33 + self.p44).powi(2);
        2.0 * (transverse + transverse.max(longitudinal)).sqrt()
    }
}

/// Builds the X-state and validates it under the strict trace policy.
pub fn make_xstate(params: &XStateParams) -> Result<DensityMatrix, ExplorerError> {
    DensityMatrix::strict(&params.matrix())
        .map_err(|e| ExplorerError::InfeasibleParams(e.to_string()))
}

/// One analysed state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub label: String,
    pub params: Option<XStateParams>,
    pub s12: f64,
    pub s_norm: f64,
    pub concurrence: f64,
    pub chsh_max: f64,
    pub satisfies_santos: bool,
    pub violates_chsh: bool,
}

/// Linear entropy, concurrence and CHSH maximum of a state, with the
/// threshold and violation flags.
pub fn analyze(rho: &DensityMatrix) -> Result<StateRecord, ExplorerError> {
    let mixedness = linear_entropy(rho);
    let correlations = chsh_max(rho)?;
    Ok(StateRecord {
        label: String::new(),
        params: None,
        s12: mixedness.linear_entropy,
        s_norm: mixedness.normalized_linear_entropy,
        concurrence: concurrence(rho)?,
        chsh_max: correlations.chsh_max,
        satisfies_santos: mixedness.linear_entropy >= santos_threshold(),
        violates_chsh: exceeds_classical_bound(correlations.chsh_max),
    })
}

pub fn analyze_xstate(params: &XStateParams, label: impl Into<String>) -> Result<StateRecord, ExplorerError> {
    let mut record = analyze(&make_xstate(params)?)?;
    record.label = label.into();
    record.params = Some(*params);
    Ok(record)
}

/// `steps` evenly spaced values from `lo` to `hi` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridRange {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl GridRange {
    pub fn new(lo: f64, hi: f64, steps: usize) -> Result<Self, ExplorerError> {
        let range = Self { lo, hi, steps };
        range.check()?;
        Ok(range)
    }

    pub fn fixed(value: f64) -> Self {
        Self { lo: value, hi: value, steps: 1 }
    }

    fn check(&self) -> Result<(), ExplorerError> {
        if !(self.lo.is_finite() && self.hi.is_finite()) {
            return Err(ExplorerError::InvalidGrid("non-finite bound".into()));
        }
        if self.steps == 0 {
            return Err(ExplorerError::InvalidGrid("steps must be at least 1".into()));
        }
        if self.lo > self.hi {
            return Err(ExplorerError::InvalidGrid(format!("lo {} > hi {}", self.lo, self.hi)));
        }
        Ok(())
    }

    pub fn value(&self, k: usize) -> f64 {
        if self.steps == 1 {
            self.lo
        } else if k + 1 == self.steps {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * k as f64 / (self.steps - 1) as f64
        }
    }
}

/// Scan over `(c, p22, p44)` with `p11` fixed and `p33` the remainder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub c_range: GridRange,
    pub p22_range: GridRange,
    pub p44_range: GridRange,
    pub p11: f64,
}

impl ScanGrid {
    pub fn len(&self) -> usize {
        self.c_range.steps * self.p22_range.steps * self.p44_range.steps
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn point(&self, index: usize) -> (usize, usize, usize) {
        let inner = self.p44_range.steps;
        let middle = self.p22_range.steps;
        (index / (middle * inner), (index / inner) % middle, index % inner)
    }
}

fn scan_point(grid: &ScanGrid, index: usize) -> Option<StateRecord> {
    let (i, j, k) = grid.point(index);
    let c = grid.c_range.value(i);
    let p22 = grid.p22_range.value(j);
    let p44 = grid.p44_range.value(k);
    let mut p33 = 1.0 - grid.p11 - p22 - p44;
    if p33 < 0.0 && p33 >= -PARAM_TOL {
        p33 = 0.0;
    }
    let params = XStateParams::new(grid.p11, p22, p33, p44, c).ok()?;
    analyze_xstate(&params, format!("scan-{i}-{j}-{k}")).ok()
}

/// One record per feasible grid point, `c` outermost and `p44` innermost.
pub fn scan_family(grid: &ScanGrid) -> Result<Vec<StateRecord>, ExplorerError> {
    grid.c_range.check()?;
    grid.p22_range.check()?;
    grid.p44_range.check()?;
    if !grid.p11.is_finite() || grid.p11 < 0.0 {
        return Err(ExplorerError::InvalidGrid(format!("p11 = {}", grid.p11)));
    }
    let records: Vec<StateRecord> = map_indexed(0..grid.len(), |idx| scan_point(grid, idx))
        .into_iter()
        .flatten()
        .collect();
    if records.is_empty() {
        return Err(ExplorerError::EmptyGrid);
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paper;

    #[test]
    fn threshold_is_computed_not_rounded() {
        assert!((santos_threshold() - 0.457106781186547).abs() < 1e-12);
        assert!(santos_threshold() > 0.457);
    }

    #[test]
    fn make_xstate_reproduces_rho1() {
        let rho = make_xstate(&paper::rho1_params()).unwrap();
        assert!(rho.matrix().max_abs_diff(paper::rho1().matrix()) == 0.0);
    }

    #[test]
    fn make_xstate_reproduces_rho2_after_normalization() {
        let rho = make_xstate(&paper::rho2_params()).unwrap();
        assert!(rho.matrix().max_abs_diff(paper::rho2().matrix()) < 1e-15);
    }

    #[test]
    fn uniform_populations_give_maximally_mixed() {
        let params = XStateParams::new(0.25, 0.25, 0.25, 0.25, 0.0).unwrap();
        assert_eq!(make_xstate(&params).unwrap(), DensityMatrix::maximally_mixed());
    }

    #[test]
    fn infeasible_params_are_rejected() {
        assert!(XStateParams::new(0.0, 0.5, 0.5, 0.0, 0.6).is_err());
        assert!(XStateParams::new(0.0, 0.5, 0.6, 0.0, 0.1).is_err());
        assert!(XStateParams::new(-0.1, 0.6, 0.5, 0.0, 0.1).is_err());
        assert!(XStateParams::new(0.0, 0.5, 0.5, 0.0, -0.1).is_err());
    }

    #[test]
    fn closed_forms_agree_with_full_analysis() {
        for params in [paper::rho1_params(), paper::rho2_params()] {
            let record = analyze_xstate(&params, "x").unwrap();
            assert!((params.linear_entropy() - record.s12).abs() < 1e-15);
            assert!((params.chsh_max() - record.chsh_max).abs() < 1e-12);
        }
    }

    #[test]
    fn paper_states_flags() {
        let r1 = analyze(&paper::rho1()).unwrap();
        assert!(r1.satisfies_santos && r1.violates_chsh);
        let r2 = analyze(&paper::rho2()).unwrap();
        assert!(r2.satisfies_santos && !r2.violates_chsh);
        let mixed = analyze(&DensityMatrix::maximally_mixed()).unwrap();
        assert_eq!(mixed.s12, 0.75);
        assert_eq!(mixed.chsh_max, 0.0);
        assert!(mixed.satisfies_santos && !mixed.violates_chsh);
    }

    #[test]
    fn grid_values_hit_both_ends() {
        let r = GridRange::new(0.1, 0.2, 11).unwrap();
        assert_eq!(r.value(0), 0.1);
        assert_eq!(r.value(10), 0.2);
        assert!((r.value(5) - 0.15).abs() < 1e-15);
        assert!(GridRange::new(0.2, 0.1, 3).is_err());
        assert!(GridRange::new(0.1, 0.2, 0).is_err());
    }

    #[test]
    fn scan_through_rho1_matches_direct_analysis() {
        let p = paper::rho1_params();
        let grid = ScanGrid {
            c_range: GridRange::fixed(p.c()),
            p22_range: GridRange::fixed(p.p22()),
            p44_range: GridRange::fixed(p.p44()),
            p11: 0.0,
        };
        let records = scan_family(&grid).unwrap();
        assert_eq!(records.len(), 1);
        let direct = analyze(&paper::rho1()).unwrap();
        assert!((records[0].chsh_max - 2.05699).abs() < 1e-4);
        assert!((records[0].chsh_max - direct.chsh_max).abs() < 1e-12);
        assert!((records[0].s12 - direct.s12).abs() < 1e-12);
    }

    #[test]
    fn diagonal_scan_is_separable() {
        let grid = ScanGrid {
            c_range: GridRange::fixed(0.0),
            p22_range: GridRange::new(0.0, 0.6, 7).unwrap(),
            p44_range: GridRange::new(0.0, 0.4, 5).unwrap(),
            p11: 0.1,
        };
        let records = scan_family(&grid).unwrap();
        assert!(!records.is_empty());
        for r in &records {
            let p = r.params.unwrap();
            let t33 = p.p11() - p.p22() - p.p33() + p.p44();
            assert_eq!(r.concurrence, 0.0);
            assert!((r.chsh_max - 2.0 * t33.abs()).abs() < 1e-12);
            assert!(r.chsh_max <= 2.0 + 1e-12);
        }
    }

    #[test]
    fn scan_order_is_c_then_p22_then_p44() {
        let grid = ScanGrid {
            c_range: GridRange::new(0.0, 0.1, 2).unwrap(),
            p22_range: GridRange::new(0.3, 0.4, 2).unwrap(),
            p44_range: GridRange::new(0.0, 0.1, 2).unwrap(),
            p11: 0.0,
        };
        let labels: Vec<_> = scan_family(&grid).unwrap().into_iter().map(|r| r.label).collect();
        assert_eq!(
            labels,
            [
                "scan-0-0-0", "scan-0-0-1", "scan-0-1-0", "scan-0-1-1", "scan-1-0-0",
                "scan-1-0-1", "scan-1-1-0", "scan-1-1-1"
            ]
        );
    }

    #[test]
    fn single_point_grid_at_maximally_mixed() {
        let grid = ScanGrid {
            c_range: GridRange::fixed(0.0),
            p22_range: GridRange::fixed(0.25),
            p44_range: GridRange::fixed(0.25),
            p11: 0.25,
        };
        let records = scan_family(&grid).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].s12, 0.75);
    }

    #[test]
    fn infeasible_grid_is_empty() {
        let grid = ScanGrid {
            c_range: GridRange::fixed(0.4),
            p22_range: GridRange::new(0.0, 0.1, 3).unwrap(),
            p44_range: GridRange::fixed(0.0),
            p11: 0.0,
        };
        assert_eq!(scan_family(&grid), Err(ExplorerError::EmptyGrid));
    }
}
