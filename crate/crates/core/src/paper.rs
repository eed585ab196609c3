//! The two published example states and the checks that reproduce the
//! reported numbers.
//!
//! Both states share linear entropy `≈ 0.465`, above the claimed bound
//! `1/√2 − 1/4`, yet only the first violates CHSH. The second state's
//! printed entries sum to `1.000003`, so it is loaded with
//! [`TracePolicy::Renormalize`].

use serde::{Deserialize, Serialize};

use crate::explorer::{analyze, santos_threshold, ExplorerError, XStateParams};
use crate::qstate::{ComplexMatrix4, DensityMatrix, TracePolicy};

pub const RHO1_POPULATIONS: [f64; 4] = [0.0, 0.549027, 0.449798, 0.001175];
pub const RHO2_POPULATIONS: [f64; 4] = [0.0, 0.632864, 0.317431, 0.049708];
pub const COUPLING: f64 = 0.125;

pub const PUBLISHED_LINEAR_ENTROPY: f64 = 0.465;
pub const PUBLISHED_CHSH_RHO1: f64 = 2.05699;
pub const PUBLISHED_CHSH_RHO2: f64 = 1.86929;
/// Three printed digits on the entropy.
pub const ENTROPY_TOL: f64 = 5e-4;
pub const CHSH_TOL: f64 = 1e-4;

fn xstate_raw(populations: [f64; 4], coupling: f64) -> ComplexMatrix4 {
    let mut m = ComplexMatrix4::from_real_diagonal(populations);
    m[(1, 2)].re = coupling;
    m[(2, 1)].re = coupling;
    m
}

/// `ρ₁` exactly as printed.
pub fn rho1_raw() -> ComplexMatrix4 {
    xstate_raw(RHO1_POPULATIONS, COUPLING)
}

/// `ρ₂` exactly as printed (trace `1.000003`).
pub fn rho2_raw() -> ComplexMatrix4 {
    xstate_raw(RHO2_POPULATIONS, COUPLING)
}

pub fn rho1() -> DensityMatrix {
    DensityMatrix::strict(&rho1_raw()).expect("ρ₁ is a valid state")
}

pub fn rho2() -> DensityMatrix {
    DensityMatrix::validate(&rho2_raw(), TracePolicy::Renormalize).expect("ρ₂ is valid after renormalization")
}

pub fn rho1_params() -> XStateParams {
    let [p11, p22, p33, p44] = RHO1_POPULATIONS;
    XStateParams::new(p11, p22, p33, p44, COUPLING).expect("ρ₁ parameters are feasible")
}

pub fn rho2_params() -> XStateParams {
    let [p11, p22, p33, p44] = RHO2_POPULATIONS;
    XStateParams::normalized(p11, p22, p33, p44, COUPLING).expect("ρ₂ parameters are feasible")
}

#[derive(Debug, Clone, PartialEq)]
pub struct PaperFixtures {
    pub rho1: DensityMatrix,
    pub rho2: DensityMatrix,
    pub santos_threshold: f64,
}

impl PaperFixtures {
    pub fn load() -> Self {
        Self {
            rho1: rho1(),
            rho2: rho2(),
            santos_threshold: santos_threshold(),
        }
    }

    /// Fixtures with `eps` added to both couplings; a negative control for
    /// [`verify`].
    pub fn perturbed(eps: f64) -> Result<Self, ExplorerError> {
        let rho1 = DensityMatrix::strict(&xstate_raw(RHO1_POPULATIONS, COUPLING + eps))?;
        let rho2 = DensityMatrix::validate(&xstate_raw(RHO2_POPULATIONS, COUPLING + eps), TracePolicy::Renormalize)?;
        Ok(Self {
            rho1,
            rho2,
            santos_threshold: santos_threshold(),
        })
    }
}

/// A number or a yes/no outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Number(f64),
    Flag(bool),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub check: String,
    pub expected: Quantity,
    pub actual: Quantity,
    pub pass: bool,
}

impl Check {
    fn within(name: &str, expected: f64, actual: f64, tol: f64) -> Self {
        Self {
            check: name.to_string(),
            expected: Quantity::Number(expected),
            actual: Quantity::Number(actual),
            pass: (actual - expected).abs() <= tol,
        }
    }

    fn at_least(name: &str, bound: f64, actual: f64) -> Self {
        Self {
            check: name.to_string(),
            expected: Quantity::Number(bound),
            actual: Quantity::Number(actual),
            pass: actual >= bound,
        }
    }

    fn flag(name: &str, expected: bool, actual: bool) -> Self {
        Self {
            check: name.to_string(),
            expected: Quantity::Flag(expected),
            actual: Quantity::Flag(actual),
            pass: expected == actual,
        }
    }

    /// `actual − expected` for numeric checks.
    pub fn delta(&self) -> Option<f64> {
        match (self.expected, self.actual) {
            (Quantity::Number(e), Quantity::Number(a)) => Some(a - e),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    /// All checks passed: both states clear the entropy bound, one of them
    /// still violates CHSH.
    pub refuted: bool,
}

/// Reproduces the published entropies and CHSH maxima and tests the
/// entropy-bound claim against them.
pub fn verify(fixtures: &PaperFixtures) -> Result<VerificationReport, ExplorerError> {
    let r1 = analyze(&fixtures.rho1)?;
    let r2 = analyze(&fixtures.rho2)?;
    let checks = vec![
        Check::within("linear_entropy(rho1)", PUBLISHED_LINEAR_ENTROPY, r1.s12, ENTROPY_TOL),
        Check::within("linear_entropy(rho2)", PUBLISHED_LINEAR_ENTROPY, r2.s12, ENTROPY_TOL),
        Check::within("chsh_max(rho1)", PUBLISHED_CHSH_RHO1, r1.chsh_max, CHSH_TOL),
        Check::within("chsh_max(rho2)", PUBLISHED_CHSH_RHO2, r2.chsh_max, CHSH_TOL),
        Check::at_least(
            "min linear_entropy >= santos_threshold",
            fixtures.santos_threshold,
            r1.s12.min(r2.s12),
        ),
        Check::flag(
            "rho1 violates CHSH and rho2 does not",
            true,
            r1.violates_chsh && !r2.violates_chsh,
        ),
    ];
    let refuted = checks.iter().all(|c| c.pass);
    Ok(VerificationReport { checks, refuted })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_load() {
        let f = PaperFixtures::load();
        assert!((f.santos_threshold - (0.5f64.sqrt() - 0.25)).abs() < 1e-12);
        assert_eq!(*f.rho1.matrix(), rho1_raw());
    }

    #[test]
    fn published_numbers_reproduce() {
        let report = verify(&PaperFixtures::load()).unwrap();
        assert_eq!(report.checks.len(), 6);
        for c in &report.checks {
            assert!(c.pass, "{c:?}");
        }
        assert!(report.refuted);
    }

    #[test]
    fn perturbed_fixture_fails() {
        let report = verify(&PaperFixtures::perturbed(1e-2).unwrap()).unwrap();
        assert!(!report.refuted);
        let failed: Vec<_> = report.checks.iter().filter(|c| !c.pass).map(|c| c.check.as_str()).collect();
        assert!(failed.contains(&"chsh_max(rho1)"), "{failed:?}");
    }

    #[test]
    fn report_json_shape() {
        let report = verify(&PaperFixtures::load()).unwrap();
        let json = serde_json::to_value(&report.checks).unwrap();
        let first = &json[0];
        assert_eq!(first["check"], "linear_entropy(rho1)");
        assert_eq!(first["expected"], 0.465);
        assert_eq!(first["pass"], true);
        assert_eq!(json[5]["expected"], true);
    }
}
