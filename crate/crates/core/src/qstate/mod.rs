//! Density matrices, validation and mixedness measures.

pub mod eigen;
pub mod matrix;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use eigen::{hermitian_eigensystem, singular_values, Eigensystem};
pub use matrix::{ComplexMatrix4, Matrix2, Vector4};

/// Trace tolerance under [`TracePolicy::Strict`].
pub const STRICT_TRACE_TOL: f64 = 1e-10;
/// Largest trace deviation that [`TracePolicy::Renormalize`] will rescale.
pub const RENORMALIZE_TRACE_TOL: f64 = 1e-4;
/// Eigenvalues in `[-PSD_TOL, 0)` are treated as round-off and clamped.
pub const PSD_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is not Hermitian: max |A - A†| = {defect:e}")]
    NotHermitian { defect: f64 },
    #[error("trace {trace} is outside the accepted bound")]
    TraceInvalid { trace: f64 },
    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },
    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("state vector has zero norm")]
    ZeroVector,
}

/// How [`DensityMatrix::validate`] treats a trace that is not exactly one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TracePolicy {
    #[default]
    Strict,
    Renormalize,
}

/// A validated two-qubit state: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix4,
    eigen: Eigensystem,
}

impl DensityMatrix {
    pub fn validate(raw: &ComplexMatrix4, policy: TracePolicy) -> Result<Self, StateError> {
        if !raw.is_finite() {
            return Err(StateError::NonFinite);
        }
        let defect = raw.hermiticity_defect();
        if defect > eigen::HERMITIAN_TOL {
            return Err(StateError::NotHermitian { defect });
        }
        let mut mat = raw.hermitian_part();
        let trace = mat.trace().re;
        let bound = match policy {
            TracePolicy::Strict => STRICT_TRACE_TOL,
            TracePolicy::Renormalize => RENORMALIZE_TRACE_TOL,
        };
        if !((trace - 1.0).abs() <= bound) {
            return Err(StateError::TraceInvalid { trace });
        }
        if policy == TracePolicy::Renormalize && trace != 1.0 {
            mat = mat.scale(1.0 / trace);
        }

        let mut eigen = hermitian_eigensystem(&mat)?;
        let min_eigenvalue = eigen.values[3];
        if min_eigenvalue < -PSD_TOL {
            return Err(StateError::NotPositive { min_eigenvalue });
        }
        for lambda in eigen.values.iter_mut() {
            if *lambda < 0.0 {
                *lambda = 0.0;
            }
        }
        Ok(Self { mat, eigen })
    }

    pub fn strict(raw: &ComplexMatrix4) -> Result<Self, StateError> {
        Self::validate(raw, TracePolicy::Strict)
    }

    /// The maximally mixed state `I/4`.
    pub fn maximally_mixed() -> Self {
        Self::strict(&ComplexMatrix4::identity().scale(0.25)).expect("I/4 is a valid state")
    }

    /// `|ψ⟩⟨ψ| / ‖ψ‖²`.
    pub fn from_pure(psi: &Vector4) -> Result<Self, StateError> {
        let norm = matrix::norm(psi);
        if !norm.is_finite() {
            return Err(StateError::NonFinite);
        }
        if norm == 0.0 {
            return Err(StateError::ZeroVector);
        }
        let unit = psi.map(|z| z / norm);
        Self::strict(&ComplexMatrix4::outer(&unit, &unit))
    }

    pub fn matrix(&self) -> &ComplexMatrix4 {
        &self.mat
    }

    /// Eigenvalues in descending order, negatives within tolerance clamped to 0.
    pub fn eigenvalues(&self) -> [f64; 4] {
        self.eigen.values
    }

    pub fn eigensystem(&self) -> &Eigensystem {
        &self.eigen
    }

    /// `√ρ` from the cached eigen-decomposition.
    pub fn sqrt(&self) -> ComplexMatrix4 {
        self.eigen.reconstruct(f64::sqrt)
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.mat[(i, j)]
    }

    /// `U ρ U†` for a unitary `U`, re-validated.
    pub fn conjugate_by(&self, u: &ComplexMatrix4) -> Result<Self, StateError> {
        Self::validate(&(*u * self.mat * u.adjoint()), TracePolicy::Renormalize)
    }
}

/// Purity and linear entropy of a state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixednessReport {
    pub purity: f64,
    pub linear_entropy: f64,
    pub normalized_linear_entropy: f64,
}

/// `tr ρ²` as the sum of squared moduli of the entries, clamped to
/// `[1/4, 1]` against round-off.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix().frobenius_norm_sqr().clamp(0.25, 1.0)
}

/// Linear entropy `1 − tr ρ²`, in `[0, 3/4]` for two qubits.
pub fn linear_entropy(rho: &DensityMatrix) -> MixednessReport {
    let purity = purity(rho);
    let linear_entropy = 1.0 - purity;
    MixednessReport {
        purity,
        linear_entropy,
        normalized_linear_entropy: 4.0 / 3.0 * linear_entropy,
    }
}

/// On-disk state format: `{"matrix": [[[re, im], ...], ...], "label": ...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub matrix: [[[f64; 2]; 4]; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl StateFile {
    pub fn from_matrix(m: &ComplexMatrix4, label: Option<String>) -> Self {
        Self {
            matrix: m.0.map(|row| row.map(|z| [z.re, z.im])),
            label,
        }
    }

    pub fn to_matrix(&self) -> ComplexMatrix4 {
        ComplexMatrix4(self.matrix.map(|row| row.map(|[re, im]| Complex64::new(re, im))))
    }
}
