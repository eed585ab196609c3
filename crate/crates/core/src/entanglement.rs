//! Concurrence and the partial-transpose test.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bell::SIGMA_Y;
use crate::qstate::{hermitian_eigensystem, singular_values, ComplexMatrix4, DensityMatrix, StateError};

/// Entries outside the X pattern must stay below this.
pub const X_PATTERN_TOL: f64 = 1e-12;
/// `min eig(ρ^{T_B}) ≥ −PPT_TOL` counts as positive.
pub const PPT_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EntanglementError {
    #[error("entry ({row}, {col}) = {modulus:e} breaks the X pattern")]
    NotXState { row: usize, col: usize, modulus: f64 },
    #[error(transparent)]
    State(#[from] StateError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntanglementReport {
    pub concurrence: f64,
    pub min_pt_eigenvalue: f64,
    pub is_ppt: bool,
}

fn sigma_yy() -> ComplexMatrix4 {
    ComplexMatrix4::kron(&SIGMA_Y, &SIGMA_Y)
}

/// `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
pub fn spin_flip(rho: &DensityMatrix) -> ComplexMatrix4 {
    let yy = sigma_yy();
    yy * rho.matrix().conj() * yy
}

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)`.
///
/// The `λ_k` are the square roots of the eigenvalues of `ρρ̃`, taken here
/// as the singular values of `√ρ·√ρ̃`, where `√ρ̃ = (σ_y⊗σ_y) (√ρ)* (σ_y⊗σ_y)`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64, EntanglementError> {
    let yy = sigma_yy();
    let root = rho.sqrt();
    let root_flipped = yy * root.conj() * yy;
    let lambda = singular_values(&(root * root_flipped))?;
    Ok((lambda[0] - lambda[1] - lambda[2] - lambda[3]).max(0.0))
}

/// Closed-form concurrence for states with only diagonal and anti-diagonal
/// entries: `2·max(0, |ρ₂₃| − √(ρ₁₁ρ₄₄), |ρ₁₄| − √(ρ₂₂ρ₃₃))`.
pub fn xstate_concurrence(rho: &DensityMatrix) -> Result<f64, EntanglementError> {
    for row in 0..4 {
        for col in 0..4 {
            if row == col || row + col == 3 {
                continue;
            }
            let modulus = rho.entry(row, col).norm();
            if modulus > X_PATTERN_TOL {
                return Err(EntanglementError::NotXState { row, col, modulus });
            }
        }
    }
    let p = |k: usize| rho.entry(k, k).re.max(0.0);
    let inner = rho.entry(1, 2).norm() - (p(0) * p(3)).sqrt();
    let outer = rho.entry(0, 3).norm() - (p(1) * p(2)).sqrt();
    Ok(2.0 * inner.max(outer).max(0.0))
}

/// Smallest eigenvalue of the partial transpose on qubit B.
pub fn partial_transpose_min_eigenvalue(rho: &DensityMatrix) -> Result<f64, EntanglementError> {
    let es = hermitian_eigensystem(&rho.matrix().partial_transpose_b())?;
    Ok(es.values[3])
}

pub fn entanglement_report(rho: &DensityMatrix) -> Result<EntanglementReport, EntanglementError> {
    let min_pt_eigenvalue = partial_transpose_min_eigenvalue(rho)?;
    Ok(EntanglementReport {
        concurrence: concurrence(rho)?,
        min_pt_eigenvalue,
        is_ppt: min_pt_eigenvalue >= -PPT_TOL,
    })
}
