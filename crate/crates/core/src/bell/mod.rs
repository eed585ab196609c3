//! Pauli correlations, the closed-form CHSH maximum, and explicit
//! evaluation of the CHSH operator for given measurement directions.
//!
//! For a two-qubit state with correlation matrix `T` (`t_nm = tr ρ σ_n⊗σ_m`)
//! the largest CHSH value over all projective settings is `2√(u₁ + u₂)`,
//! where `u₁ ≥ u₂` are the two largest eigenvalues of `TᵀT`.

pub mod linalg3;
mod optimize;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qstate::matrix::{Matrix2, I, ONE, ZERO};
use crate::qstate::{ComplexMatrix4, DensityMatrix, StateError};
pub use linalg3::{Mat3, Vec3};
pub use optimize::{optimize_settings, optimize_settings_from, OptimizedSettings, DEFAULT_BUDGET};

/// Classical (local hidden variable) bound on `|tr ρB|`.
pub const CLASSICAL_BOUND: f64 = 2.0;
/// Quantum ceiling `2√2`.
pub const TSIRELSON_BOUND: f64 = 2.0 * std::f64::consts::SQRT_2;
/// Imaginary parts of `t_nm` above this mean the input was not a state.
pub const IMAG_TOL: f64 = 1e-10;
pub const SYMMETRY_TOL: f64 = 1e-10;
pub const UNIT_NORM_TOL: f64 = 1e-12;
/// Round-off allowance above the classical bound; separable states can
/// otherwise land at `2 + ε`.
pub const VIOLATION_TOL: f64 = 1e-12;

pub fn exceeds_classical_bound(chsh: f64) -> bool {
    chsh > CLASSICAL_BOUND + VIOLATION_TOL
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BellError {
    #[error("correlation t_{n}{m} has imaginary part {imag:e}")]
    NonRealCorrelation { n: usize, m: usize, imag: f64 },
    #[error("matrix is not symmetric: max |M - Mᵀ| = {defect:e}")]
    NotSymmetric { defect: f64 },
    #[error("setting `{name}` is not a unit vector (norm {norm})")]
    NonUnitVector { name: &'static str, norm: f64 },
    #[error(transparent)]
    State(#[from] StateError),
}

/// The Pauli matrices `σ₁, σ₂, σ₃` (X, Y, Z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliBasis {
    pub sigma: [Matrix2; 3],
}

pub const IDENTITY2: Matrix2 = [[ONE, ZERO], [ZERO, ONE]];
pub const SIGMA_X: Matrix2 = [[ZERO, ONE], [ONE, ZERO]];
pub const SIGMA_Y: Matrix2 = [[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]];
pub const SIGMA_Z: Matrix2 = [[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]];

impl PauliBasis {
    pub const STANDARD: PauliBasis = PauliBasis {
        sigma: [SIGMA_X, SIGMA_Y, SIGMA_Z],
    };

    /// `n·σ` for a real 3-vector `n`.
    pub fn along(&self, n: &Vec3) -> Matrix2 {
        let mut out = [[ZERO; 2]; 2];
        for (k, s) in self.sigma.iter().enumerate() {
            for i in 0..2 {
                for j in 0..2 {
                    out[i][j] += s[i][j] * n[k];
                }
            }
        }
        out
    }
}

/// Correlation matrix `t_nm = tr(ρ σ_n ⊗ σ_m)`.
pub fn correlation_matrix(rho: &DensityMatrix) -> Result<Mat3, BellError> {
    let sigma = &PauliBasis::STANDARD.sigma;
    let mut t = [[0.0; 3]; 3];
    for n in 0..3 {
        for m in 0..3 {
            let op = ComplexMatrix4::kron(&sigma[n], &sigma[m]);
            let z = rho.matrix().trace_product(&op);
            if z.im.abs() > IMAG_TOL {
                return Err(BellError::NonRealCorrelation {
                    n: n + 1,
                    m: m + 1,
                    imag: z.im,
                });
            }
            t[n][m] = z.re;
        }
    }
    Ok(t)
}

/// Eigenvalues of a real symmetric 3×3 matrix, descending, from the
/// trigonometric solution of the characteristic cubic.
pub fn symmetric3_eigenvalues(m: &Mat3) -> Result<[f64; 3], BellError> {
    let defect = linalg3::symmetry_defect(m);
    if defect > SYMMETRY_TOL {
        return Err(BellError::NotSymmetric { defect });
    }
    let off = m[0][1].powi(2) + m[0][2].powi(2) + m[1][2].powi(2);
    if off == 0.0 {
        let mut d = [m[0][0], m[1][1], m[2][2]];
        d.sort_by(|a, b| b.total_cmp(a));
        return Ok(d);
    }
    let q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
    let p2 = (m[0][0] - q).powi(2) + (m[1][1] - q).powi(2) + (m[2][2] - q).powi(2) + 2.0 * off;
    let p = (p2 / 6.0).sqrt();
    let mut b = *m;
    for (i, row) in b.iter_mut().enumerate() {
        row[i] -= q;
        for x in row.iter_mut() {
            *x /= p;
        }
    }
    let r = (linalg3::det(&b) / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let largest = q + 2.0 * p * phi.cos();
    let smallest = q + 2.0 * p * (phi + 2.0 * PI / 3.0).cos();
    let middle = 3.0 * q - largest - smallest;
    let mut out = [largest, middle, smallest];
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

/// `(u, m)` with `u` the descending eigenvalues of `TᵀT` and `m = u₁ + u₂`.
/// Eigenvalues come from the Jacobi solver, which stays accurate at the
/// repeated roots of rank-deficient `T`.
pub fn horodecki_m(t: &Mat3) -> ([f64; 3], f64) {
    let gram = linalg3::gram(t);
    let u = linalg3::symmetric_eigenpairs(&gram).0.map(|x| x.max(0.0));
    (u, u[0] + u[1])
}

/// Everything the closed-form CHSH criterion derives from a state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationAnalysis {
    pub t: Mat3,
    pub u: [f64; 3],
    pub m: f64,
    pub chsh_max: f64,
}

impl CorrelationAnalysis {
    pub fn from_correlations(t: Mat3) -> Self {
        let (u, m) = horodecki_m(&t);
        Self {
            t,
            u,
            m,
            chsh_max: 2.0 * m.sqrt(),
        }
    }

    pub fn violates(&self) -> bool {
        exceeds_classical_bound(self.chsh_max)
    }
}

/// `max_B |tr ρB|` over all CHSH operators, via `2√m(ρ)`.
pub fn chsh_max(rho: &DensityMatrix) -> Result<CorrelationAnalysis, BellError> {
    Ok(CorrelationAnalysis::from_correlations(correlation_matrix(rho)?))
}

/// Four measurement directions: `a, a′` for qubit A and `b, b′` for qubit B.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSettings")]
pub struct ChshSettings {
    a: Vec3,
    a_prime: Vec3,
    b: Vec3,
    b_prime: Vec3,
}

#[derive(Deserialize)]
struct RawSettings {
    a: Vec3,
    a_prime: Vec3,
    b: Vec3,
    b_prime: Vec3,
}

impl TryFrom<RawSettings> for ChshSettings {
    type Error = BellError;

    fn try_from(raw: RawSettings) -> Result<Self, BellError> {
        ChshSettings::new(raw.a, raw.a_prime, raw.b, raw.b_prime)
    }
}

impl ChshSettings {
    pub fn new(a: Vec3, a_prime: Vec3, b: Vec3, b_prime: Vec3) -> Result<Self, BellError> {
        for (name, v) in [("a", &a), ("a_prime", &a_prime), ("b", &b), ("b_prime", &b_prime)] {
            let norm = linalg3::norm(v);
            if !((norm - 1.0).abs() <= UNIT_NORM_TOL) {
                return Err(BellError::NonUnitVector { name, norm });
            }
        }
        Ok(Self {
            a,
            a_prime,
            b,
            b_prime,
        })
    }

    /// Rescales each direction to unit length first.
    pub fn normalized(a: Vec3, a_prime: Vec3, b: Vec3, b_prime: Vec3) -> Result<Self, BellError> {
        let unit = |v: Vec3| linalg3::scale(&v, 1.0 / linalg3::norm(&v));
        Self::new(unit(a), unit(a_prime), unit(b), unit(b_prime))
    }

    /// Settings reaching `2√2` on the singlet: `a = z`, `a′ = x`,
    /// `b, b′ = (z ± x)/√2`.
    pub fn tsirelson() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::new(
            [0.0, 0.0, 1.0],
            [1.0, 0.0, 0.0],
            [s, 0.0, s],
            [-s, 0.0, s],
        )
        .expect("canonical settings are unit vectors")
    }

    pub fn a(&self) -> Vec3 {
        self.a
    }

    pub fn a_prime(&self) -> Vec3 {
        self.a_prime
    }

    pub fn b(&self) -> Vec3 {
        self.b
    }

    pub fn b_prime(&self) -> Vec3 {
        self.b_prime
    }
}

/// `B = a·σ ⊗ (b + b′)·σ + a′·σ ⊗ (b − b′)·σ`.
pub fn build_chsh_operator(s: &ChshSettings) -> ComplexMatrix4 {
    let pauli = PauliBasis::STANDARD;
    let first = ComplexMatrix4::kron(
        &pauli.along(&s.a),
        &pauli.along(&linalg3::add(&s.b, &s.b_prime)),
    );
    let second = ComplexMatrix4::kron(
        &pauli.along(&s.a_prime),
        &pauli.along(&linalg3::sub(&s.b, &s.b_prime)),
    );
    first + second
}

/// Signed CHSH value `tr(ρB)`.
pub fn chsh_value(rho: &DensityMatrix, s: &ChshSettings) -> f64 {
    rho.matrix().trace_product(&build_chsh_operator(s)).re
}

/// `aᵀT(b + b′) + a′ᵀT(b − b′)`: the same quantity from the correlation matrix.
pub fn chsh_value_from_correlations(t: &Mat3, s: &ChshSettings) -> f64 {
    let sum = linalg3::add(&s.b, &s.b_prime);
    let diff = linalg3::sub(&s.b, &s.b_prime);
    linalg3::dot(&s.a, &linalg3::mat_vec(t, &sum))
        + linalg3::dot(&s.a_prime, &linalg3::mat_vec(t, &diff))
}
