//! Cyclic complex Jacobi for 4×4 Hermitian matrices, plus a one-sided
//! (Hestenes) Jacobi for singular values.
//!
//! Sweep order is fixed (row-major over the upper triangle), so results
//! are reproducible bit-for-bit for a given input.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix4, Vector4, ZERO};
use super::StateError;

/// Hermiticity tolerance accepted by the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Off-diagonal Frobenius norm at which a sweep loop stops.
pub const OFF_DIAGONAL_TOL: f64 = 1e-13;
pub const MAX_SWEEPS: usize = 100;

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Eigenvalues in descending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigensystem {
    pub values: [f64; 4],
    pub vectors: [Vector4; 4],
}

impl Eigensystem {
    /// `Σ_k f(λ_k) |v_k⟩⟨v_k|`.
    pub fn reconstruct(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix4 {
        let mut m = ComplexMatrix4::zeros();
        for (lambda, v) in self.values.iter().zip(&self.vectors) {
            let w = f(*lambda);
            if w != 0.0 {
                m = m + ComplexMatrix4::outer(v, v).scale(w);
            }
        }
        m
    }
}

/// 2×2 unitary `[[u_pp, u_pq], [u_qp, u_qq]]` that diagonalises the
/// Hermitian block `[[app, g], [g*, aqq]]` under `U† H U`.
fn jacobi_rotation(app: f64, aqq: f64, g: Complex64) -> [[Complex64; 2]; 2] {
    let modulus = g.norm();
    let phase = g / modulus;
    let tau = (aqq - app) / (2.0 * modulus);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let pc = phase.conj();
    [
        [Complex64::new(c, 0.0), Complex64::new(s, 0.0)],
        [-pc * s, pc * c],
    ]
}

/// `M ← M·U` restricted to columns `p, q`.
fn rotate_columns(m: &mut [[Complex64; 4]; 4], p: usize, q: usize, u: &[[Complex64; 2]; 2]) {
    for row in m.iter_mut() {
        let (xp, xq) = (row[p], row[q]);
        row[p] = xp * u[0][0] + xq * u[1][0];
        row[q] = xp * u[0][1] + xq * u[1][1];
    }
}

/// `M ← U†·M` restricted to rows `p, q`.
fn rotate_rows(m: &mut [[Complex64; 4]; 4], p: usize, q: usize, u: &[[Complex64; 2]; 2]) {
    for j in 0..4 {
        let (xp, xq) = (m[p][j], m[q][j]);
        m[p][j] = u[0][0].conj() * xp + u[1][0].conj() * xq;
        m[q][j] = u[0][1].conj() * xp + u[1][1].conj() * xq;
    }
}

fn off_diagonal_norm(m: &[[Complex64; 4]; 4]) -> f64 {
    PAIRS
        .iter()
        .map(|&(p, q)| m[p][q].norm_sqr() + m[q][p].norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Eigen-decomposition of a Hermitian 4×4 matrix.
pub fn hermitian_eigensystem(h: &ComplexMatrix4) -> Result<Eigensystem, StateError> {
    if !h.is_finite() {
        return Err(StateError::NonFinite);
    }
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(StateError::NotHermitian { defect });
    }
    let mut a = h.hermitian_part().0;
    let mut v = ComplexMatrix4::identity().0;

    let mut converged = false;
    for _ in 0..=MAX_SWEEPS {
        if off_diagonal_norm(&a) < OFF_DIAGONAL_TOL {
            converged = true;
            break;
        }
        for &(p, q) in &PAIRS {
            let g = a[p][q];
            if g == ZERO {
                continue;
            }
            let u = jacobi_rotation(a[p][p].re, a[q][q].re, g);
            rotate_columns(&mut a, p, q, &u);
            rotate_rows(&mut a, p, q, &u);
            a[p][q] = ZERO;
            a[q][p] = ZERO;
            a[p][p].im = 0.0;
            a[q][q].im = 0.0;
            rotate_columns(&mut v, p, q, &u);
        }
    }
    if !converged {
        return Err(StateError::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| a[j][j].re.total_cmp(&a[i][i].re));
    let vm = ComplexMatrix4(v);
    Ok(Eigensystem {
        values: order.map(|k| a[k][k].re),
        vectors: order.map(|k| vm.column(k)),
    })
}

/// Singular values of an arbitrary 4×4 complex matrix, descending.
///
/// One-sided Jacobi orthogonalises the columns directly, so small singular
/// values keep absolute accuracy near `ε·‖M‖` instead of `√ε·‖M‖`.
pub fn singular_values(m: &ComplexMatrix4) -> Result<[f64; 4], StateError> {
    if !m.is_finite() {
        return Err(StateError::NonFinite);
    }
    let mut a = m.0;
    let column_norm_sqr =
        |a: &[[Complex64; 4]; 4], j: usize| -> f64 { a.iter().map(|r| r[j].norm_sqr()).sum() };

    let mut converged = false;
    for _ in 0..=MAX_SWEEPS {
        let mut rotated = false;
        for &(p, q) in &PAIRS {
            let alpha = column_norm_sqr(&a, p);
            let beta = column_norm_sqr(&a, q);
            let gamma: Complex64 = a.iter().map(|r| r[p].conj() * r[q]).sum();
            if gamma.norm() <= 1e-15 * (alpha * beta).sqrt() || gamma == ZERO {
                continue;
            }
            rotated = true;
            let u = jacobi_rotation(alpha, beta, gamma);
            rotate_columns(&mut a, p, q, &u);
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(StateError::NoConvergence { sweeps: MAX_SWEEPS });
    }
    let mut s = [0, 1, 2, 3].map(|j| column_norm_sqr(&a, j).sqrt());
    s.sort_by(|x, y| y.total_cmp(x));
    Ok(s)
}
