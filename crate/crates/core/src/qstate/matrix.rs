//! Fixed-size complex matrices for two-qubit work.
//!
//! Basis ordering is `|00⟩, |01⟩, |10⟩, |11⟩` with qubit A as the left
//! tensor factor, so index `i = 2·a + b`.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Single-qubit operator.
pub type Matrix2 = [[Complex64; 2]; 2];

/// A complex 4-vector in the computational basis.
pub type Vector4 = [Complex64; 4];

/// 4×4 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix4(pub [[Complex64; 4]; 4]);

impl Default for ComplexMatrix4 {
    fn default() -> Self {
        Self::zeros()
    }
}

impl ComplexMatrix4 {
    pub const fn zeros() -> Self {
        Self([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        Self::from_real_diagonal([1.0; 4])
    }

    pub fn from_real_diagonal(diag: [f64; 4]) -> Self {
        let mut m = Self::zeros();
        for (k, d) in diag.into_iter().enumerate() {
            m.0[k][k] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn from_real(rows: [[f64; 4]; 4]) -> Self {
        let mut m = Self::zeros();
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m.0[i][j] = Complex64::new(x, 0.0);
            }
        }
        m
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &Vector4, v: &Vector4) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = u[i] * v[j].conj();
            }
        }
        m
    }

    /// Kronecker product `a ⊗ b`.
    pub fn kron(a: &Matrix2, b: &Matrix2) -> Self {
        let mut m = Self::zeros();
        for (ia, ra) in a.iter().enumerate() {
            for (ja, &x) in ra.iter().enumerate() {
                for (ib, rb) in b.iter().enumerate() {
                    for (jb, &y) in rb.iter().enumerate() {
                        m.0[2 * ia + ib][2 * ja + jb] = x * y;
                    }
                }
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = self.0[j][i];
            }
        }
        m
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z = f(*z));
        m
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|k| self.0[k][k]).sum()
    }

    /// `tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        let mut acc = ZERO;
        for i in 0..4 {
            for k in 0..4 {
                acc += self.0[i][k] * other.0[k][i];
            }
        }
        acc
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    /// `‖A − A†‖_max`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// `(A + A†)/2`; exact for inputs that are already Hermitian.
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = (self.0[i][j] + adj.0[i][j]) * 0.5;
            }
        }
        m
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Sum of squared moduli of all entries.
    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    pub fn mul_vec(&self, v: &Vector4) -> Vector4 {
        let mut out = [ZERO; 4];
        for (i, row) in self.0.iter().enumerate() {
            out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        out
    }

    pub fn column(&self, j: usize) -> Vector4 {
        [self.0[0][j], self.0[1][j], self.0[2][j], self.0[3][j]]
    }

    /// Partial transpose on the second tensor factor.
    pub fn partial_transpose_b(&self) -> Self {
        let mut m = Self::zeros();
        for a in 0..2 {
            for b in 0..2 {
                for a2 in 0..2 {
                    for b2 in 0..2 {
                        m.0[2 * a + b][2 * a2 + b2] = self.0[2 * a + b2][2 * a2 + b];
                    }
                }
            }
        }
        m
    }

    pub fn rows(&self) -> &[[Complex64; 4]; 4] {
        &self.0
    }
}

impl Index<(usize, usize)> for ComplexMatrix4 {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix4 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.0[i][j]
    }
}

impl Add for ComplexMatrix4 {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().flatten().zip(rhs.0.iter().flatten()) {
            *a += b;
        }
        self
    }
}

impl Sub for ComplexMatrix4 {
    type Output = Self;

    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().flatten().zip(rhs.0.iter().flatten()) {
            *a -= b;
        }
        self
    }
}

impl Mul for ComplexMatrix4 {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = ZERO;
                for k in 0..4 {
                    acc += self.0[i][k] * rhs.0[k][j];
                }
                m.0[i][j] = acc;
            }
        }
        m
    }
}

pub fn dot(u: &Vector4, v: &Vector4) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(v: &Vector4) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
