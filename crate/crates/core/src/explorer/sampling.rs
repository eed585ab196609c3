//! Seeded random states and unitaries.
//!
//! Every draw comes from a ChaCha8 generator keyed by `(seed, stream)`, so a
//! batch is reproducible element by element regardless of how it is split
//! across threads.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{analyze, ExplorerError, StateRecord};
use crate::bell::IDENTITY2;
use crate::parallel::map_indexed;
use crate::qstate::matrix::{Matrix2, ZERO};
use crate::qstate::{ComplexMatrix4, DensityMatrix};

/// Measure recorded alongside sampled output.
pub const SAMPLING_MEASURE: &str = "hilbert-schmidt";

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Standard complex normal (`E|z|² = 1`) by Box–Muller.
pub fn complex_normal(rng: &mut impl Rng) -> Complex64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    let r = (-u1.ln()).sqrt();
    let (s, c) = (TAU * u2).sin_cos();
    Complex64::new(r * c, r * s)
}

/// Standard real normal.
pub fn standard_normal(rng: &mut impl Rng) -> f64 {
    complex_normal(rng).re * std::f64::consts::SQRT_2
}

/// `GG†/tr(GG†)` with `G` a `4 × rank` complex Ginibre matrix.
pub fn sample_random_state(rng: &mut impl Rng, rank: usize) -> Result<DensityMatrix, ExplorerError> {
    if !(1..=4).contains(&rank) {
        return Err(ExplorerError::InvalidArgument(format!("rank {rank} not in 1..=4")));
    }
    let mut g = [[ZERO; 4]; 4];
    for row in g.iter_mut() {
        for z in row.iter_mut().take(rank) {
            *z = complex_normal(rng);
        }
    }
    let g = ComplexMatrix4(g);
    let w = g * g.adjoint();
    let rho = w.scale(1.0 / w.trace().re);
    Ok(DensityMatrix::strict(&rho)?)
}

/// `count` states, draw `i` taken from stream `i`.
pub fn sample_states(seed: u64, count: usize, rank: usize) -> Result<Vec<DensityMatrix>, ExplorerError> {
    map_indexed(0..count, |i| sample_random_state(&mut rng_for(seed, i as u64), rank))
        .into_iter()
        .collect()
}

pub fn sample_records(seed: u64, count: usize, rank: usize) -> Result<Vec<StateRecord>, ExplorerError> {
    map_indexed(0..count, |i| {
        let rho = sample_random_state(&mut rng_for(seed, i as u64), rank)?;
        let mut record = analyze(&rho)?;
        record.label = format!("sample-{i}");
        Ok(record)
    })
    .into_iter()
    .collect()
}

fn gram_schmidt<const N: usize>(mut cols: [[Complex64; N]; N]) -> [[Complex64; N]; N] {
    for j in 0..N {
        for k in 0..j {
            let proj: Complex64 = (0..N).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            for i in 0..N {
                let sub = cols[k][i] * proj;
                cols[j][i] -= sub;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    cols
}

/// Haar-random 2×2 unitary from Gram–Schmidt on a Ginibre matrix.
pub fn random_unitary2(rng: &mut impl Rng) -> Matrix2 {
    let cols = gram_schmidt([[complex_normal(rng), complex_normal(rng)], [complex_normal(rng), complex_normal(rng)]]);
    let mut u = IDENTITY2;
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            u[i][j] = z;
        }
    }
    u
}

/// Haar-random 4×4 unitary.
pub fn random_unitary4(rng: &mut impl Rng) -> ComplexMatrix4 {
    let mut cols = [[ZERO; 4]; 4];
    cols.iter_mut().flatten().for_each(|z| *z = complex_normal(rng));
    ComplexMatrix4(gram_schmidt(cols)).transpose()
}

/// `U_A ⊗ U_B` with both factors Haar-random.
pub fn random_local_unitary(rng: &mut impl Rng) -> ComplexMatrix4 {
    let ua = random_unitary2(rng);
    let ub = random_unitary2(rng);
    ComplexMatrix4::kron(&ua, &ub)
}

/// `|ψ_A⟩⊗|ψ_B⟩` with independent Haar-random qubit states.
pub fn random_product_state(rng: &mut impl Rng) -> DensityMatrix {
    let a = [complex_normal(rng), complex_normal(rng)];
    let b = [complex_normal(rng), complex_normal(rng)];
    let psi = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]];
    DensityMatrix::from_pure(&psi).expect("Gaussian draw is non-zero")
}

/// Random X-shaped state with complex coherences on both anti-diagonal
/// pairs, populations uniform on the simplex.
pub fn random_xstate(rng: &mut impl Rng) -> DensityMatrix {
    let e: [f64; 4] = std::array::from_fn(|_| -(1.0 - rng.gen::<f64>()).ln());
    let total: f64 = e.iter().sum();
    let p = e.map(|x| x / total);
    let mut m = ComplexMatrix4::from_real_diagonal(p);
    let inner = (p[1] * p[2]).sqrt() * rng.gen::<f64>();
    let outer = (p[0] * p[3]).sqrt() * rng.gen::<f64>();
    let z_inner = Complex64::from_polar(inner, TAU * rng.gen::<f64>());
    let z_outer = Complex64::from_polar(outer, TAU * rng.gen::<f64>());
    m[(1, 2)] = z_inner;
    m[(2, 1)] = z_inner.conj();
    m[(0, 3)] = z_outer;
    m[(3, 0)] = z_outer.conj();
    DensityMatrix::strict(&m).expect("X-state with bounded coherences is valid")
}
