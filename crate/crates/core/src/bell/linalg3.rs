//! Small real 3×3 helpers for correlation matrices.

pub type Vec3 = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];

pub fn dot(u: &Vec3, v: &Vec3) -> f64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

pub fn norm(v: &Vec3) -> f64 {
    dot(v, v).sqrt()
}

pub fn add(u: &Vec3, v: &Vec3) -> Vec3 {
    [u[0] + v[0], u[1] + v[1], u[2] + v[2]]
}

pub fn sub(u: &Vec3, v: &Vec3) -> Vec3 {
    [u[0] - v[0], u[1] - v[1], u[2] - v[2]]
}

pub fn scale(v: &Vec3, s: f64) -> Vec3 {
    [v[0] * s, v[1] * s, v[2] * s]
}

pub fn mat_vec(m: &Mat3, v: &Vec3) -> Vec3 {
    [dot(&m[0], v), dot(&m[1], v), dot(&m[2], v)]
}

pub fn transpose(m: &Mat3) -> Mat3 {
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = m[j][i];
        }
    }
    t
}

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

/// `TᵀT`.
pub fn gram(t: &Mat3) -> Mat3 {
    mat_mul(&transpose(t), t)
}

pub fn det(m: &Mat3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub fn max_abs(m: &Mat3) -> f64 {
    m.iter().flatten().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub fn symmetry_defect(m: &Mat3) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            worst = worst.max((m[i][j] - m[j][i]).abs());
        }
    }
    worst
}

/// Any unit vector orthogonal to `v` (assumed unit).
pub fn orthogonal_unit(v: &Vec3) -> Vec3 {
    let axis = if v[0].abs() <= v[1].abs() && v[0].abs() <= v[2].abs() {
        [1.0, 0.0, 0.0]
    } else if v[1].abs() <= v[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let w = sub(&axis, &scale(v, dot(v, &axis)));
    scale(&w, 1.0 / norm(&w))
}

/// Eigenpairs of a real symmetric 3×3 matrix by cyclic Jacobi, sorted
/// descending. Eigenvectors are the returned rows.
pub fn symmetric_eigenpairs(m: &Mat3) -> ([f64; 3], [Vec3; 3]) {
    let mut a = *m;
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for _ in 0..100 {
        let off = a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2);
        if off.sqrt() < 1e-15 * (1.0 + max_abs(&a)) {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            if a[p][q] == 0.0 {
                continue;
            }
            let tau = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
            let t = if tau >= 0.0 {
                1.0 / (tau + (1.0 + tau * tau).sqrt())
            } else {
                -1.0 / (-tau + (1.0 + tau * tau).sqrt())
            };
            let c = 1.0 / (1.0 + t * t).sqrt();
            let s = t * c;
            for row in a.iter_mut() {
                let (xp, xq) = (row[p], row[q]);
                row[p] = c * xp - s * xq;
                row[q] = s * xp + c * xq;
            }
            for j in 0..3 {
                let (xp, xq) = (a[p][j], a[q][j]);
                a[p][j] = c * xp - s * xq;
                a[q][j] = s * xp + c * xq;
            }
            a[p][q] = 0.0;
            a[q][p] = 0.0;
            for row in v.iter_mut() {
                let (xp, xq) = (row[p], row[q]);
                row[p] = c * xp - s * xq;
                row[q] = s * xp + c * xq;
            }
        }
    }
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
    let values = order.map(|k| a[k][k]);
    let vectors = order.map(|k| [v[0][k], v[1][k], v[2][k]]);
    (values, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_eigenpairs_satisfy_eigen_equation() {
        let m = [[2.0, -0.5, 0.3], [-0.5, 1.0, 0.7], [0.3, 0.7, -0.4]];
        let (vals, vecs) = symmetric_eigenpairs(&m);
        assert!(vals[0] >= vals[1] && vals[1] >= vals[2]);
        for (lambda, v) in vals.iter().zip(&vecs) {
            let mv = mat_vec(&m, v);
            for k in 0..3 {
                assert!((mv[k] - lambda * v[k]).abs() < 1e-12);
            }
            assert!((norm(v) - 1.0).abs() < 1e-12);
        }
        assert!(dot(&vecs[0], &vecs[1]).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_unit_is_orthogonal() {
        for v in [[1.0, 0.0, 0.0], [0.0, 0.6, 0.8], [0.48, -0.6, 0.64]] {
            let w = orthogonal_unit(&v);
            assert!(dot(&v, &w).abs() < 1e-15);
            assert!((norm(&w) - 1.0).abs() < 1e-15);
        }
    }
}
