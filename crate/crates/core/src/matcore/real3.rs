use crate::error::{Error, Result};
use crate::tolerances;

/// Real 3-vector (Bloch directions, correlation images).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vector3(pub [f64; 3]);

impl Vector3 {
    pub const X: Vector3 = Vector3([1.0, 0.0, 0.0]);
    pub const Y: Vector3 = Vector3([0.0, 1.0, 0.0]);
    pub const Z: Vector3 = Vector3([0.0, 0.0, 1.0]);

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vector3([x, y, z])
    }

    pub fn dot(&self, other: &Vector3) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Vector3([self.0[0] * factor, self.0[1] * factor, self.0[2] * factor])
    }

    /// Rescaled to unit norm; the caller guarantees a nonzero input.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        debug_assert!(n > 0.0, "cannot normalise the zero vector");
        self.scale(1.0 / n)
    }

    pub fn cross(&self, other: &Vector3) -> Self {
        let a = &self.0;
        let b = &other.0;
        Vector3([
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    }

    /// A deterministic unit vector orthogonal to `self` (which must be
    /// a unit vector): project out the coordinate axis with the
    /// smallest overlap, lowest index winning ties.
    pub fn unit_perpendicular(&self) -> Self {
        let axes = [Vector3::X, Vector3::Y, Vector3::Z];
        let mut best = 0usize;
        for k in 1..3 {
            if self.0[k].abs() < self.0[best].abs() {
                best = k;
            }
        }
        let axis = axes[best];
        let projected = axis - self.scale(axis.dot(self));
        projected.normalized()
    }
}

impl std::ops::Add for Vector3 {
    type Output = Vector3;
    fn add(self, other: Vector3) -> Vector3 {
        Vector3([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }
}

impl std::ops::Sub for Vector3 {
    type Output = Vector3;
    fn sub(self, other: Vector3) -> Vector3 {
        Vector3([
            self.0[0] - other.0[0],
            self.0[1] - other.0[1],
            self.0[2] - other.0[2],
        ])
    }
}

impl std::ops::Neg for Vector3 {
    type Output = Vector3;
    fn neg(self) -> Vector3 {
        self.scale(-1.0)
    }
}

/// Real 3x3 matrix; carrier for the correlation matrix T and for
/// V = T T^t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealMatrix3(pub [[f64; 3]; 3]);

impl RealMatrix3 {
    pub const ZERO: RealMatrix3 = RealMatrix3([[0.0; 3]; 3]);

    /// Build with a finiteness check on every entry.
    pub fn new(entries: [[f64; 3]; 3]) -> Result<Self> {
        for (i, row) in entries.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if !x.is_finite() {
                    return Err(Error::NonFiniteEntry { index: 3 * i + j });
                }
            }
        }
        Ok(RealMatrix3(entries))
    }

    pub fn identity() -> Self {
        Self::diagonal(1.0, 1.0, 1.0)
    }

    pub fn diagonal(a: f64, b: f64, c: f64) -> Self {
        RealMatrix3([[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]])
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.0[row][col]
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        RealMatrix3([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    /// M v.
    pub fn matvec(&self, v: &Vector3) -> Vector3 {
        let m = &self.0;
        Vector3([
            m[0][0] * v.0[0] + m[0][1] * v.0[1] + m[0][2] * v.0[2],
            m[1][0] * v.0[0] + m[1][1] * v.0[1] + m[1][2] * v.0[2],
            m[2][0] * v.0[0] + m[2][1] * v.0[1] + m[2][2] * v.0[2],
        ])
    }

    /// M^t v.
    pub fn transpose_matvec(&self, v: &Vector3) -> Vector3 {
        let m = &self.0;
        Vector3([
            m[0][0] * v.0[0] + m[1][0] * v.0[1] + m[2][0] * v.0[2],
            m[0][1] * v.0[0] + m[1][1] * v.0[1] + m[2][1] * v.0[2],
            m[0][2] * v.0[0] + m[1][2] * v.0[1] + m[2][2] * v.0[2],
        ])
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    out[i][j] += self.0[i][k] * other.0[k][j];
                }
            }
        }
        RealMatrix3(out)
    }

    /// M M^t.
    pub fn times_transpose(&self) -> Self {
        self.matmul(&self.transpose())
    }

    /// M^t M.
    pub fn transpose_times(&self) -> Self {
        self.transpose().matmul(self)
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|x| x * x)
            .sum::<f64>()
            .sqrt()
    }

    pub fn symmetry_deviation(&self) -> f64 {
        let m = &self.0;
        (m[0][1] - m[1][0])
            .abs()
            .max((m[0][2] - m[2][0]).abs())
            .max((m[1][2] - m[2][1]).abs())
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.0.iter().flatten().fold(0.0f64, |acc, x| acc.max(x.abs()))
    }

    pub fn is_exactly_zero(&self) -> bool {
        self.0.iter().flatten().all(|&x| x == 0.0)
    }
}

/// Eigenvalues (descending) and matching orthonormal eigenvectors of
/// a symmetric 3x3 matrix.
#[derive(Debug, Clone, Copy)]
pub struct Sym3Eigensystem {
    pub values: [f64; 3],
    pub vectors: [Vector3; 3],
}

/// Cyclic Jacobi diagonalisation of a symmetric 3x3 matrix.
///
/// The input must be symmetric within `tol`; iteration runs on the
/// symmetrised part until the off-diagonal norm falls below
/// `JACOBI_OFF_DIAGONAL * (1 + ||M||_F)`. Eigenvalues come back in
/// descending order with ties broken by the stable order of the
/// Jacobi output; under degeneracy the eigenvectors are just some
/// orthonormal basis of the eigenspace.
pub fn sym3_eigensystem(m: &RealMatrix3, tol: f64) -> Result<Sym3Eigensystem> {
    let deviation = m.symmetry_deviation();
    if deviation > tol {
        return Err(Error::NotSymmetric { deviation, tol });
    }

    let mut a = [[0.0f64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            a[i][j] = 0.5 * (m.0[i][j] + m.0[j][i]);
        }
    }
    let mut vectors = [[0.0f64; 3]; 3];
    for (i, row) in vectors.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let threshold = tolerances::JACOBI_OFF_DIAGONAL * (1.0 + m.frobenius_norm());

    for _sweep in 0..64 {
        let off = (2.0 * (a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2])).sqrt();
        if off <= threshold {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let apq = a[p][q];
            if apq == 0.0 {
                continue;
            }
            let tau = (a[q][q] - a[p][p]) / (2.0 * apq);
            let t = if tau >= 0.0 {
                1.0 / (tau + (1.0 + tau * tau).sqrt())
            } else {
                -1.0 / (-tau + (1.0 + tau * tau).sqrt())
            };
            let c = 1.0 / (1.0 + t * t).sqrt();
            let s = t * c;

            // A <- G^t A G with G the rotation in the (p, q) plane.
            for k in 0..3 {
                let akp = a[k][p];
                let akq = a[k][q];
                a[k][p] = c * akp - s * akq;
                a[k][q] = s * akp + c * akq;
            }
            for k in 0..3 {
                let apk = a[p][k];
                let aqk = a[q][k];
                a[p][k] = c * apk - s * aqk;
                a[q][k] = s * apk + c * aqk;
            }
            for row in vectors.iter_mut() {
                let vp = row[p];
                let vq = row[q];
                row[p] = c * vp - s * vq;
                row[q] = s * vp + c * vq;
            }
        }
    }

    let diag = [a[0][0], a[1][1], a[2][2]];
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap());
    let values = [diag[order[0]], diag[order[1]], diag[order[2]]];
    let column = |k: usize| Vector3([vectors[0][k], vectors[1][k], vectors[2][k]]);
    let eigvecs = [column(order[0]), column(order[1]), column(order[2])];
    Ok(Sym3Eigensystem {
        values,
        vectors: eigvecs,
    })
}
