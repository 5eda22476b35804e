use crate::error::{Error, Result};
use crate::tolerances;

/// Complex scalar with f64 components.
pub type ComplexScalar = num_complex::Complex64;

/// Dense square complex matrix, row-major storage.
///
/// Construction rejects non-finite entries, so NaN and infinity never
/// enter downstream arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<ComplexScalar>,
}

impl ComplexMatrix {
    /// Build from row-major entries. The entry count must be `dim^2`
    /// and every component finite.
    pub fn new(dim: usize, entries: Vec<ComplexScalar>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter {
                name: "dim",
                value: 0.0,
                expected: "positive integer",
            });
        }
        let expected = dim * dim;
        if entries.len() != expected {
            return Err(Error::EntryCount {
                dim,
                expected,
                len: entries.len(),
            });
        }
        for (index, z) in entries.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFiniteEntry { index });
            }
        }
        Ok(Self { dim, entries })
    }

    /// Zero matrix.
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![ComplexScalar::new(0.0, 0.0); dim * dim],
        }
    }

    /// Build from separate real and imaginary row-major parts.
    pub fn from_re_im(dim: usize, re: &[f64], im: &[f64]) -> Self {
        assert_eq!(re.len(), dim * dim);
        assert_eq!(im.len(), dim * dim);
        Self {
            dim,
            entries: re
                .iter()
                .zip(im)
                .map(|(&r, &i)| ComplexScalar::new(r, i))
                .collect(),
        }
    }

    /// Projector |psi><psi| onto the given (not necessarily
    /// normalised) amplitudes; the result is scaled by nothing, so
    /// pass a normalised vector to get a unit-trace projector.
    pub fn projector(amplitudes: &[ComplexScalar]) -> Self {
        let dim = amplitudes.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, amplitudes[i] * amplitudes[j].conj());
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[ComplexScalar] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> ComplexScalar {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: ComplexScalar) {
        self.entries[row * self.dim + col] = value;
    }

    /// Standard matrix product; both factors must share a dimension.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if aik.re == 0.0 && aik.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + aik * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// Kronecker product; `self` is the first (leftmost) factor.
    pub fn kron(&self, other: &Self) -> Self {
        let (na, nb) = (self.dim, other.dim);
        let n = na * nb;
        let mut out = Self::zeros(n);
        for i in 0..na {
            for j in 0..na {
                let aij = self.get(i, j);
                for k in 0..nb {
                    for l in 0..nb {
                        out.set(i * nb + k, j * nb + l, aij * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> ComplexScalar {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, factor: ComplexScalar) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix addition dimension mismatch");
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix subtraction dimension mismatch");
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entrywise |a_ij - b_ij|.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise |A - A dagger|.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Trace out all qubits not in `keep`. The state must act on
    /// `n_qubits` qubits (dimension `2^n_qubits`) and `keep` must be
    /// nonempty, strictly increasing and within range. Qubit 0 is the
    /// leftmost tensor factor.
    pub fn partial_trace(&self, n_qubits: usize, keep: &[usize]) -> Result<Self> {
        let full_dim = 1usize << n_qubits;
        if self.dim != full_dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: full_dim,
            });
        }
        let ordered = keep.windows(2).all(|w| w[0] < w[1]);
        let in_range = keep.iter().all(|&q| q < n_qubits);
        if keep.is_empty() || !ordered || !in_range {
            return Err(Error::InvalidQubitSubset {
                subset: keep.to_vec(),
                n_qubits,
            });
        }
        let traced: Vec<usize> = (0..n_qubits).filter(|q| !keep.contains(q)).collect();
        let kept_dim = 1usize << keep.len();
        let traced_dim = 1usize << traced.len();

        // Reassemble a full basis index from kept bits and traced bits,
        // honouring the qubit-0-is-MSB convention.
        let compose_index = |kept_bits: usize, traced_bits: usize| -> usize {
            let mut index = 0usize;
            for q in 0..n_qubits {
                let bit = if let Some(pos) = keep.iter().position(|&k| k == q) {
                    (kept_bits >> (keep.len() - 1 - pos)) & 1
                } else {
                    let pos = traced.iter().position(|&t| t == q).unwrap();
                    (traced_bits >> (traced.len() - 1 - pos)) & 1
                };
                index = (index << 1) | bit;
            }
            index
        };

        let mut out = Self::zeros(kept_dim);
        for i in 0..kept_dim {
            for j in 0..kept_dim {
                let mut acc = ComplexScalar::new(0.0, 0.0);
                for t in 0..traced_dim {
                    acc += self.get(compose_index(i, t), compose_index(j, t));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Relabel qubits: position `i` of the result holds what was qubit
    /// `perm[i]` of the input. `perm` must be a permutation of
    /// `0..n_qubits`.
    pub fn permute_qubits(&self, n_qubits: usize, perm: &[usize]) -> Result<Self> {
        let full_dim = 1usize << n_qubits;
        if self.dim != full_dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: full_dim,
            });
        }
        let mut seen = vec![false; n_qubits];
        for &p in perm {
            if p >= n_qubits || seen[p] {
                return Err(Error::InvalidQubitSubset {
                    subset: perm.to_vec(),
                    n_qubits,
                });
            }
            seen[p] = true;
        }
        if perm.len() != n_qubits {
            return Err(Error::InvalidQubitSubset {
                subset: perm.to_vec(),
                n_qubits,
            });
        }
        let old_index = |new_index: usize| -> usize {
            let mut idx = 0usize;
            for (new_pos, &old_pos) in perm.iter().enumerate() {
                let bit = (new_index >> (n_qubits - 1 - new_pos)) & 1;
                idx |= bit << (n_qubits - 1 - old_pos);
            }
            idx
        };
        let mut out = Self::zeros(full_dim);
        for i in 0..full_dim {
            for j in 0..full_dim {
                out.set(i, j, self.get(old_index(i), old_index(j)));
            }
        }
        Ok(out)
    }

    /// Eigenvalues of a Hermitian matrix, descending. The input must
    /// be Hermitian within `tol` (entrywise); the returned values sum
    /// to the trace up to solver accuracy.
    pub fn hermitian_eigenvalues(&self, tol: f64) -> Result<Vec<f64>> {
        Ok(self.hermitian_eigensystem(tol)?.0)
    }

    /// Eigenvalues (descending) with matching orthonormal
    /// eigenvectors as columns of the returned matrix.
    pub(crate) fn hermitian_eigensystem(&self, tol: f64) -> Result<(Vec<f64>, ComplexMatrix)> {
        let deviation = self.hermiticity_deviation();
        if deviation > tol {
            return Err(Error::NotHermitian { deviation, tol });
        }
        let n = self.dim;
        // Work on the Hermitian part so rounding in the input cannot
        // push the iteration off the Hermitian manifold.
        let mut a = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let sym = (self.get(i, j) + self.get(j, i).conj()) * ComplexScalar::new(0.5, 0.0);
                a.set(i, j, sym);
            }
        }
        let mut vectors = super::identity(n);
        let threshold = tolerances::JACOBI_OFF_DIAGONAL * (1.0 + a.frobenius_norm());

        for _sweep in 0..100 {
            let mut off = 0.0f64;
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        off += a.get(i, j).norm_sqr();
                    }
                }
            }
            if off.sqrt() <= threshold {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.get(p, q);
                    let magnitude = apq.norm();
                    if magnitude == 0.0 {
                        continue;
                    }
                    // Strip the phase so the 2x2 block becomes real,
                    // then apply the classic symmetric Jacobi angle.
                    let phase = apq / magnitude;
                    let tau = (a.get(q, q).re - a.get(p, p).re) / (2.0 * magnitude);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    let w_qp = -s * phase.conj();
                    let w_qq = c * phase.conj();

                    // A <- U^dagger A U, applied as a column pass then
                    // a row pass of the 2x2 unitary U.
                    for k in 0..n {
                        let akp = a.get(k, p);
                        let akq = a.get(k, q);
                        a.set(k, p, akp * c + akq * w_qp);
                        a.set(k, q, akp * s + akq * w_qq);
                    }
                    for k in 0..n {
                        let apk = a.get(p, k);
                        let aqk = a.get(q, k);
                        a.set(p, k, apk * c + aqk * w_qp.conj());
                        a.set(q, k, apk * s + aqk * w_qq.conj());
                    }
                    for k in 0..n {
                        let vkp = vectors.get(k, p);
                        let vkq = vectors.get(k, q);
                        vectors.set(k, p, vkp * c + vkq * w_qp);
                        vectors.set(k, q, vkp * s + vkq * w_qq);
                    }
                }
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
        order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap());
        let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
        let mut sorted_vectors = Self::zeros(n);
        for (col, &src) in order.iter().enumerate() {
            for row in 0..n {
                sorted_vectors.set(row, col, vectors.get(row, src));
            }
        }
        Ok((values, sorted_vectors))
    }
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, other: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::add(self, other)
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, other: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::sub(self, other)
    }
}

impl std::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, other: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(other).expect("operator * requires equal dimensions")
    }
}
