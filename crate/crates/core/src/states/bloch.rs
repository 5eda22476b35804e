use crate::error::{Error, Result};
use crate::matcore::{identity, pauli, ComplexMatrix, ComplexScalar, RealMatrix3, Vector3};
use crate::states::TwoQubitState;
use crate::tolerances;

/// Hilbert-Schmidt decomposition of a two-qubit state:
/// rho = (I kron I + r.sigma kron I + I kron s.sigma
///        + sum_ij t_ij sigma_i kron sigma_j) / 4.
///
/// `r` is Alice's local Bloch vector, `s` Bob's, and `t` the 3x3
/// correlation matrix with row index Alice, column index Bob, in the
/// fixed basis sigma_1 = x, sigma_2 = y, sigma_3 = z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochDecomposition {
    r: Vector3,
    s: Vector3,
    t: RealMatrix3,
}

impl BlochDecomposition {
    /// Build from components, enforcing the physical bounds
    /// ||r||, ||s|| <= 1 and |t_ij| <= 1 (within slack).
    pub fn new(r: Vector3, s: Vector3, t: RealMatrix3) -> Result<Self> {
        let limit = 1.0 + tolerances::BLOCH_SLACK;
        if !r.norm().is_finite() || r.norm() > limit {
            return Err(Error::BlochNormTooLarge {
                which: "Alice",
                norm: r.norm(),
            });
        }
        if !s.norm().is_finite() || s.norm() > limit {
            return Err(Error::BlochNormTooLarge {
                which: "Bob",
                norm: s.norm(),
            });
        }
        for row in 0..3 {
            for col in 0..3 {
                let value = t.get(row, col);
                if !value.is_finite() || value.abs() > limit {
                    return Err(Error::CorrelationEntryTooLarge { row, col, value });
                }
            }
        }
        Ok(Self { r, s, t })
    }

    pub fn alice_bloch(&self) -> Vector3 {
        self.r
    }

    pub fn bob_bloch(&self) -> Vector3 {
        self.s
    }

    pub fn correlation(&self) -> &RealMatrix3 {
        &self.t
    }

    /// Reconstruct the density matrix. Fails when the parameters do
    /// not describe a positive semidefinite operator: not every point
    /// of the parameter cube is a physical state.
    pub fn compose(&self) -> Result<TwoQubitState> {
        let i2 = identity(2);
        let mut matrix = identity(4);
        for k in 0..3 {
            let rk = self.r.0[k];
            if rk != 0.0 {
                matrix = matrix.add(&pauli(k).kron(&i2).scale(ComplexScalar::new(rk, 0.0)));
            }
            let sk = self.s.0[k];
            if sk != 0.0 {
                matrix = matrix.add(&i2.kron(&pauli(k)).scale(ComplexScalar::new(sk, 0.0)));
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                let tij = self.t.get(i, j);
                if tij != 0.0 {
                    matrix = matrix.add(&pauli(i).kron(&pauli(j)).scale(ComplexScalar::new(tij, 0.0)));
                }
            }
        }
        TwoQubitState::new(matrix.scale(ComplexScalar::new(0.25, 0.0)))
    }
}

impl TwoQubitState {
    /// Pauli expectations of the state: r_i = <sigma_i kron I>,
    /// s_j = <I kron sigma_j>, t_ij = <sigma_i kron sigma_j>.
    pub fn decompose(&self) -> BlochDecomposition {
        let rho = self.matrix();
        let i2 = identity(2);
        let expectation = |observable: &ComplexMatrix| -> f64 {
            let value = rho
                .matmul(observable)
                .expect("observable dimension matches state")
                .trace();
            debug_assert!(
                value.im.abs() < 1e-10,
                "Pauli expectation should be real, got imaginary part {}",
                value.im
            );
            value.re
        };

        let mut r = [0.0; 3];
        let mut s = [0.0; 3];
        let mut t = [[0.0; 3]; 3];
        for i in 0..3 {
            r[i] = expectation(&pauli(i).kron(&i2));
            s[i] = expectation(&i2.kron(&pauli(i)));
            for j in 0..3 {
                t[i][j] = expectation(&pauli(i).kron(&pauli(j)));
            }
        }
        BlochDecomposition::new(Vector3(r), Vector3(s), RealMatrix3(t))
            .expect("valid states decompose within physical bounds")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{named_state, werner, QuantumState};

    fn mixed() -> TwoQubitState {
        TwoQubitState::new(identity(4).scale(ComplexScalar::new(0.25, 0.0))).unwrap()
    }

    fn bell_phi_plus() -> TwoQubitState {
        match named_state("bell_phi_plus").unwrap() {
            QuantumState::Two(s) => s,
            _ => unreachable!(),
        }
    }

    #[test]
    fn maximally_mixed_decomposes_to_zero() {
        let d = mixed().decompose();
        assert_eq!(d.alice_bloch().norm(), 0.0);
        assert_eq!(d.bob_bloch().norm(), 0.0);
        assert_eq!(d.correlation().max_abs_entry(), 0.0);
    }

    #[test]
    fn bell_phi_plus_decomposition() {
        let d = bell_phi_plus().decompose();
        assert!(d.alice_bloch().norm() < 1e-14);
        assert!(d.bob_bloch().norm() < 1e-14);
        let expected = RealMatrix3::diagonal(1.0, -1.0, 1.0);
        for i in 0..3 {
            for j in 0..3 {
                assert!((d.correlation().get(i, j) - expected.get(i, j)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn werner_decomposition_is_linear_in_p() {
        let d = werner(0.5).unwrap().decompose();
        let expected = RealMatrix3::diagonal(0.5, -0.5, 0.5);
        for i in 0..3 {
            for j in 0..3 {
                assert!((d.correlation().get(i, j) - expected.get(i, j)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn compose_inverts_decompose_on_reference_states() {
        let zero = BlochDecomposition::new(
            Vector3([0.0; 3]),
            Vector3([0.0; 3]),
            RealMatrix3::ZERO,
        )
        .unwrap();
        assert!(zero
            .compose()
            .unwrap()
            .matrix()
            .max_abs_diff(mixed().matrix())
            < 1e-15);

        let bell = BlochDecomposition::new(
            Vector3([0.0; 3]),
            Vector3([0.0; 3]),
            RealMatrix3::diagonal(1.0, -1.0, 1.0),
        )
        .unwrap();
        assert!(bell
            .compose()
            .unwrap()
            .matrix()
            .max_abs_diff(bell_phi_plus().matrix())
            < 1e-14);
    }

    #[test]
    fn compose_rejects_unphysical_correlations() {
        // T = diag(1, 1, 1) is inside the parameter cube but composes
        // to a matrix with a negative eigenvalue.
        let d = BlochDecomposition::new(
            Vector3([0.0; 3]),
            Vector3([0.0; 3]),
            RealMatrix3::identity(),
        )
        .unwrap();
        assert!(matches!(
            d.compose(),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
    }

    #[test]
    fn field_bounds_enforced() {
        let too_long = Vector3([1.1, 0.0, 0.0]);
        assert!(BlochDecomposition::new(too_long, Vector3([0.0; 3]), RealMatrix3::ZERO).is_err());
        let mut t = [[0.0; 3]; 3];
        t[1][2] = -1.5;
        assert!(
            BlochDecomposition::new(Vector3([0.0; 3]), Vector3([0.0; 3]), RealMatrix3(t)).is_err()
        );
    }
}
