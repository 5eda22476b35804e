//! Validated density-matrix types, Bloch decomposition, reference
//! states and seeded random ensembles.

mod bloch;
mod ensemble;
mod json;

pub use bloch::BlochDecomposition;
pub use ensemble::{sample_ensemble, sample_state, stream_rng, EnsembleKind, EnsembleSpec};
pub use json::{parse_state_json, state_to_json, StateJsonError};

use crate::error::{Error, Result};
use crate::matcore::{identity, ComplexMatrix, ComplexScalar};
use crate::tolerances;

/// A validated two-qubit density matrix: Hermitian, unit trace and
/// positive semidefinite within the pinned tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    matrix: ComplexMatrix,
}

/// A validated three-qubit density matrix (Alice, Bob, Charlie in
/// tensor order).
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeQubitState {
    matrix: ComplexMatrix,
}

/// Either arity, as produced by [`validate`] and the ensemble
/// samplers.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumState {
    Two(TwoQubitState),
    Three(ThreeQubitState),
}

impl QuantumState {
    pub fn n_qubits(&self) -> usize {
        match self {
            QuantumState::Two(_) => 2,
            QuantumState::Three(_) => 3,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        match self {
            QuantumState::Two(s) => s.matrix(),
            QuantumState::Three(s) => s.matrix(),
        }
    }

    pub fn as_two_qubit(&self) -> Option<&TwoQubitState> {
        match self {
            QuantumState::Two(s) => Some(s),
            QuantumState::Three(_) => None,
        }
    }

    pub fn as_three_qubit(&self) -> Option<&ThreeQubitState> {
        match self {
            QuantumState::Three(s) => Some(s),
            QuantumState::Two(_) => None,
        }
    }
}

/// Check Hermiticity, unit trace and positive semidefiniteness. With
/// `repair` set, eigenvalues in `(-REPAIR_LIMIT, 0)` are clipped to
/// zero and the state renormalised instead of rejected; anything more
/// negative still fails, so a broken generator cannot hide behind the
/// flag.
fn validate_density(matrix: ComplexMatrix, repair: bool) -> Result<ComplexMatrix> {
    let deviation = matrix.hermiticity_deviation();
    if deviation > tolerances::HERMITICITY {
        return Err(Error::NotHermitian {
            deviation,
            tol: tolerances::HERMITICITY,
        });
    }
    let trace = matrix.trace();
    let trace_deviation = (trace - ComplexScalar::new(1.0, 0.0)).norm();
    if trace_deviation > tolerances::UNIT_TRACE {
        return Err(Error::NotUnitTrace {
            deviation: trace_deviation,
            tol: tolerances::UNIT_TRACE,
        });
    }
    let eigenvalues = matrix.hermitian_eigenvalues(tolerances::HERMITICITY)?;
    let min_eigenvalue = *eigenvalues.last().expect("nonempty spectrum");
    if min_eigenvalue >= -tolerances::PSD_MIN_EIGENVALUE {
        return Ok(matrix);
    }
    if !repair || min_eigenvalue < -tolerances::REPAIR_LIMIT {
        return Err(Error::NotPositiveSemidefinite {
            min_eigenvalue,
            tol: tolerances::PSD_MIN_EIGENVALUE,
        });
    }

    // Repair: rebuild from the eigensystem with negatives clipped to
    // zero, then renormalise the trace.
    let (values, vectors) = matrix.hermitian_eigensystem(tolerances::HERMITICITY)?;
    let dim = matrix.dim();
    let clipped: Vec<f64> = values.iter().map(|&v| v.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    let mut repaired = ComplexMatrix::zeros(dim);
    for (k, &lambda) in clipped.iter().enumerate() {
        if lambda == 0.0 {
            continue;
        }
        let column: Vec<ComplexScalar> = (0..dim).map(|row| vectors.get(row, k)).collect();
        let term = ComplexMatrix::projector(&column).scale(ComplexScalar::new(lambda / total, 0.0));
        repaired = repaired.add(&term);
    }
    Ok(repaired)
}

impl TwoQubitState {
    /// Validate a 4x4 matrix as a two-qubit density matrix.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_repair(matrix, false)
    }

    /// Like [`TwoQubitState::new`] but clipping tiny negative
    /// eigenvalues (see `validate_density`).
    pub fn with_repair(matrix: ComplexMatrix, repair: bool) -> Result<Self> {
        if matrix.dim() != 4 {
            return Err(Error::UnsupportedStateDimension { dim: matrix.dim() });
        }
        Ok(Self {
            matrix: validate_density(matrix, repair)?,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

impl ThreeQubitState {
    /// Validate an 8x8 matrix as a three-qubit density matrix.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_repair(matrix, false)
    }

    pub fn with_repair(matrix: ComplexMatrix, repair: bool) -> Result<Self> {
        if matrix.dim() != 8 {
            return Err(Error::UnsupportedStateDimension { dim: matrix.dim() });
        }
        Ok(Self {
            matrix: validate_density(matrix, repair)?,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Validate a matrix of dimension 4 or 8 into the corresponding typed
/// state.
pub fn validate(matrix: ComplexMatrix) -> Result<QuantumState> {
    validate_with_repair(matrix, false)
}

/// [`validate`] with optional clipping of tiny negative eigenvalues.
pub fn validate_with_repair(matrix: ComplexMatrix, repair: bool) -> Result<QuantumState> {
    match matrix.dim() {
        4 => Ok(QuantumState::Two(TwoQubitState::with_repair(matrix, repair)?)),
        8 => Ok(QuantumState::Three(ThreeQubitState::with_repair(
            matrix, repair,
        )?)),
        dim => Err(Error::UnsupportedStateDimension { dim }),
    }
}

/// Werner state p |Phi+><Phi+| + (1-p) I/4.
pub fn werner(p: f64) -> Result<TwoQubitState> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(Error::InvalidParameter {
            name: "p",
            value: p,
            expected: "0 <= p <= 1",
        });
    }
    let bell = bell_phi_plus_matrix();
    let mixed = identity(4).scale(ComplexScalar::new((1.0 - p) / 4.0, 0.0));
    let matrix = bell.scale(ComplexScalar::new(p, 0.0)).add(&mixed);
    TwoQubitState::new(matrix)
}

fn amp(re: f64) -> ComplexScalar {
    ComplexScalar::new(re, 0.0)
}

fn bell_phi_plus_matrix() -> ComplexMatrix {
    let inv = 1.0 / 2.0f64.sqrt();
    ComplexMatrix::projector(&[amp(inv), amp(0.0), amp(0.0), amp(inv)])
}

/// Reference states by name: the four Bell states plus GHZ and W.
pub fn named_state(name: &str) -> Result<QuantumState> {
    let inv2 = 1.0 / 2.0f64.sqrt();
    let inv3 = 1.0 / 3.0f64.sqrt();
    let matrix = match name {
        "bell_phi_plus" => bell_phi_plus_matrix(),
        "bell_phi_minus" => ComplexMatrix::projector(&[amp(inv2), amp(0.0), amp(0.0), amp(-inv2)]),
        "bell_psi_plus" => ComplexMatrix::projector(&[amp(0.0), amp(inv2), amp(inv2), amp(0.0)]),
        "bell_psi_minus" => ComplexMatrix::projector(&[amp(0.0), amp(inv2), amp(-inv2), amp(0.0)]),
        "ghz" => {
            let mut amps = vec![amp(0.0); 8];
            amps[0] = amp(inv2);
            amps[7] = amp(inv2);
            ComplexMatrix::projector(&amps)
        }
        "w" => {
            let mut amps = vec![amp(0.0); 8];
            amps[1] = amp(inv3);
            amps[2] = amp(inv3);
            amps[4] = amp(inv3);
            ComplexMatrix::projector(&amps)
        }
        other => return Err(Error::UnknownStateName(other.to_string())),
    };
    validate(matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::pauli;

    #[test]
    fn maximally_mixed_is_valid() {
        let m = identity(4).scale(ComplexScalar::new(0.25, 0.0));
        assert!(matches!(validate(m), Ok(QuantumState::Two(_))));
    }

    #[test]
    fn negative_eigenvalue_rejected_with_magnitude() {
        let mut m = ComplexMatrix::zeros(4);
        m.set(0, 0, ComplexScalar::new(1.5, 0.0));
        m.set(1, 1, ComplexScalar::new(-0.5, 0.0));
        match validate(m) {
            Err(Error::NotPositiveSemidefinite { min_eigenvalue, .. }) => {
                assert!((min_eigenvalue + 0.5).abs() < 1e-12);
            }
            other => panic!("expected PSD failure, got {other:?}"),
        }
    }

    #[test]
    fn bell_projector_is_valid() {
        assert!(named_state("bell_phi_plus").is_ok());
    }

    #[test]
    fn non_hermitian_and_bad_trace_rejected() {
        let mut m = identity(4).scale(ComplexScalar::new(0.25, 0.0));
        m.set(0, 1, ComplexScalar::new(0.1, 0.0));
        assert!(matches!(validate(m), Err(Error::NotHermitian { .. })));

        let m = identity(4).scale(ComplexScalar::new(0.3, 0.0));
        match validate(m) {
            Err(Error::NotUnitTrace { deviation, .. }) => {
                assert!((deviation - 0.2).abs() < 1e-12)
            }
            other => panic!("expected trace failure, got {other:?}"),
        }
    }

    #[test]
    fn wrong_dimension_rejected() {
        let m = identity(2).scale(ComplexScalar::new(0.5, 0.0));
        assert!(matches!(
            validate(m),
            Err(Error::UnsupportedStateDimension { dim: 2 })
        ));
    }

    #[test]
    fn repair_clips_tiny_negatives_only() {
        // Slightly negative eigenvalue within the repair limit.
        let eps = 1e-8;
        let mut m = ComplexMatrix::zeros(4);
        m.set(0, 0, ComplexScalar::new(1.0 + eps, 0.0));
        m.set(1, 1, ComplexScalar::new(-eps, 0.0));
        assert!(validate(m.clone()).is_err());
        let repaired = validate_with_repair(m, true).unwrap();
        let eigs = repaired
            .matrix()
            .hermitian_eigenvalues(tolerances::HERMITICITY)
            .unwrap();
        assert!(*eigs.last().unwrap() >= 0.0);
        assert!((repaired.matrix().trace().re - 1.0).abs() < 1e-12);

        // Far beyond the repair limit: still rejected.
        let mut bad = ComplexMatrix::zeros(4);
        bad.set(0, 0, ComplexScalar::new(1.5, 0.0));
        bad.set(1, 1, ComplexScalar::new(-0.5, 0.0));
        assert!(validate_with_repair(bad, true).is_err());
    }

    #[test]
    fn werner_endpoints() {
        let w0 = werner(0.0).unwrap();
        let mixed = identity(4).scale(ComplexScalar::new(0.25, 0.0));
        assert!(w0.matrix().max_abs_diff(&mixed) < 1e-15);

        let w1 = werner(1.0).unwrap();
        assert!(w1.matrix().max_abs_diff(&bell_phi_plus_matrix()) < 1e-15);

        assert!(werner(-0.1).is_err());
        assert!(werner(1.1).is_err());
    }

    #[test]
    fn named_states_have_expected_structure() {
        let ghz = named_state("ghz").unwrap();
        assert_eq!(ghz.n_qubits(), 3);
        let m = ghz.matrix();
        assert!((m.get(0, 0).re - 0.5).abs() < 1e-15);
        assert!((m.get(7, 7).re - 0.5).abs() < 1e-15);
        assert!((m.get(0, 7).re - 0.5).abs() < 1e-15);

        let w = named_state("w").unwrap();
        let m = w.matrix();
        for idx in [1, 2, 4] {
            assert!((m.get(idx, idx).re - 1.0 / 3.0).abs() < 1e-15);
        }

        assert!(matches!(
            named_state("nope"),
            Err(Error::UnknownStateName(_))
        ));
    }

    #[test]
    fn named_bell_psi_plus_correlations() {
        // Direct trace computation against the Pauli basis.
        let state = named_state("bell_psi_plus").unwrap();
        let rho = state.matrix();
        for (i, j, expected) in [(0, 0, 1.0), (1, 1, 1.0), (2, 2, -1.0), (0, 2, 0.0)] {
            let observable = pauli(i).kron(&pauli(j));
            let value = rho.matmul(&observable).unwrap().trace();
            assert!((value.re - expected).abs() < 1e-14);
            assert!(value.im.abs() < 1e-14);
        }
    }
}
