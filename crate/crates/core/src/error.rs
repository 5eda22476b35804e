use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Rejected inputs and violated invariants. Validation variants carry
/// the measured magnitude so failures name both the broken invariant
/// and how badly it broke.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("expected {expected} entries for dimension {dim}, got {len}")]
    EntryCount { dim: usize, expected: usize, len: usize },

    #[error("non-finite matrix entry at index {index}")]
    NonFiniteEntry { index: usize },

    #[error("not Hermitian: max |A - A\u{2020}| = {deviation:.3e} exceeds {tol:.1e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("not symmetric: max |M - M\u{1d57}| = {deviation:.3e} exceeds {tol:.1e}")]
    NotSymmetric { deviation: f64, tol: f64 },

    #[error("trace differs from one: |Tr - 1| = {deviation:.3e} exceeds {tol:.1e}")]
    NotUnitTrace { deviation: f64, tol: f64 },

    #[error("not positive semidefinite: min eigenvalue {min_eigenvalue:.3e} below -{tol:.1e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64, tol: f64 },

    #[error("density matrix dimension {dim} is neither 4 (two qubits) nor 8 (three qubits)")]
    UnsupportedStateDimension { dim: usize },

    #[error("invalid qubit subset {subset:?} for {n_qubits} qubits (must be nonempty, strictly increasing, in range)")]
    InvalidQubitSubset { subset: Vec<usize>, n_qubits: usize },

    #[error("{which} is not a unit vector: |norm - 1| = {deviation:.3e}")]
    NotUnitVector { which: &'static str, deviation: f64 },

    #[error("steered party's settings not mutually unbiased for {direction}: |dot| = {dot:.3e}")]
    SettingsNotOrthogonal { direction: &'static str, dot: f64 },

    #[error("frame vectors not orthogonal: |c\u{302}\u{b7}c\u{302}'| = {dot:.3e}")]
    FrameNotOrthogonal { dot: f64 },

    #[error("{which} Bloch vector norm {norm} exceeds one")]
    BlochNormTooLarge { which: &'static str, norm: f64 },

    #[error("correlation entry t[{row}][{col}] = {value} exceeds one in magnitude")]
    CorrelationEntryTooLarge { row: usize, col: usize, value: f64 },

    #[error("parameter {name} = {value} is out of range ({expected})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("unknown state name {0:?}")]
    UnknownStateName(String),

    #[error("unknown ensemble kind {0:?}")]
    UnknownEnsembleKind(String),

    #[error("ensemble kind {kind} produces {actual}-qubit states, expected {expected}-qubit")]
    WrongEnsembleArity {
        kind: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("expected a {expected}-qubit state, got {actual} qubits")]
    WrongStateArity { expected: usize, actual: usize },
}
