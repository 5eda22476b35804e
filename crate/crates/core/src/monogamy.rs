//! Steering monogamy over tripartite states: reduced-state
//! correlation analysis and the bound
//! S_BA^2 + S_CA^2 <= 8, with each factor independently maximized
//! (which upper-bounds any shared-measurement value).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::digest::matrix_digest;
use crate::error::{Error, Result};
use crate::matcore::{sym3_eigensystem, RealMatrix3};
use crate::states::{sample_state, EnsembleSpec, QuantumState, ThreeQubitState, TwoQubitState};
use crate::steering::steering_criterion;
use crate::tolerances;

/// The monogamy bound on S_BA^2 + S_CA^2.
pub const MONOGAMY_BOUND: f64 = 8.0;

/// Which two parties survive the partial trace. Tensor order is
/// Alice, Bob, Charlie.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartyPair {
    AB,
    AC,
    BC,
}

impl PartyPair {
    fn kept_qubits(&self) -> [usize; 2] {
        match self {
            PartyPair::AB => [0, 1],
            PartyPair::AC => [0, 2],
            PartyPair::BC => [1, 2],
        }
    }
}

/// Reduced two-party state of a tripartite state.
pub fn reduced_pair(state: &ThreeQubitState, pair: PartyPair) -> TwoQubitState {
    let reduced = state
        .matrix()
        .partial_trace(3, &pair.kept_qubits())
        .expect("kept subsets are valid by construction");
    TwoQubitState::new(reduced).expect("partial trace preserves density-matrix structure")
}

/// Full 3x3 correlation matrices of the Alice-Bob and Alice-Charlie
/// reduced states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedCorrelations {
    pub t_ab: RealMatrix3,
    pub t_ac: RealMatrix3,
}

pub fn reduced_correlations(state: &ThreeQubitState) -> ReducedCorrelations {
    let t_ab = *reduced_pair(state, PartyPair::AB).decompose().correlation();
    let t_ac = *reduced_pair(state, PartyPair::AC).decompose().correlation();
    debug_assert!(t_ab.max_abs_entry() <= 1.0 + tolerances::BLOCH_SLACK);
    debug_assert!(t_ac.max_abs_entry() <= 1.0 + tolerances::BLOCH_SLACK);
    ReducedCorrelations { t_ab, t_ac }
}

/// One tripartite state checked against the bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonogamyReport {
    /// Maximal inequality value for Bob steering Alice, from rho_AB.
    pub s_ba_max: f64,
    /// Maximal inequality value for Charlie steering Alice, from rho_AC.
    pub s_ca_max: f64,
    pub lhs: f64,
    pub bound: f64,
    pub slack: f64,
    pub saturated: bool,
}

pub fn monogamy_check(state: &ThreeQubitState) -> MonogamyReport {
    let s_ba_max = steering_criterion(&reduced_pair(state, PartyPair::AB)).max_cffw;
    let s_ca_max = steering_criterion(&reduced_pair(state, PartyPair::AC)).max_cffw;
    let lhs = s_ba_max * s_ba_max + s_ca_max * s_ca_max;
    let slack = MONOGAMY_BOUND - lhs;
    MonogamyReport {
        s_ba_max,
        s_ca_max,
        lhs,
        bound: MONOGAMY_BOUND,
        slack,
        saturated: slack.abs() <= tolerances::SATURATION,
    }
}

/// The two routes of the reduced-state trace identity:
/// 2 sqrt(tr[T T^t]) (all three eigenvalues) and 2 sqrt(v + v~) (the
/// two greatest). The first can never be smaller.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceFormula {
    pub two_sqrt_trace: f64,
    pub two_sqrt_vv: f64,
}

pub fn trace_formula(state: &ThreeQubitState, pair: PartyPair) -> TraceFormula {
    let reduced = reduced_pair(state, pair);
    let t = *reduced.decompose().correlation();
    let gram = t.times_transpose();
    let two_sqrt_trace = 2.0 * gram.trace().max(0.0).sqrt();
    let eig = sym3_eigensystem(&gram, tolerances::HERMITICITY).expect("gram is symmetric");
    let two_sqrt_vv = 2.0 * (eig.values[0].max(0.0) + eig.values[1].max(0.0)).sqrt();
    TraceFormula {
        two_sqrt_trace,
        two_sqrt_vv,
    }
}

/// Identifies the extremal sample of a scan: its index within the
/// ensemble plus a content digest of its matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateDigest {
    pub index: u64,
    pub sha256_prefix: String,
}

/// Scan outcome over a tripartite ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub samples: u64,
    pub max_lhs: f64,
    pub violations: u64,
    pub argmax_state_digest: StateDigest,
}

/// Evaluate the bound over a seeded tripartite ensemble. Counts
/// samples with lhs > 8 + slack (Theorem-level violations, which
/// should never occur) and records the running maximum. Samples are
/// independent per index, so the parallel reduction is deterministic.
pub fn monogamy_scan(spec: &EnsembleSpec) -> Result<ScanSummary> {
    if spec.kind.n_qubits() != 3 {
        return Err(Error::WrongEnsembleArity {
            kind: spec.kind.name(),
            expected: 3,
            actual: spec.kind.n_qubits(),
        });
    }

    let (max_lhs, argmax_index, violations) = (0..spec.count)
        .into_par_iter()
        .map(|index| {
            let state = match sample_state(spec, index) {
                QuantumState::Three(s) => s,
                QuantumState::Two(_) => unreachable!("arity checked above"),
            };
            let lhs = monogamy_check(&state).lhs;
            let violation = u64::from(lhs > MONOGAMY_BOUND + tolerances::BOUND_SLACK);
            (lhs, index, violation)
        })
        .reduce(
            || (f64::NEG_INFINITY, u64::MAX, 0u64),
            |a, b| {
                // Larger lhs wins; ties prefer the smaller index.
                let best = if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    (b.0, b.1)
                } else {
                    (a.0, a.1)
                };
                (best.0, best.1, a.2 + b.2)
            },
        );

    let argmax_state = sample_state(spec, argmax_index);
    Ok(ScanSummary {
        samples: spec.count,
        max_lhs,
        violations,
        argmax_state_digest: StateDigest {
            index: argmax_index,
            sha256_prefix: matrix_digest(argmax_state.matrix()),
        },
    })
}
