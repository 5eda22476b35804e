use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{ComplexMatrix, ComplexScalar};
use crate::states::{QuantumState, ThreeQubitState, TwoQubitState};

/// Random-state families used by scans and property tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    HaarPure2q,
    GinibreMixed2q,
    HaarPure3q,
    GinibreMixed3q,
}

impl EnsembleKind {
    pub fn n_qubits(&self) -> usize {
        match self {
            EnsembleKind::HaarPure2q | EnsembleKind::GinibreMixed2q => 2,
            EnsembleKind::HaarPure3q | EnsembleKind::GinibreMixed3q => 3,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EnsembleKind::HaarPure2q => "haar_pure_2q",
            EnsembleKind::GinibreMixed2q => "ginibre_mixed_2q",
            EnsembleKind::HaarPure3q => "haar_pure_3q",
            EnsembleKind::GinibreMixed3q => "ginibre_mixed_3q",
        }
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "haar_pure_2q" => Ok(EnsembleKind::HaarPure2q),
            "ginibre_mixed_2q" => Ok(EnsembleKind::GinibreMixed2q),
            "haar_pure_3q" => Ok(EnsembleKind::HaarPure3q),
            "ginibre_mixed_3q" => Ok(EnsembleKind::GinibreMixed3q),
            other => Err(Error::UnknownEnsembleKind(other.to_string())),
        }
    }
}

/// A reproducible ensemble: `count` states drawn from `kind`, with
/// sample `k` generated from substream `k` of the seeded generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub count: u64,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, count: u64, seed: u64) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidParameter {
                name: "count",
                value: 0.0,
                expected: "count >= 1",
            });
        }
        Ok(Self { kind, count, seed })
    }
}

/// The crate-wide RNG stream rule: ChaCha8 seeded with `seed`, with
/// the 64-bit stream counter selecting the substream. Sample (or
/// restart) `k` always reads from stream `k`, so parallel evaluation
/// order cannot change results.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One standard normal via Box-Muller on the uniform stream.
fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    // u1 in (0, 1] keeps the logarithm finite.
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn complex_gaussian(rng: &mut ChaCha8Rng) -> ComplexScalar {
    ComplexScalar::new(standard_normal(rng), standard_normal(rng))
}

/// Haar-random pure state: normalised complex Gaussian vector turned
/// into a projector.
fn haar_pure(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    loop {
        let mut amplitudes: Vec<ComplexScalar> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        // A numerically zero draw is astronomically unlikely; redraw.
        if norm < 1e-150 {
            continue;
        }
        for z in &mut amplitudes {
            *z /= norm;
        }
        return ComplexMatrix::projector(&amplitudes);
    }
}

/// Ginibre-induced mixed state G G^dagger / Tr(G G^dagger).
fn ginibre_mixed(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let entries: Vec<ComplexScalar> = (0..dim * dim).map(|_| complex_gaussian(rng)).collect();
    let g = ComplexMatrix::new(dim, entries).expect("gaussian entries are finite");
    let gg = g.matmul(&g.dagger()).expect("square factors");
    let trace = gg.trace().re;
    gg.scale(ComplexScalar::new(1.0 / trace, 0.0))
}

/// Draw sample `index` of the ensemble. Deterministic in
/// (`spec.seed`, `index`) and independent of any other sample.
pub fn sample_state(spec: &EnsembleSpec, index: u64) -> QuantumState {
    let mut rng = stream_rng(spec.seed, index);
    let dim = 1usize << spec.kind.n_qubits();
    let matrix = match spec.kind {
        EnsembleKind::HaarPure2q | EnsembleKind::HaarPure3q => haar_pure(dim, &mut rng),
        EnsembleKind::GinibreMixed2q | EnsembleKind::GinibreMixed3q => ginibre_mixed(dim, &mut rng),
    };
    match spec.kind.n_qubits() {
        2 => QuantumState::Two(
            TwoQubitState::new(matrix).expect("sampled two-qubit states are valid by construction"),
        ),
        _ => QuantumState::Three(
            ThreeQubitState::new(matrix)
                .expect("sampled three-qubit states are valid by construction"),
        ),
    }
}

/// Materialise the whole ensemble in index order.
pub fn sample_ensemble(spec: &EnsembleSpec) -> Vec<QuantumState> {
    (0..spec.count).map(|k| sample_state(spec, k)).collect()
}
