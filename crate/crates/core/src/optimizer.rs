//! Derivative-free maximization of the raw inequality value over all
//! admissible measurement configurations. This is the independent
//! check on the closed-form criterion: it never looks at eigenvalues,
//! only at function evaluations over a seven-angle chart.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matcore::Vector3;
use crate::states::{stream_rng, BlochDecomposition, TwoQubitState};
use crate::steering::{cffw_value_from_bloch, MeasurementConfiguration, SteeringDirection};
use rand::Rng;

const DIMENSIONS: usize = 7;
/// Initial simplex edge length in radians.
const SIMPLEX_EDGE: f64 = 0.3;

/// Multi-start search settings. Restart `k` always derives its
/// starting point from substream `k` of the seed, so the best value
/// over restarts is monotone in the restart count and independent of
/// evaluation order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizationSettings {
    restarts: u32,
    max_iterations: u32,
    tolerance: f64,
    seed: u64,
}

impl OptimizationSettings {
    pub const DEFAULT_RESTARTS: u32 = 24;
    pub const DEFAULT_MAX_ITERATIONS: u32 = 2000;
    pub const DEFAULT_TOLERANCE: f64 = 1e-10;

    pub fn new(seed: u64) -> Self {
        Self {
            restarts: Self::DEFAULT_RESTARTS,
            max_iterations: Self::DEFAULT_MAX_ITERATIONS,
            tolerance: Self::DEFAULT_TOLERANCE,
            seed,
        }
    }

    pub fn with_restarts(mut self, restarts: u32) -> Result<Self> {
        if restarts == 0 {
            return Err(Error::InvalidParameter {
                name: "restarts",
                value: 0.0,
                expected: "restarts >= 1",
            });
        }
        self.restarts = restarts;
        Ok(self)
    }

    pub fn with_max_iterations(mut self, max_iterations: u32) -> Result<Self> {
        if max_iterations == 0 {
            return Err(Error::InvalidParameter {
                name: "max_iterations",
                value: 0.0,
                expected: "max_iterations >= 1",
            });
        }
        self.max_iterations = max_iterations;
        Ok(self)
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "tolerance",
                value: tolerance,
                expected: "finite tolerance > 0",
            });
        }
        self.tolerance = tolerance;
        Ok(self)
    }

    pub fn restarts(&self) -> u32 {
        self.restarts
    }

    pub fn max_iterations(&self) -> u32 {
        self.max_iterations
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Unconstrained chart over the configuration space: two free unit
/// vectors from spherical angles, plus a spherical pair and an
/// in-plane rotation for the mutually orthogonal pair. For Bob-to-
/// Alice steering the orthogonal pair is Alice's (a, a') and the free
/// pair Bob's (b, b'); for Alice-to-Bob the roles swap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleParametrization {
    pub theta_b: f64,
    pub phi_b: f64,
    pub theta_b_prime: f64,
    pub phi_b_prime: f64,
    pub theta_a: f64,
    pub phi_a: f64,
    pub psi_a: f64,
}

fn unit_from_spherical(theta: f64, phi: f64) -> Vector3 {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    Vector3([st * cp, st * sp, ct])
}

/// A unit vector plus a unit vector orthogonal to it for every psi:
/// the rotation happens inside the tangent plane spanned by the
/// spherical basis vectors theta-hat and phi-hat.
fn orthogonal_pair(theta: f64, phi: f64, psi: f64) -> (Vector3, Vector3) {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let axis = Vector3([st * cp, st * sp, ct]);
    let theta_hat = Vector3([ct * cp, ct * sp, -st]);
    let phi_hat = Vector3([-sp, cp, 0.0]);
    let (spsi, cpsi) = psi.sin_cos();
    let perpendicular = theta_hat.scale(cpsi) + phi_hat.scale(spsi);
    (axis, perpendicular)
}

impl AngleParametrization {
    pub fn from_array(x: &[f64; DIMENSIONS]) -> Self {
        Self {
            theta_b: x[0],
            phi_b: x[1],
            theta_b_prime: x[2],
            phi_b_prime: x[3],
            theta_a: x[4],
            phi_a: x[5],
            psi_a: x[6],
        }
    }

    pub fn as_array(&self) -> [f64; DIMENSIONS] {
        [
            self.theta_b,
            self.phi_b,
            self.theta_b_prime,
            self.phi_b_prime,
            self.theta_a,
            self.phi_a,
            self.psi_a,
        ]
    }

    /// Assemble the measurement configuration for the given steering
    /// direction. The result always satisfies that direction's
    /// orthogonality constraint by construction.
    pub fn configuration(&self, direction: SteeringDirection) -> MeasurementConfiguration {
        let free = unit_from_spherical(self.theta_b, self.phi_b);
        let free_prime = unit_from_spherical(self.theta_b_prime, self.phi_b_prime);
        let (steered, steered_prime) = orthogonal_pair(self.theta_a, self.phi_a, self.psi_a);
        match direction {
            SteeringDirection::BobToAlice => {
                MeasurementConfiguration::new(steered, steered_prime, free, free_prime)
            }
            SteeringDirection::AliceToBob => {
                MeasurementConfiguration::new(free, free_prime, steered, steered_prime)
            }
        }
        .expect("chart produces unit vectors")
    }
}

/// Best value found together with the configuration attaining it.
/// `converged` reports whether the winning restart's simplex shrank
/// below the stop tolerance before hitting the iteration cap; the
/// value is the best seen either way.
#[derive(Debug, Clone)]
pub struct NumericMaximum {
    pub value: f64,
    pub config: MeasurementConfiguration,
    pub converged: bool,
}

struct RestartOutcome {
    value: f64,
    point: [f64; DIMENSIONS],
    converged: bool,
}

/// Nelder-Mead on the negated objective. Standard reflection /
/// expansion / contraction / shrink coefficients; stops when the
/// simplex diameter (max-norm radius around the best vertex) drops
/// below `tolerance`.
fn nelder_mead_maximize<F>(
    objective: &F,
    start: [f64; DIMENSIONS],
    max_iterations: u32,
    tolerance: f64,
) -> RestartOutcome
where
    F: Fn(&[f64; DIMENSIONS]) -> f64,
{
    const REFLECTION: f64 = 1.0;
    const EXPANSION: f64 = 2.0;
    const CONTRACTION: f64 = 0.5;
    const SHRINK: f64 = 0.5;

    let cost = |x: &[f64; DIMENSIONS]| -objective(x);

    let mut simplex: Vec<([f64; DIMENSIONS], f64)> = Vec::with_capacity(DIMENSIONS + 1);
    simplex.push((start, cost(&start)));
    for i in 0..DIMENSIONS {
        let mut vertex = start;
        vertex[i] += SIMPLEX_EDGE;
        simplex.push((vertex, cost(&vertex)));
    }

    let mut converged = false;
    for _ in 0..max_iterations {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());

        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max)
            })
            .fold(0.0f64, f64::max);
        if diameter < tolerance {
            converged = true;
            break;
        }

        let worst = simplex[DIMENSIONS].0;
        let worst_cost = simplex[DIMENSIONS].1;
        let second_worst_cost = simplex[DIMENSIONS - 1].1;
        let best_cost = simplex[0].1;

        let mut centroid = [0.0f64; DIMENSIONS];
        for (x, _) in &simplex[..DIMENSIONS] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / DIMENSIONS as f64;
            }
        }
        let blend = |from: &[f64; DIMENSIONS], towards: &[f64; DIMENSIONS], factor: f64| {
            let mut out = [0.0f64; DIMENSIONS];
            for i in 0..DIMENSIONS {
                out[i] = from[i] + factor * (towards[i] - from[i]);
            }
            out
        };

        // Reflect the worst vertex through the centroid.
        let reflected = blend(&centroid, &worst, -REFLECTION);
        let reflected_cost = cost(&reflected);

        if reflected_cost < best_cost {
            let expanded = blend(&centroid, &reflected, EXPANSION);
            let expanded_cost = cost(&expanded);
            simplex[DIMENSIONS] = if expanded_cost < reflected_cost {
                (expanded, expanded_cost)
            } else {
                (reflected, reflected_cost)
            };
        } else if reflected_cost < second_worst_cost {
            simplex[DIMENSIONS] = (reflected, reflected_cost);
        } else {
            let (towards, limit) = if reflected_cost < worst_cost {
                (reflected, reflected_cost)
            } else {
                (worst, worst_cost)
            };
            let contracted = blend(&centroid, &towards, CONTRACTION);
            let contracted_cost = cost(&contracted);
            if contracted_cost < limit {
                simplex[DIMENSIONS] = (contracted, contracted_cost);
            } else {
                let best = simplex[0].0;
                for entry in simplex.iter_mut().skip(1) {
                    entry.0 = blend(&best, &entry.0, SHRINK);
                    entry.1 = cost(&entry.0);
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    RestartOutcome {
        value: -simplex[0].1,
        point: simplex[0].0,
        converged,
    }
}

/// Numerically maximize the inequality value over all admissible
/// configurations: multi-start Nelder-Mead over the seven-angle
/// chart, best value over restarts, deterministic given the seed.
pub fn maximize_cffw_numeric(
    state: &TwoQubitState,
    direction: SteeringDirection,
    settings: &OptimizationSettings,
) -> NumericMaximum {
    let decomposition = state.decompose();
    maximize_from_bloch(&decomposition, direction, settings)
}

/// [`maximize_cffw_numeric`] for a decomposition already in hand.
pub fn maximize_from_bloch(
    decomposition: &BlochDecomposition,
    direction: SteeringDirection,
    settings: &OptimizationSettings,
) -> NumericMaximum {
    let objective = |x: &[f64; DIMENSIONS]| -> f64 {
        let config = AngleParametrization::from_array(x).configuration(direction);
        cffw_value_from_bloch(decomposition, &config, direction)
            .expect("chart configurations satisfy the direction constraint")
    };

    let best = (0..settings.restarts)
        .into_par_iter()
        .map(|restart| {
            let mut rng = stream_rng(settings.seed, u64::from(restart));
            let mut start = [0.0f64; DIMENSIONS];
            // Polar angles over [0, pi], azimuths and the in-plane
            // rotation over [0, 2 pi), in field order.
            for (i, slot) in start.iter_mut().enumerate() {
                let span = if i == 0 || i == 2 || i == 4 {
                    std::f64::consts::PI
                } else {
                    std::f64::consts::TAU
                };
                *slot = rng.random::<f64>() * span;
            }
            let outcome = nelder_mead_maximize(
                &objective,
                start,
                settings.max_iterations,
                settings.tolerance,
            );
            (restart, outcome)
        })
        .reduce_with(|a, b| {
            // Highest value wins; ties go to the lower restart index
            // so the reduction is schedule-independent.
            if (b.1.value, a.0) > (a.1.value, b.0) {
                b
            } else {
                a
            }
        })
        .expect("at least one restart");

    let config = AngleParametrization::from_array(&best.1.point).configuration(direction);
    let value = cffw_value_from_bloch(decomposition, &config, direction)
        .expect("chart configurations satisfy the direction constraint");
    NumericMaximum {
        value,
        config,
        converged: best.1.converged,
    }
}

/// Exhaustive sweep over a regular grid on the seven-angle chart: a
/// lower bound on the true maximum that converges from below as the
/// resolution grows. Polar angles get `resolution / 2 + 1` points on
/// [0, pi], azimuths `resolution` points on [0, 2 pi), giving uniform
/// angular spacing `2 pi / resolution` everywhere.
pub fn grid_refine(
    state: &TwoQubitState,
    direction: SteeringDirection,
    resolution: u32,
) -> Result<f64> {
    if resolution < 8 {
        return Err(Error::InvalidParameter {
            name: "resolution",
            value: f64::from(resolution),
            expected: "resolution >= 8",
        });
    }
    let decomposition = state.decompose();
    let t = decomposition.correlation();

    let polar_count = (resolution / 2 + 1) as usize;
    let azimuth_count = resolution as usize;
    let polar_step = std::f64::consts::PI / (polar_count - 1) as f64;
    let azimuth_step = std::f64::consts::TAU / azimuth_count as f64;

    // Free vectors with their images on the steered party's side:
    // for Bob-to-Alice the value contracts a-settings against
    // T (b +- b'), so the image of a free vector f is T f; transposed
    // for the other direction.
    let mut free_images: Vec<Vector3> = Vec::with_capacity(polar_count * azimuth_count);
    for pi_idx in 0..polar_count {
        let theta = pi_idx as f64 * polar_step;
        for az_idx in 0..azimuth_count {
            let phi = az_idx as f64 * azimuth_step;
            let v = unit_from_spherical(theta, phi);
            free_images.push(match direction {
                SteeringDirection::BobToAlice => t.matvec(&v),
                SteeringDirection::AliceToBob => t.transpose_matvec(&v),
            });
        }
    }

    // Steered orthogonal pairs from (theta, phi, psi).
    let mut steered_pairs: Vec<(Vector3, Vector3)> =
        Vec::with_capacity(polar_count * azimuth_count * azimuth_count);
    for pi_idx in 0..polar_count {
        let theta = pi_idx as f64 * polar_step;
        for az_idx in 0..azimuth_count {
            let phi = az_idx as f64 * azimuth_step;
            for psi_idx in 0..azimuth_count {
                let psi = psi_idx as f64 * azimuth_step;
                steered_pairs.push(orthogonal_pair(theta, phi, psi));
            }
        }
    }

    // Swapping the two free vectors flips the difference image, which
    // the value only sees squared, so the unordered upper triangle
    // (including the diagonal: the free settings may coincide)
    // already covers every grid configuration.
    let maximum = (0..free_images.len())
        .into_par_iter()
        .map(|i| {
            let mut local = 0.0f64;
            for j in i..free_images.len() {
                let sum = free_images[i] + free_images[j];
                let diff = free_images[i] - free_images[j];
                for (s, sp) in &steered_pairs {
                    let first = s.dot(&sum);
                    let second = sp.dot(&sum);
                    let third = s.dot(&diff);
                    let fourth = sp.dot(&diff);
                    let value = (first * first + second * second).sqrt()
                        + (third * third + fourth * fourth).sqrt();
                    if value > local {
                        local = value;
                    }
                }
            }
            local
        })
        .reduce(|| 0.0f64, f64::max);

    Ok(maximum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{identity, ComplexScalar};
    use crate::states::{named_state, sample_state, EnsembleKind, EnsembleSpec, QuantumState};
    use crate::steering::{steering_criterion, QUANTUM_MAX};

    fn bell_phi_plus() -> TwoQubitState {
        match named_state("bell_phi_plus").unwrap() {
            QuantumState::Two(s) => s,
            _ => unreachable!(),
        }
    }

    fn maximally_mixed() -> TwoQubitState {
        TwoQubitState::new(identity(4).scale(ComplexScalar::new(0.25, 0.0))).unwrap()
    }

    fn ginibre(seed: u64, index: u64) -> TwoQubitState {
        let spec = EnsembleSpec::new(EnsembleKind::GinibreMixed2q, index + 1, seed).unwrap();
        match sample_state(&spec, index) {
            QuantumState::Two(s) => s,
            _ => unreachable!(),
        }
    }

    #[test]
    fn chart_always_satisfies_the_constraint() {
        let angles = AngleParametrization {
            theta_b: 0.3,
            phi_b: 1.1,
            theta_b_prime: 2.0,
            phi_b_prime: 4.4,
            theta_a: 0.0, // pole: phi degenerate but vectors well-defined
            phi_a: 5.0,
            psi_a: 2.7,
        };
        for direction in [SteeringDirection::BobToAlice, SteeringDirection::AliceToBob] {
            let config = angles.configuration(direction);
            assert!(config.validate_for(direction).is_ok());
            let (s, sp) = config.steered_pair(direction);
            assert!(s.dot(&sp).abs() < 1e-14);
        }
    }

    #[test]
    fn bell_reaches_quantum_max() {
        let settings = OptimizationSettings::new(1);
        let found = maximize_cffw_numeric(
            &bell_phi_plus(),
            SteeringDirection::BobToAlice,
            &settings,
        );
        assert!(
            (found.value - QUANTUM_MAX).abs() < 1e-6,
            "got {}",
            found.value
        );
    }

    #[test]
    fn maximally_mixed_maximum_is_zero() {
        let settings = OptimizationSettings::new(2);
        let found =
            maximize_cffw_numeric(&maximally_mixed(), SteeringDirection::BobToAlice, &settings);
        assert!(found.value.abs() < 1e-9);
    }

    #[test]
    fn numeric_oracle_matches_closed_form_on_random_states() {
        let settings = OptimizationSettings::new(3);
        for index in 0..12 {
            let state = ginibre(31, index);
            let expected = steering_criterion(&state).max_cffw;
            for direction in [SteeringDirection::BobToAlice, SteeringDirection::AliceToBob] {
                let found = maximize_cffw_numeric(&state, direction, &settings);
                assert!(
                    (found.value - expected).abs() < 1e-4,
                    "sample {index}, {direction}: numeric {} vs closed {expected}",
                    found.value
                );
                assert!(found.value <= QUANTUM_MAX + 1e-9);
            }
        }
    }

    #[test]
    fn more_restarts_never_hurt() {
        let state = ginibre(41, 0);
        let few = OptimizationSettings::new(9).with_restarts(4).unwrap();
        let many = OptimizationSettings::new(9).with_restarts(8).unwrap();
        let v_few =
            maximize_cffw_numeric(&state, SteeringDirection::BobToAlice, &few).value;
        let v_many =
            maximize_cffw_numeric(&state, SteeringDirection::BobToAlice, &many).value;
        assert!(v_many >= v_few);
    }

    #[test]
    fn deterministic_given_seed() {
        let state = ginibre(43, 1);
        let settings = OptimizationSettings::new(77).with_restarts(6).unwrap();
        let a = maximize_cffw_numeric(&state, SteeringDirection::AliceToBob, &settings);
        let b = maximize_cffw_numeric(&state, SteeringDirection::AliceToBob, &settings);
        assert_eq!(a.value, b.value);
        assert_eq!(a.config, b.config);
    }

    #[test]
    fn settings_validation() {
        assert!(OptimizationSettings::new(0).with_restarts(0).is_err());
        assert!(OptimizationSettings::new(0).with_tolerance(0.0).is_err());
        assert!(OptimizationSettings::new(0).with_max_iterations(0).is_err());
    }

    #[test]
    fn grid_is_a_lower_bound_on_the_numeric_maximum() {
        let settings = OptimizationSettings::new(5);
        for index in 0..4 {
            let state = ginibre(53, index);
            for direction in [SteeringDirection::BobToAlice, SteeringDirection::AliceToBob] {
                let grid = grid_refine(&state, direction, 8).unwrap();
                let numeric = maximize_cffw_numeric(&state, direction, &settings).value;
                assert!(grid <= numeric + 1e-9, "grid {grid} vs numeric {numeric}");
            }
        }
    }

    #[test]
    fn grid_on_degenerate_state_is_zero() {
        let value =
            grid_refine(&maximally_mixed(), SteeringDirection::BobToAlice, 8).unwrap();
        assert_eq!(value, 0.0);
    }

    #[test]
    fn grid_rejects_low_resolution() {
        assert!(matches!(
            grid_refine(&maximally_mixed(), SteeringDirection::BobToAlice, 7),
            Err(Error::InvalidParameter { .. })
        ));
    }

    #[test]
    fn grid_bell_resolution_32_lands_near_quantum_max() {
        let value = grid_refine(&bell_phi_plus(), SteeringDirection::BobToAlice, 32).unwrap();
        assert!(value <= QUANTUM_MAX + 1e-12);
        assert!(value >= QUANTUM_MAX - 0.05, "grid value {value} too far below");
    }
}
