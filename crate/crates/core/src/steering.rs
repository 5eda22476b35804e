//! The two-setting steering functional, the closed-form steerability
//! criterion S(rho) = sqrt(v + v~) built from the two greatest
//! eigenvalues of V = T T^t, and the analytic construction of the
//! measurement settings that attain 2 sqrt(v + v~).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{sym3_eigensystem, RealMatrix3, Vector3};
use crate::states::{werner, BlochDecomposition, TwoQubitState};
use crate::tolerances;

/// Quantum maximum of the inequality value.
pub const QUANTUM_MAX: f64 = 2.0 * std::f64::consts::SQRT_2;

/// Which party steers which. The steered party's two settings must be
/// mutually unbiased (orthogonal Bloch directions).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SteeringDirection {
    /// Bob steers Alice: the constraint applies to Alice's settings.
    BobToAlice,
    /// Alice steers Bob: the constraint applies to Bob's settings.
    AliceToBob,
}

impl SteeringDirection {
    pub fn label(&self) -> &'static str {
        match self {
            SteeringDirection::BobToAlice => "btoa",
            SteeringDirection::AliceToBob => "atob",
        }
    }
}

impl fmt::Display for SteeringDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SteeringDirection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "btoa" => Ok(SteeringDirection::BobToAlice),
            "atob" => Ok(SteeringDirection::AliceToBob),
            _ => Err(Error::InvalidParameter {
                name: "direction",
                value: f64::NAN,
                expected: "btoa or atob",
            }),
        }
    }
}

/// Four Bloch measurement directions: (a, a') for Alice and (b, b')
/// for Bob. All four are unit vectors; whether the (a, a') or the
/// (b, b') pair must additionally be orthogonal depends on the
/// steering direction and is checked by [`cffw_value`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementConfiguration {
    a_hat: Vector3,
    a_prime_hat: Vector3,
    b_hat: Vector3,
    b_prime_hat: Vector3,
}

impl MeasurementConfiguration {
    pub fn new(
        a_hat: Vector3,
        a_prime_hat: Vector3,
        b_hat: Vector3,
        b_prime_hat: Vector3,
    ) -> Result<Self> {
        for (which, v) in [
            ("a_hat", &a_hat),
            ("a_prime_hat", &a_prime_hat),
            ("b_hat", &b_hat),
            ("b_prime_hat", &b_prime_hat),
        ] {
            let deviation = (v.norm() - 1.0).abs();
            if !deviation.is_finite() || deviation > tolerances::UNIT_NORM {
                return Err(Error::NotUnitVector { which, deviation });
            }
        }
        Ok(Self {
            a_hat,
            a_prime_hat,
            b_hat,
            b_prime_hat,
        })
    }

    pub fn a_hat(&self) -> Vector3 {
        self.a_hat
    }

    pub fn a_prime_hat(&self) -> Vector3 {
        self.a_prime_hat
    }

    pub fn b_hat(&self) -> Vector3 {
        self.b_hat
    }

    pub fn b_prime_hat(&self) -> Vector3 {
        self.b_prime_hat
    }

    /// The steered party's settings for the given direction.
    pub fn steered_pair(&self, direction: SteeringDirection) -> (Vector3, Vector3) {
        match direction {
            SteeringDirection::BobToAlice => (self.a_hat, self.a_prime_hat),
            SteeringDirection::AliceToBob => (self.b_hat, self.b_prime_hat),
        }
    }

    /// Check the mutual-unbiasedness constraint on the steered
    /// party's pair.
    pub fn validate_for(&self, direction: SteeringDirection) -> Result<()> {
        let (u, v) = self.steered_pair(direction);
        let dot = u.dot(&v).abs();
        if dot > tolerances::ORTHOGONALITY {
            return Err(Error::SettingsNotOrthogonal {
                direction: direction.label(),
                dot,
            });
        }
        Ok(())
    }
}

/// Frame behind the steering party's settings: two orthonormal
/// vectors c, c' and an angle theta in [0, pi/2] reproducing the pair
/// as cos(theta) c +- sin(theta) c', so that their sum is
/// 2 cos(theta) c and their difference 2 sin(theta) c'.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CffwFrame {
    c_hat: Vector3,
    c_prime_hat: Vector3,
    theta: f64,
}

impl CffwFrame {
    pub fn new(c_hat: Vector3, c_prime_hat: Vector3, theta: f64) -> Result<Self> {
        for (which, v) in [("c_hat", &c_hat), ("c_prime_hat", &c_prime_hat)] {
            let deviation = (v.norm() - 1.0).abs();
            if !deviation.is_finite() || deviation > tolerances::UNIT_NORM {
                return Err(Error::NotUnitVector { which, deviation });
            }
        }
        let dot = c_hat.dot(&c_prime_hat).abs();
        if dot > tolerances::ORTHOGONALITY {
            return Err(Error::FrameNotOrthogonal { dot });
        }
        if !(0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&theta) {
            return Err(Error::InvalidParameter {
                name: "theta",
                value: theta,
                expected: "0 <= theta <= pi/2",
            });
        }
        Ok(Self {
            c_hat,
            c_prime_hat,
            theta,
        })
    }

    pub fn c_hat(&self) -> Vector3 {
        self.c_hat
    }

    pub fn c_prime_hat(&self) -> Vector3 {
        self.c_prime_hat
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// The steering party's two settings encoded by the frame.
    pub fn settings(&self) -> (Vector3, Vector3) {
        let cos = self.theta.cos();
        let sin = self.theta.sin();
        let first = self.c_hat.scale(cos) + self.c_prime_hat.scale(sin);
        let second = self.c_hat.scale(cos) - self.c_prime_hat.scale(sin);
        (first, second)
    }
}

/// Output of the closed-form criterion: the two greatest eigenvalues
/// of V = T T^t, S(rho) and the attainable maximum of the inequality
/// value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteeringCriterionResult {
    pub v: f64,
    pub v_tilde: f64,
    pub s_rho: f64,
    pub max_cffw: f64,
    pub violates: bool,
}

/// Joint Pauli expectation <u.sigma kron w.sigma> = u^t T w, with u on
/// Alice's side and w on Bob's. Inputs must be unit vectors.
pub fn correlation_expectation(d: &BlochDecomposition, u_hat: &Vector3, w_hat: &Vector3) -> f64 {
    debug_assert!((u_hat.norm() - 1.0).abs() <= tolerances::UNIT_NORM);
    debug_assert!((w_hat.norm() - 1.0).abs() <= tolerances::UNIT_NORM);
    u_hat.dot(&d.correlation().matvec(w_hat))
}

/// Inequality value for a decomposition already in hand. Computed by
/// linearity of the correlation in each slot:
/// sqrt(<(B+B')A>^2 + <(B+B')A'>^2) + sqrt(<(B-B')A>^2 + <(B-B')A'>^2)
/// for Bob-to-Alice, with the party roles swapped for Alice-to-Bob.
pub fn cffw_value_from_bloch(
    d: &BlochDecomposition,
    config: &MeasurementConfiguration,
    direction: SteeringDirection,
) -> Result<f64> {
    config.validate_for(direction)?;
    let t = d.correlation();
    let root_sum_sq = |x: f64, y: f64| (x * x + y * y).sqrt();
    let value = match direction {
        SteeringDirection::BobToAlice => {
            let sum = t.matvec(&(config.b_hat + config.b_prime_hat));
            let diff = t.matvec(&(config.b_hat - config.b_prime_hat));
            root_sum_sq(config.a_hat.dot(&sum), config.a_prime_hat.dot(&sum))
                + root_sum_sq(config.a_hat.dot(&diff), config.a_prime_hat.dot(&diff))
        }
        SteeringDirection::AliceToBob => {
            let sum = t.transpose_matvec(&(config.a_hat + config.a_prime_hat));
            let diff = t.transpose_matvec(&(config.a_hat - config.a_prime_hat));
            root_sum_sq(config.b_hat.dot(&sum), config.b_prime_hat.dot(&sum))
                + root_sum_sq(config.b_hat.dot(&diff), config.b_prime_hat.dot(&diff))
        }
    };
    Ok(value)
}

/// Inequality value of a state under a measurement configuration.
pub fn cffw_value(
    state: &TwoQubitState,
    config: &MeasurementConfiguration,
    direction: SteeringDirection,
) -> Result<f64> {
    cffw_value_from_bloch(&state.decompose(), config, direction)
}

fn criterion_from_correlation(t: &RealMatrix3) -> SteeringCriterionResult {
    let eig = sym3_eigensystem(&t.times_transpose(), tolerances::HERMITICITY)
        .expect("T T^t is symmetric by construction");
    // The spectrum of T T^t lies in [0, 1] for physical states; strip
    // rounding spill so downstream invariants hold exactly.
    let clamp = |x: f64| x.clamp(0.0, 1.0);
    let v = clamp(eig.values[0]);
    let v_tilde = clamp(eig.values[1]);
    let s_rho = (v + v_tilde).sqrt();
    SteeringCriterionResult {
        v,
        v_tilde,
        s_rho,
        max_cffw: 2.0 * s_rho,
        violates: s_rho > 1.0,
    }
}

/// Closed-form steerability criterion: v and v~ are the two greatest
/// eigenvalues of V = T T^t; the state violates the inequality for
/// some settings iff S(rho) = sqrt(v + v~) > 1.
pub fn steering_criterion(state: &TwoQubitState) -> SteeringCriterionResult {
    criterion_from_correlation(state.decompose().correlation())
}

/// The CHSH criterion value M(rho) = v + v~ = S(rho)^2; the state
/// violates a CHSH inequality iff M > 1.
pub fn horodecki_m(state: &TwoQubitState) -> f64 {
    let r = steering_criterion(state);
    r.v + r.v_tilde
}

/// Optimal settings from a decomposition. See [`optimal_measurements`].
pub fn optimal_measurements_from_bloch(
    d: &BlochDecomposition,
    direction: SteeringDirection,
) -> (MeasurementConfiguration, CffwFrame) {
    let t = d.correlation();

    // Fully degenerate correlation: any configuration attains the
    // maximum 0; return a canonical one.
    if t.is_exactly_zero() {
        let frame = CffwFrame::new(Vector3::Z, Vector3::X, 0.0).expect("canonical frame");
        let config = match direction {
            SteeringDirection::BobToAlice => {
                MeasurementConfiguration::new(Vector3::X, Vector3::Z, Vector3::Z, Vector3::Z)
            }
            SteeringDirection::AliceToBob => {
                MeasurementConfiguration::new(Vector3::Z, Vector3::Z, Vector3::X, Vector3::Z)
            }
        }
        .expect("canonical configuration");
        return (config, frame);
    }

    // The frame lives on the steering party's side; its image under
    // the correlation map lands on the steered party's side. For Bob
    // to Alice the frame vector c is a Bob direction and the steered
    // image is T c (so c must be a top eigenvector of T^t T); for
    // Alice to Bob everything transposes.
    let (gram, image): (RealMatrix3, Box<dyn Fn(&Vector3) -> Vector3>) = match direction {
        SteeringDirection::BobToAlice => (t.transpose_times(), Box::new(|c| t.matvec(c))),
        SteeringDirection::AliceToBob => (t.times_transpose(), Box::new(|c| t.transpose_matvec(c))),
    };
    let eig = sym3_eigensystem(&gram, tolerances::HERMITICITY).expect("gram matrix is symmetric");
    let c_hat = eig.vectors[0];
    let c_prime_hat = eig.vectors[1];

    let steered_image = image(&c_hat);
    let steered_norm = steered_image.norm();
    let prime_image = image(&c_prime_hat);
    let prime_norm = prime_image.norm();

    // T != 0 guarantees the leading image is nonzero; the subleading
    // one may vanish (rank-one T), in which case theta = 0 and the
    // second setting is an arbitrary orthogonal direction that cannot
    // contribute to the value.
    let steered = if steered_norm > tolerances::DEGENERATE_IMAGE {
        steered_image.scale(1.0 / steered_norm)
    } else {
        Vector3::Z
    };
    let (theta, steered_prime) = if prime_norm > tolerances::DEGENERATE_IMAGE {
        (
            prime_norm.atan2(steered_norm),
            prime_image.scale(1.0 / prime_norm),
        )
    } else {
        (0.0, steered.unit_perpendicular())
    };

    let frame = CffwFrame::new(c_hat, c_prime_hat, theta)
        .expect("eigenvectors of a symmetric matrix are orthonormal");
    let (free, free_prime) = frame.settings();
    let config = match direction {
        SteeringDirection::BobToAlice => {
            MeasurementConfiguration::new(steered, steered_prime, free, free_prime)
        }
        SteeringDirection::AliceToBob => {
            MeasurementConfiguration::new(free, free_prime, steered, steered_prime)
        }
    }
    .expect("constructed settings are unit vectors");
    (config, frame)
}

/// Measurement settings attaining the closed-form maximum
/// 2 sqrt(v + v~): the frame vectors are top eigenvectors of the Gram
/// matrix of the correlation map for the chosen direction, theta =
/// atan2 of the image norms, and the steered party measures along the
/// normalised images (orthogonal because the frame vectors are
/// eigenvectors).
pub fn optimal_measurements(
    state: &TwoQubitState,
    direction: SteeringDirection,
) -> (MeasurementConfiguration, CffwFrame) {
    optimal_measurements_from_bloch(&state.decompose(), direction)
}

/// Executable witness of direction independence: the attained maxima
/// for both steering directions always coincide.
pub fn is_two_way_symmetric(state: &TwoQubitState) -> bool {
    let d = state.decompose();
    let value = |direction| {
        let (config, _) = optimal_measurements_from_bloch(&d, direction);
        cffw_value_from_bloch(&d, &config, direction).expect("optimal config is valid")
    };
    let gap = (value(SteeringDirection::BobToAlice) - value(SteeringDirection::AliceToBob)).abs();
    gap <= tolerances::BOUND_SLACK
}

/// Threshold criterion for the Werner-family bisection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdCriterion {
    /// S(rho) > 1.
    Steering,
    /// Horodecki M(rho) > 1.
    Chsh,
}

/// Bisection for the mixing weight where the Werner family starts to
/// violate the chosen criterion. The bracket is always valid:
/// S(werner(0)) = 0 < 1 < S(werner(1)) = sqrt(2).
pub fn werner_threshold(criterion: ThresholdCriterion) -> f64 {
    let excess = |p: f64| -> f64 {
        let state = werner(p).expect("bisection stays inside [0, 1]");
        match criterion {
            ThresholdCriterion::Steering => steering_criterion(&state).s_rho - 1.0,
            ThresholdCriterion::Chsh => horodecki_m(&state) - 1.0,
        }
    };
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    debug_assert!(excess(lo) < 0.0 && excess(hi) > 0.0);
    while hi - lo > tolerances::WERNER_BISECTION {
        let mid = 0.5 * (lo + hi);
        if excess(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
