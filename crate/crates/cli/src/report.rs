//! Report assembly and serialisation for the CLI commands.

use serde::Serialize;

use steerscope_core::digest::bytes_digest;
use steerscope_core::matcore::Vector3;
use steerscope_core::monogamy::{monogamy_check, MonogamyReport};
use steerscope_core::optimizer::{maximize_from_bloch, OptimizationSettings};
use steerscope_core::states::{
    parse_state_json, sample_state, state_to_json, validate_with_repair, EnsembleSpec,
    QuantumState, ThreeQubitState, TwoQubitState,
};
use steerscope_core::steering::{
    cffw_value_from_bloch, horodecki_m, optimal_measurements_from_bloch, steering_criterion,
    SteeringCriterionResult, SteeringDirection,
};

use crate::Failure;

/// 17 significant digits: enough to reproduce any f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn classify_state(text: &str, expected_qubits: usize, repair: bool) -> Result<QuantumState, Failure> {
    let (n_qubits, matrix) =
        parse_state_json(text).map_err(|e| Failure::io_or_parse(e.to_string()))?;
    if n_qubits != expected_qubits {
        return Err(Failure::invalid_state(format!(
            "expected a {expected_qubits}-qubit state, got {n_qubits} qubits"
        )));
    }
    validate_with_repair(matrix, repair).map_err(|e| Failure::invalid_state(e.to_string()))
}

pub fn parse_two_qubit(text: &str, repair: bool) -> Result<TwoQubitState, Failure> {
    match classify_state(text, 2, repair)? {
        QuantumState::Two(s) => Ok(s),
        QuantumState::Three(_) => unreachable!("arity checked"),
    }
}

pub fn parse_three_qubit(text: &str, repair: bool) -> Result<ThreeQubitState, Failure> {
    match classify_state(text, 3, repair)? {
        QuantumState::Three(s) => Ok(s),
        QuantumState::Two(_) => unreachable!("arity checked"),
    }
}

fn triple(v: &Vector3) -> [f64; 3] {
    v.0
}

#[derive(Serialize)]
struct BlochReport {
    r: [f64; 3],
    s: [f64; 3],
    t: [[f64; 3]; 3],
}

#[derive(Serialize)]
struct ConfigReport {
    a_hat: [f64; 3],
    a_prime_hat: [f64; 3],
    b_hat: [f64; 3],
    b_prime_hat: [f64; 3],
    theta: f64,
    c_hat: [f64; 3],
    c_prime_hat: [f64; 3],
}

#[derive(Serialize)]
struct DirectionReport {
    analytic_max: f64,
    numeric_max: f64,
    oracle_gap: f64,
    numeric_converged: bool,
}

#[derive(Serialize)]
struct Directions {
    btoa: DirectionReport,
    atob: DirectionReport,
}

#[derive(Serialize)]
struct OptimalSection {
    direction: String,
    config: ConfigReport,
}

#[derive(Serialize)]
struct AnalysisReport {
    input_digest: String,
    seed: u64,
    bloch: BlochReport,
    steering: SteeringCriterionResult,
    horodecki_m: f64,
    optimal: OptimalSection,
    directions: Directions,
}

pub struct Analysis {
    pub json: String,
    pub violates: bool,
}

/// Build the full analysis: Bloch data, closed-form criterion, the
/// analytic optimal settings for the featured direction, and the
/// numeric cross-check in both directions.
pub fn analyze(
    text: &str,
    featured: SteeringDirection,
    seed: u64,
    tolerance: f64,
    repair: bool,
) -> Result<Analysis, Failure> {
    let state = parse_two_qubit(text, repair)?;
    let decomposition = state.decompose();
    let criterion = steering_criterion(&state);
    let settings = OptimizationSettings::new(seed)
        .with_tolerance(tolerance)
        .map_err(|e| Failure::io_or_parse(e.to_string()))?;

    let direction_report = |direction: SteeringDirection| -> DirectionReport {
        let (config, _) = optimal_measurements_from_bloch(&decomposition, direction);
        let analytic = cffw_value_from_bloch(&decomposition, &config, direction)
            .expect("optimal config is valid for its direction");
        let numeric = maximize_from_bloch(&decomposition, direction, &settings);
        DirectionReport {
            analytic_max: analytic,
            numeric_max: numeric.value,
            oracle_gap: (numeric.value - analytic).abs(),
            numeric_converged: numeric.converged,
        }
    };

    let (config, frame) = optimal_measurements_from_bloch(&decomposition, featured);
    let report = AnalysisReport {
        input_digest: bytes_digest(text.as_bytes()),
        seed,
        bloch: BlochReport {
            r: triple(&decomposition.alice_bloch()),
            s: triple(&decomposition.bob_bloch()),
            t: decomposition.correlation().0,
        },
        steering: criterion,
        horodecki_m: horodecki_m(&state),
        optimal: OptimalSection {
            direction: featured.label().to_string(),
            config: ConfigReport {
                a_hat: triple(&config.a_hat()),
                a_prime_hat: triple(&config.a_prime_hat()),
                b_hat: triple(&config.b_hat()),
                b_prime_hat: triple(&config.b_prime_hat()),
                theta: frame.theta(),
                c_hat: triple(&frame.c_hat()),
                c_prime_hat: triple(&frame.c_prime_hat()),
            },
        },
        directions: Directions {
            btoa: direction_report(SteeringDirection::BobToAlice),
            atob: direction_report(SteeringDirection::AliceToBob),
        },
    };
    Ok(Analysis {
        json: serde_json::to_string_pretty(&report).expect("report serialises"),
        violates: criterion.violates,
    })
}

#[derive(Serialize)]
struct MonogamyFileReport<'a> {
    input_digest: String,
    #[serde(flatten)]
    report: &'a MonogamyReport,
}

pub fn monogamy_json(text: &str, report: &MonogamyReport) -> String {
    serde_json::to_string_pretty(&MonogamyFileReport {
        input_digest: bytes_digest(text.as_bytes()),
        report,
    })
    .expect("report serialises")
}

/// One state JSON document per line, in index order.
pub fn sample_json_lines(spec: &EnsembleSpec) -> String {
    let mut out = String::new();
    for index in 0..spec.count {
        let state = sample_state(spec, index);
        out.push_str(&state_to_json(state.n_qubits(), state.matrix()));
        out.push('\n');
    }
    out
}

/// Analysis CSV. Two-qubit kinds: `index,S,M,violates`. Three-qubit
/// kinds: `index,s_ba_max,s_ca_max,lhs,slack`. Reals carry 17
/// significant digits so rows parse back losslessly.
pub fn sample_csv(spec: &EnsembleSpec) -> String {
    let mut out = String::new();
    if spec.kind.n_qubits() == 2 {
        out.push_str("index,S,M,violates\n");
        for index in 0..spec.count {
            let state = match sample_state(spec, index) {
                QuantumState::Two(s) => s,
                QuantumState::Three(_) => unreachable!("two-qubit kind"),
            };
            let criterion = steering_criterion(&state);
            let m = horodecki_m(&state);
            out.push_str(&format!(
                "{},{},{},{}\n",
                index,
                fmt_f64(criterion.s_rho),
                fmt_f64(m),
                criterion.violates
            ));
        }
    } else {
        out.push_str("index,s_ba_max,s_ca_max,lhs,slack\n");
        for index in 0..spec.count {
            let state = match sample_state(spec, index) {
                QuantumState::Three(s) => s,
                QuantumState::Two(_) => unreachable!("three-qubit kind"),
            };
            let report = monogamy_check(&state);
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                index,
                fmt_f64(report.s_ba_max),
                fmt_f64(report.s_ca_max),
                fmt_f64(report.lhs),
                fmt_f64(report.slack)
            ));
        }
    }
    out
}
