//! Steerability analysis for two-qubit states with two measurement
//! settings per party.
//!
//! The crate decides steerability in closed form — S(rho) is built
//! from the two greatest eigenvalues of T T^t, where T is the Pauli
//! correlation matrix — constructs measurement settings attaining the
//! maximum 2 sqrt(v + v~), cross-checks the construction against an
//! independent derivative-free maximizer, and validates the monogamy
//! bound S_BA^2 + S_CA^2 <= 8 over tripartite ensembles.

pub mod digest;
pub mod error;
pub mod matcore;
pub mod monogamy;
pub mod optimizer;
pub mod states;
pub mod steering;
pub mod tolerances;

pub use error::{Error, Result};
