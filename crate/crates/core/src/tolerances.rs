//! Numerical tolerances used across the crate, pinned in one place.
//!
//! Validation thresholds (`1e-10` class) sit a few digits above f64
//! rounding so that exactly-constructed states always pass, while
//! genuinely broken inputs fail loudly. Geometry thresholds (`1e-9`
//! class) allow one extra digit because unit vectors and frames are
//! usually produced by normalisation chains.

/// Hermiticity check on density matrices: max entrywise |A - A†|.
pub const HERMITICITY: f64 = 1e-10;

/// Unit-trace check on density matrices: |Tr(rho) - 1|.
pub const UNIT_TRACE: f64 = 1e-10;

/// Positive semidefiniteness: smallest eigenvalue may not drop below
/// the negated tolerance.
pub const PSD_MIN_EIGENVALUE: f64 = 1e-10;

/// Most negative eigenvalue `repair` is willing to clip to zero. Worse
/// violations indicate a broken generator rather than rounding noise
/// and are rejected even when repair was requested.
pub const REPAIR_LIMIT: f64 = 1e-6;

/// Unit-norm check on measurement directions: ||v|| - 1|.
pub const UNIT_NORM: f64 = 1e-9;

/// Orthogonality of the steered party's settings and of frame vectors.
pub const ORTHOGONALITY: f64 = 1e-9;

/// Slack on Bloch-vector norms (||r||, ||s|| <= 1 + slack) and on
/// correlation-matrix entries (|t_ij| <= 1 + slack).
pub const BLOCH_SLACK: f64 = 1e-9;

/// Jacobi eigensolver convergence: sweep until the off-diagonal
/// Frobenius norm falls below this factor times (1 + ||M||_F).
pub const JACOBI_OFF_DIAGONAL: f64 = 1e-13;

/// Slack admitted above the quantum maximum 2*sqrt(2) of the
/// inequality value and above the monogamy bound 8.
pub const BOUND_SLACK: f64 = 1e-9;

/// |8 - lhs| below which a tripartite state counts as saturating the
/// monogamy bound.
pub const SATURATION: f64 = 1e-9;

/// Image norm below which the optimal-measurement construction treats
/// a direction as fully degenerate and falls back to a canonical or
/// arbitrary orthogonal choice. Entries of T are bounded by one, so
/// anything this small contributes nothing at reporting precision.
pub const DEGENERATE_IMAGE: f64 = 1e-15;

/// Werner threshold bisection: half-width of the final bracket.
pub const WERNER_BISECTION: f64 = 1e-9;
