//! Numeric tolerances used throughout the crate.
//!
//! Three tiers, ordered `MASS < RECORD < SLACK`:
//!
//! * [`MASS`] guards linear-algebra identities that hold to rounding error
//!   (row sums, stationarity, detailed balance, flow symmetry).
//! * [`RECORD`] guards internal identities between independently computed
//!   quantities inside one record (e.g. a global spread recomputed as the
//!   sum of its two halves).
//! * [`SLACK`] is the slack granted to theorem inequalities: `lhs >= rhs`
//!   is accepted as `lhs >= rhs - SLACK`.

/// Tolerance for exact linear-algebra identities.
pub const MASS: f64 = 1e-12;

/// Tolerance for identities between independently computed record fields.
pub const RECORD: f64 = 1e-10;

/// Additive slack for theorem inequalities.
pub const SLACK: f64 = 1e-9;

/// A chain is lazy when every holding probability is at least `1/2 - MASS`.
pub const LAZY_MIN: f64 = 0.5 - MASS;
