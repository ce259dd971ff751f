//! Exact isoperimetric analysis of finite Markov chains.
//!
//! The crate computes, in closed form, the continuized flow profile of a set
//! under a chain, the spread constants derived from it, evolving-set level
//! profiles, discrete gradient norms, and the mixing-time bounds these
//! quantities certify. Everything is deterministic: enumeration over subsets
//! uses exact grouping, integrals are evaluated segment by segment, and
//! parallel runs reproduce sequential results bit for bit.

// Negated float comparisons (`!(a < b)`) are deliberate: NaN must take the
// error branch. Index loops mirror the row/column matrix notation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod chain;
pub mod dist;
mod erf;
pub mod error;
pub mod gradients;
pub mod io;
pub mod isoperimetry;
pub mod piecewise;
pub mod profile;
pub mod set;
pub mod spectral;
pub mod tol;
pub mod verify;
pub mod zoo;

pub use chain::MarkovChain;
pub use dist::Distribution;
pub use error::{Error, Result};
pub use isoperimetry::{FlowMode, SpreadRecord};
pub use set::StateSet;
