//! Exact-arithmetic engine for belief revision over finite outcome spaces.
//!
//! The crate provides:
//!
//! - [`hyperreal`]: an ordered field extending the rationals with one positive
//!   infinitesimal, with exact comparison, valuation and standard part;
//! - [`algebra`]: finite outcome spaces of named variables and events over
//!   their atoms;
//! - [`measures`]: hyperreal-valued probability measures, lexicographic
//!   probability systems, conditional probability functions, and the
//!   conversions between them and revision operators;
//! - [`revision`]: revision operators in propositional-model form, postulate
//!   checking, plausibility orders with radical upgrade, iterated-revision
//!   analysis, and brute-force enumeration oracles;
//! - [`scenario`]: the two-coin report scenario with its three likelihood
//!   regimes, staged conditioning, and symbolic odds tables.

pub mod algebra;
pub mod fixtures;
pub mod hyperreal;
pub mod measures;
pub mod rational;
pub mod revision;
pub mod scenario;

pub use algebra::{Event, OutcomeSpace};
pub use hyperreal::{EpsPoly, Hyperreal, HyperrealError};
pub use rational::Rational;
