//! p-adic height pairings attached to 1-motives.
//!
//! The crate is organized around the objects it computes with:
//! - [`padic`]: exact fixed-precision arithmetic in Q_p and log branches
//! - [`series`]: truncated power series over Q_p
//! - [`groups`]: the commutative groups appearing as fibers and bases, their
//!   logarithm extensions, and Lie-level splitting lifts
//! - [`biext`]: biextensions of abelian groups, linearizations,
//!   trivializations, quotients, and rho-splitting checks
//! - [`torus`]: fully explicit pairings for toric 1-motives
//! - [`elliptic`]: curves over Q_p with good reduction, formal groups,
//!   sigma-series, a divisor-based Poincaré biextension, and its splittings
//! - [`motive`]: general 1-motives with elliptic and toric parts
//! - [`curve`]: the local pairing between zero-cycles and divisors on curves
//! - [`global`]: the global pairing over Q via a sum over places

pub mod biext;
pub mod curve;
pub mod elliptic;
pub mod error;
pub mod global;
pub mod groups;
pub mod motive;
pub mod padic;
pub mod sample;
pub mod series;
pub mod torus;

pub use error::{Error, Result};
pub use padic::{LogBranch, PadicNumber};
pub use series::PadicSeries;
