//! periodscope: analysis of the period function of planar potential centers
//! `x' = -y`, `y' = g(x)`.
//!
//! The library computes the period annulus and the involution pairing equal
//! potential-energy levels, evaluates the period function and its first two
//! derivatives by singularity-aware quadrature, and — for polynomial
//! potentials — certifies upper bounds and exact counts of critical periods
//! by exact real-root counting of a bivariate semi-algebraic system. A small
//! half-order fractional-integral toolkit backs the property tests.

pub mod criteria;
pub mod error;
pub mod exactpoly;
pub mod involution;
pub(crate) mod numeric;
pub mod potential;
pub mod quadrature;
pub mod registry;
pub mod verification;

pub use error::{Error, Result};
pub use exactpoly::{rat, Poly, Rational};
pub use potential::{Potential, PeriodAnnulus};
