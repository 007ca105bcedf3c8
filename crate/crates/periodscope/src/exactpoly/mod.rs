//! Exact rational-coefficient polynomial algebra: arithmetic, Sturm chains,
//! certified real-root counting and isolation, bivariate elimination via
//! subresultants, and system solving on rational rectangles.
//!
//! Everything in this module is exact; a wrong discrete count elsewhere in
//! the library would flip a classification, so no floating point enters here.

pub mod algebraic;
mod bipoly;
mod interval;
mod poly;
mod ratfunc;
pub mod roots;
pub mod system;

pub use algebraic::AlgebraicNumber;
pub use bipoly::{gcd as bipoly_gcd, resultant_x, resultant_z, BiPoly};
pub use interval::{rational_to_f64, RationalInterval};
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use roots::{default_eps, isolate_roots, sturm_count, sturm_count_interval, Endpoint, IsolatedRoot};
pub use system::{isolate_system, IsolationBox, Rect, SystemSolutions};

/// Exact rational scalar used throughout the certified layer:
/// arbitrary-precision, always in lowest terms, positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand constructor for small rationals.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
