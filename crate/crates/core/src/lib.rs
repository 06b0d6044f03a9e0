//! Exact computation of the bimodules `A_{n,m}(V)` of a vertex operator
//! algebra `V`, together with the product calculus, the level maps on
//! modules, and induced modules.
//!
//! The engine is generic over the coefficient field ([`Scalar`]); the aliases
//! below pin the exact rational field used by every verification.

#![allow(clippy::too_many_arguments, clippy::type_complexity)]

pub mod bimodule;
pub mod error;
pub mod expr;
pub mod formal;
pub mod linalg;
pub mod rep;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod voa;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact rationals with arbitrary-precision numerator and denominator.
pub type Rational = num_rational::BigRational;
/// Vectors over [`Rational`].
pub type Vector = voa::GradedVector<Rational>;
/// A VOA over [`Rational`].
pub type RationalVoa = voa::Voa<Rational>;
