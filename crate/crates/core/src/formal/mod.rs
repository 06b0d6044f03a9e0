//! Binomials, Laurent polynomials and the formal-variable identities.

pub mod binom;
pub mod identities;
pub mod laurent;

pub use binom::{binom, binom_int, BinomialTable};
pub use identities::{
    identity_grid, verify_reciprocal_power, verify_two_variable_cancellation, verify_unit_sum,
    verify_vandermonde_vanishing, FamilyReport, IdentityBounds, IdentityCheck, IdentityGridReport,
};
pub use laurent::{expand_binomial_power, LaurentPoly};
