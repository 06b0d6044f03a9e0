//! Products, relation spaces and the bimodules `A_{n,m}(V)`.

pub mod checks;
pub mod exact;
pub mod ospace;
pub mod products;
pub mod quotient;

pub use checks::{CheckReport, Headroom, SampleShape};
pub use exact::shift_identity_grid;
pub use ospace::{OGenerator, OKind, OSpaceSpec, OSpan, SpanCache};
pub use products::{circle, star_bar, star_general, star_right, ProductParams};
pub use quotient::{quotient_dim, QuotientReport};
