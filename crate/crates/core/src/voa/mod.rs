//! Vertex operator algebras and their state spaces.

pub mod algebra;
pub mod basis;
pub mod character;
pub mod fock;
pub mod modes;
pub mod vector;
pub mod virasoro;

pub use algebra::{Voa, VoaKind};
pub use basis::{LevelBasis, Partition};
pub use character::CharacterTable;
pub use modes::{ModeEngine, StateSpace};
pub use vector::GradedVector;
