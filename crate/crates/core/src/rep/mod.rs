//! Modules, level-changing operators and induced modules.

pub mod checks;
pub mod module;
pub mod structure;
pub mod verma;

pub use checks::{
    annihilation_check, check_level_product, level_product_grid, omega_subspace, GridReport, OmegaSubspace,
};
pub use module::{LevelMap, ModuleKind, TestModule};
pub use structure::{hom_terms, level_algebra_dim, structure_check, HomTerm, StructureReport};
pub use verma::{GeneratorAction, InputModule, UniversalMap, VermaConfig, VermaLevel, VermaModule};
