use thiserror::Error;

/// Every failure surfaced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(
        "weight {needed} is outside the built range (max weight {max}); rebuild with a max weight of at least {needed}"
    )]
    WeightRange { needed: usize, max: usize },
    #[error("level {needed} is outside the built module range (max level {max})")]
    LevelRange { needed: usize, max: usize },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported central charge {0}")]
    UnsupportedCentralCharge(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("generator `{generator}` is not available in {algebra}")]
    UnknownGenerator { generator: String, algebra: String },
    #[error(
        "the input module factors through the level {0} algebra, which can not be used to induce a level {1} module"
    )]
    FactorsThrough(usize, usize),
    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("invalid module data: {0}")]
    InvalidModule(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
