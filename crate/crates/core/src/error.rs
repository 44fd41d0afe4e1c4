use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid group: {0}")]
    Invalid(String),
    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    Jacobi(usize, usize, usize),
    #[error("bracket is not antisymmetric on basis pair ({0}, {1})")]
    Antisymmetry(usize, usize),
    #[error("algebra is not nilpotent")]
    NotNilpotent,
    #[error("nilpotency class {0} exceeds the supported maximum of {1}")]
    ClassCap(usize, usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("subgroups do not normalize each other: {0}")]
    NotNormalizing(String),
    #[error("subgroup is not normal: {0}")]
    NotNormal(String),
    #[error("element is not in the commutator subgroup")]
    NotInCommutator,
    #[error("unsupported in this model: {0}")]
    Unsupported(String),
    #[error("series does not terminate")]
    NonTerminating,
}

pub type Result<T> = std::result::Result<T, Error>;
