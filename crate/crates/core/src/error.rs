use thiserror::Error;

use crate::linalg::QVector;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("gram matrix is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("columns are linearly dependent")]
    DependentColumns,

    #[error("matrix has non-integer entries")]
    NonInteger,

    #[error("rank {rank} exceeds the supported maximum {max}")]
    RankTooLarge { rank: usize, max: usize },

    #[error("lattice of rank {rank} is not full in dimension {dim}")]
    NotFullRank { rank: usize, dim: usize },

    #[error("sublattice generator {witness} is not in the lattice")]
    NotSublattice { witness: QVector },

    #[error("invalid subspace decomposition: {0}")]
    InvalidSubspaces(String),

    #[error("{0} is not a root of the root system")]
    NotARoot(QVector),

    #[error("Weyl group closure exceeded {cap} elements")]
    WeylCapExceeded { cap: usize },

    #[error("no sign normalization exists: {0}")]
    NoSignAssignment(String),

    #[error("twice the root {root} is not of the form ±e_j, ±2e_j, ±e_j±e_k in the dual basis")]
    ShapeViolation { root: QVector },

    #[error("root set matches none of the families A, B, C, D, BC")]
    PatternMismatch,

    #[error("invalid datum type: {0}")]
    InvalidType(String),

    #[error("invalid Euclidean root datum: {0}")]
    InvalidDatum(String),

    #[error("lattice has no orthogonal basis (not rectangular)")]
    NotRectangular,

    #[error("orthogonal basis vectors do not have a common length (not cubic)")]
    NotCubic,

    #[error("datum is decomposable into factors of dimensions {factor_dims:?}")]
    Decomposable { factor_dims: Vec<usize> },

    #[error("inconsistent multiplicities: {0}")]
    InconsistentMultiplicities(String),

    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}
