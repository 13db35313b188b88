use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("unsupported dimension {0} (expected 1..={max})", max = crate::smallmat::MAX_DIM)]
    InvalidDimension(usize),
    #[error("level {level} out of range for dimension {dim}")]
    LevelOutOfRange { level: usize, dim: usize },
    #[error("eigenbasis is not orthonormal (residual {residual:e})")]
    NotOrthonormal { residual: f64 },
    #[error("eigensolver unavailable for dimension {0}; supply a basis")]
    NoSolver(usize),
    #[error("grid index {index} has no full stencil on a path of {len} frames")]
    BoundaryIndex { index: usize, len: usize },
    #[error("eigenvector phase continuity lost between samples {index} and {}", index + 1)]
    PhaseAlignment { index: usize },
    #[error("time grid must be strictly increasing and uniform")]
    InvalidGrid,
    #[error("pair ({0}, {0}) is diagonal; nullification pairs need n != m")]
    DiagonalPair(usize),
    #[error("invalid schedule: {0}")]
    InvalidSchedule(&'static str),
    #[error("invalid adding-Hamiltonian parameters: {0}")]
    InvalidParams(&'static str),
    #[error("both transition directions cannot be nullified with gamma = {gamma} at t = {t}")]
    BothDirectionsWithLoss { t: f64, gamma: f64 },
    #[error("requires a Hermitian adding Hamiltonian (gamma = 0)")]
    NotHermitian,
    #[error("parameters do not solve the nullification constraints")]
    NotAShortcut,
    #[error("integration step {step} outside (0, {max}]")]
    InvalidStep { step: f64, max: f64 },
    #[error("non-finite value encountered at t = {t}")]
    NonFinite { t: f64 },
    #[error("initial state must be nonzero")]
    ZeroState,
    #[error("grid must be symmetric about t = 0 and the window must satisfy tau = -tf")]
    AsymmetricGrid,
    #[error("relative populations undefined: P1 + P2 = {0:e}")]
    UndefinedRelativePopulation(f64),
}
