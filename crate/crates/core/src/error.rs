use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid lattice spec: {0}")]
    InvalidLattice(String),

    #[error("site ({row}, {col}) does not exist")]
    NoSuchSite { row: usize, col: usize },

    #[error("removed sites are not mirror symmetric about the vertical axis; parity is undefined")]
    ParityUndefined,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("operator is singular")]
    Singular,

    #[error("eigensolver failed to converge")]
    EigenFailure,

    #[error(
        "eigenvalues of H and H^T could not be matched (distance {distance:e} > {tolerance:e})"
    )]
    AmbiguousMatch { distance: f64, tolerance: f64 },

    #[error("mode {0} is flagged as near an exceptional point")]
    ExceptionalPoint(usize),

    #[error("mode index {index} out of range for {len} modes")]
    NoSuchMode { index: usize, len: usize },

    #[error("no partner with eigenvalue -w found for mode {0}")]
    NoPartner(usize),

    #[error("operator does not map mode {mode} onto a left eigenstate (residual {residual:e})")]
    NotPseudoChiral { mode: usize, residual: f64 },

    #[error("invalid spectral window: {0}")]
    InvalidWindow(String),

    #[error("decomposition carries no site map")]
    MissingSiteMap,

    #[error("initial state populates modes near an exceptional point; eigenbasis propagation is unavailable")]
    EpPopulated,

    #[error("time grid must be non-empty and strictly increasing")]
    InvalidTimeGrid,

    #[error("rk4 step too large: |H| dt = {0:.3} exceeds the stability bound")]
    UnstableStep(f64),
}
