use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size must be even and at least 8, got {0}")]
    InvalidGrid(usize),
    #[error("expected {expected} samples, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("field lives on an n={found} grid, expected n={expected}")]
    GridMismatch { expected: usize, found: usize },
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("non-finite state at t = {t}")]
    BlowUp { t: f64 },
    #[error("decay fit: {0}")]
    Fit(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
