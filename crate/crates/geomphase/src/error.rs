//! Error types shared across the crate.

use thiserror::Error;

/// Everything that can go wrong when assembling frames, grids, and phases.
#[derive(Debug, Error)]
pub enum GeomPhaseError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("degenerate parameters: {0}")]
    DegenerateParameter(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("time-grid error: {0}")]
    Grid(String),

    #[error("hermiticity violation: {0}")]
    Hermiticity(String),

    #[error("endpoint overlap {magnitude:.3e} below floor {floor:.3e}; phase undefined")]
    OrthogonalEndpoint { magnitude: f64, floor: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GeomPhaseError>;
