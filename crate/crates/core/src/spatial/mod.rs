//! Spatial partial isometries on finite weighted atomic spaces and the
//! atomic Cuntz–Krieger families built from them.
//!
//! A spatial system `(E, F, η, f)` on atoms becomes the matrix with
//! `s[y, η(y)] = f(y) (μ_{η(y)} / μ_y)^{1/p}`, which maps `ℓᵖ(E, μ)`
//! isometrically onto `ℓᵖ(F, μ)`.

mod family;
mod json;
mod space;
mod system;


use thiserror::Error;

use crate::graphs::GraphError;

pub use family::{
    atomic_ck_family, atomic_layout, atomic_size_assignment, indicator_support, represent, support_of, CkFamily,
    FamilyOptions, MAX_ATOMS,
};
pub use json::{FamilyJson, MatrixJson, SpaceJson, SPARSE_THRESHOLD};
pub use space::{AtomicMeasureSpace, Layout};
pub use system::{recover_certificate, spi_compose, spi_matrix, spi_reverse, SpatialOperator, SpatialSystem};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpatialError {
    #[error("invalid measure space: {0}")]
    InvalidSpace(String),
    #[error("invalid spatial system: {0}")]
    InvalidSystem(String),
    #[error("operators act on different spaces")]
    SpaceMismatch,
    #[error("operator has no spatial certificate")]
    MissingCertificate,
    #[error("no finite atomic family: {0}")]
    Unsolvable(String),
    #[error("atomic family would need {0} atoms")]
    TooLarge(usize),
    #[error("represented element is not an indicator matrix")]
    NotAnIndicator,
    #[error("element and family live over different graphs")]
    GraphMismatch,
    #[error("exponent p = {0} is outside [1, ∞)")]
    InvalidExponent(f64),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("malformed family json: {0}")]
    Json(String),
}

pub(crate) fn check_exponent(p: f64) -> Result<(), SpatialError> {
    if p.is_finite() && p >= 1.0 {
        Ok(())
    } else {
        Err(SpatialError::InvalidExponent(p))
    }
}
