//! Numeric and symbolic verification of the uniqueness machinery: relation
//! checks for represented families, injectivity and isometry of `π` on
//! filtration levels, gauge equivariance, the compression argument, and the
//! core filtration.

mod ck;
mod fixed_point;
mod gauge;
mod isometry;
mod kernel;
mod report;
mod uniqueness;

#[cfg(test)]
mod tests;

use thiserror::Error;

use crate::graphs::GraphError;
use crate::leavitt::LeavittError;
use crate::pnorm::PnormError;
use crate::spatial::SpatialError;
use crate::CMatrix;

pub use ck::check_ck_family;
pub use fixed_point::{fixed_point_algebra_report, FixedPointBlock, FixedPointReport};
pub use gauge::{gauge_equivariance_check, gauge_equivariance_with};
pub use isometry::{isometry_on_level, isometry_trial, reference_norm, IsometryReport, IsometryTrial, ISOMETRY_TOL};
pub use kernel::{injectivity_on_level, InjectivityReport};
pub use report::{Check, Status, VerificationReport};
pub use uniqueness::{uniqueness_witness_suite, SuiteOptions};

/// Residual accepted for matrix identities.
pub const TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Leavitt(#[from] LeavittError),
    #[error(transparent)]
    Spatial(#[from] SpatialError),
    #[error(transparent)]
    Pnorm(#[from] PnormError),
}

pub(crate) fn max_entry(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
