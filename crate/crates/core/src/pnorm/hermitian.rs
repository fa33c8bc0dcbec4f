use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::spatial::{indicator_support, AtomicMeasureSpace};
use crate::CMatrix;

use super::{opnorm, PnormError};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HermitianReport {
    pub is_idempotent: bool,
    pub idempotent_residual: f64,
    /// Largest sampled `‖exp(iλe)‖` (lower bounds where uncertified).
    pub max_exp_norm: f64,
    pub exp_norms_certified: bool,
    /// The atom set `A` when `e = m_{1_A}`.
    pub structural_indicator: Option<Vec<usize>>,
    /// For `p ≠ 2` the structural test; for `p = 2` self-adjointness in the
    /// weighted inner product.
    pub is_hermitian: bool,
}

/// Tests whether `e` is a hermitian idempotent on `ℓᵖ(space)`.
///
/// `exp(iλe) = I + (e^{iλ} − 1) e` for idempotent `e`, sampled at
/// `λ = ±2^j` (`j = −3..3`) and at `samples` uniform points of `(−π, π)`.
pub fn hermitian_idempotent_test(
    e: &CMatrix,
    space: &AtomicMeasureSpace,
    p: f64,
    samples: usize,
    seed: u64,
) -> Result<HermitianReport, PnormError> {
    let n = e.nrows();
    if e.ncols() != n {
        return Err(PnormError::NotSquare(n, e.ncols()));
    }
    let residual = (e * e - e).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let is_idempotent = residual <= 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lambdas: Vec<f64> = (-3..=3).flat_map(|j| [2f64.powi(j), -(2f64.powi(j))]).collect();
    lambdas.extend((0..samples).map(|_| rng.random_range(-PI..PI)));
    let id = CMatrix::identity(n, n);
    let mut max_exp_norm = 0.0f64;
    let mut certified = true;
    for (k, &lambda) in lambdas.iter().enumerate() {
        let factor = Complex64::from_polar(1.0, lambda) - 1.0;
        let exp = &id + e * factor;
        let est = opnorm(&exp, space, p, seed.wrapping_add(k as u64))?;
        max_exp_norm = max_exp_norm.max(est.lower);
        certified &= est.certified;
    }
    let structural_indicator = indicator_support(e, 1e-9);
    let is_hermitian = is_idempotent
        && if p == 2.0 {
            // e* = D^{-1} eᴴ D in the weighted inner product
            let w = &space.weights;
            (0..n).all(|i| (0..n).all(|j| (e[(i, j)] - e[(j, i)].conj() * (w[j] / w[i])).norm() <= 1e-9))
        } else {
            structural_indicator.is_some()
        };
    Ok(HermitianReport {
        is_idempotent,
        idempotent_residual: residual,
        max_exp_norm,
        exp_norms_certified: certified,
        structural_indicator,
        is_hermitian,
    })
}
