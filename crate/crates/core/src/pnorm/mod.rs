//! Operator norms on weighted `ℓᵖ` spaces of atoms.
//!
//! The weights are absorbed first: with `D = diag(μ)`, `‖A‖` on `ℓᵖ(μ)` is
//! the unweighted norm of `D^{1/p} A D^{-1/p}`. The matrix then splits into
//! the connected components of its row/column incidence graph, and the norm
//! is the largest component norm. Each component is handled by the cheapest
//! method that applies:
//!
//! * `p = 1`: the largest absolute column sum (exact);
//! * `p = 2`: the largest singular value (exact up to rounding);
//! * `|B| = U B V` for unimodular diagonals `U, V`: Boyd's power method on
//!   `|B|`, bracketed above by a Schur-test bound;
//! * anything else: multistart ascent on the unit sphere, a lower bound only.

mod boyd;
mod hermitian;


use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::spatial::AtomicMeasureSpace;
use crate::CMatrix;

pub use boyd::{boyd_nonnegative, sphere_search, BoydResult, SPHERE_STARTS};
pub use hermitian::{hermitian_idempotent_test, HermitianReport};

/// Relative gap accepted as a certificate.
pub const CERTIFY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMethod {
    ExactP1,
    ExactP2,
    BoydNonnegative,
    SphereSearch,
}

impl NormMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            NormMethod::ExactP1 => "exact_p1",
            NormMethod::ExactP2 => "exact_p2",
            NormMethod::BoydNonnegative => "boyd_nonnegative",
            NormMethod::SphereSearch => "sphere_search",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEstimate {
    pub lower: f64,
    pub upper: Option<f64>,
    pub certified: bool,
    pub method: NormMethod,
}

impl NormEstimate {
    fn exact(value: f64, method: NormMethod) -> Self {
        NormEstimate {
            lower: value,
            upper: Some(value),
            certified: true,
            method,
        }
    }

    /// The best point estimate: the lower bound, which is attained.
    pub fn value(&self) -> f64 {
        self.lower
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PnormError {
    #[error("matrix is {0}x{1}, not square")]
    NotSquare(usize, usize),
    #[error("matrix has {matrix} rows but the space has {space} atoms")]
    DimensionMismatch { matrix: usize, space: usize },
    #[error("exponent p = {0} is outside [1, ∞)")]
    InvalidExponent(f64),
}

/// `‖A‖` on `ℓᵖ(space)`; `seed` drives the sphere-search fallback only.
pub fn opnorm(a: &CMatrix, space: &AtomicMeasureSpace, p: f64, seed: u64) -> Result<NormEstimate, PnormError> {
    if a.nrows() != a.ncols() {
        return Err(PnormError::NotSquare(a.nrows(), a.ncols()));
    }
    if a.nrows() != space.len() {
        return Err(PnormError::DimensionMismatch {
            matrix: a.nrows(),
            space: space.len(),
        });
    }
    let b = absorb_weights(a, &space.weights, p)?;
    unweighted_opnorm(&b, p, seed)
}

/// `D^{1/p} A D^{-1/p}`.
pub fn absorb_weights(a: &CMatrix, weights: &[f64], p: f64) -> Result<CMatrix, PnormError> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(PnormError::InvalidExponent(p));
    }
    Ok(CMatrix::from_fn(a.nrows(), a.ncols(), |i, j| {
        if a[(i, j)] == Complex64::new(0.0, 0.0) {
            a[(i, j)]
        } else {
            a[(i, j)] * (weights[i] / weights[j]).powf(1.0 / p)
        }
    }))
}

/// `‖B‖` on unweighted `ℓᵖ`, for any rectangular `B`.
pub fn unweighted_opnorm(b: &CMatrix, p: f64, seed: u64) -> Result<NormEstimate, PnormError> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(PnormError::InvalidExponent(p));
    }
    let base = if p == 1.0 {
        NormMethod::ExactP1
    } else if p == 2.0 {
        NormMethod::ExactP2
    } else {
        NormMethod::BoydNonnegative
    };
    let mut total = NormEstimate::exact(0.0, base);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (rows, cols) in components(b) {
        let sub = CMatrix::from_fn(rows.len(), cols.len(), |i, j| b[(rows[i], cols[j])]);
        let est = component_norm(&sub, p, &mut rng);
        total = NormEstimate {
            lower: total.lower.max(est.lower),
            upper: match (total.upper, est.upper) {
                (Some(x), Some(y)) => Some(x.max(y)),
                _ => None,
            },
            certified: total.certified && est.certified,
            method: total.method.max(est.method),
        };
    }
    Ok(total)
}

fn component_norm(b: &CMatrix, p: f64, rng: &mut ChaCha8Rng) -> NormEstimate {
    if p == 1.0 {
        let col = (0..b.ncols())
            .map(|j| b.column(j).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max);
        return NormEstimate::exact(col, NormMethod::ExactP1);
    }
    if p == 2.0 {
        let sigma = b.clone().singular_values().iter().copied().fold(0.0, f64::max);
        return NormEstimate::exact(sigma, NormMethod::ExactP2);
    }
    let modulus = b.map(|z| z.norm());
    let boyd = boyd_nonnegative(&modulus, p);
    if phase_conjugate_to_nonnegative(b) {
        let certified = boyd.converged && boyd.upper - boyd.lower <= CERTIFY_TOL * boyd.upper;
        return NormEstimate {
            lower: boyd.lower,
            upper: Some(boyd.upper),
            certified,
            method: NormMethod::BoydNonnegative,
        };
    }
    let lower = sphere_search(b, p, SPHERE_STARTS, rng, Some(&boyd.vector));
    // Riesz–Thorin between the exact p = 1 and p = ∞ norms, and the
    // nonnegative majorant, both bound the norm from above
    let n1 = (0..b.ncols()).map(|j| modulus.column(j).sum()).fold(0.0, f64::max);
    let ninf = (0..b.nrows()).map(|i| modulus.row(i).sum()).fold(0.0, f64::max);
    let interp = n1.powf(1.0 / p) * ninf.powf(1.0 - 1.0 / p);
    NormEstimate {
        lower,
        upper: Some(boyd.upper.min(interp).max(lower)),
        certified: false,
        method: NormMethod::SphereSearch,
    }
}

/// Connected components of the bipartite graph with an edge `(i, j)` for
/// each nonzero `b[i, j]`, as sorted row and column lists. Zero rows and
/// columns are dropped.
pub fn components(b: &CMatrix) -> Vec<(Vec<usize>, Vec<usize>)> {
    let (m, n) = b.shape();
    let mut row_seen = vec![false; m];
    let mut col_seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..m {
        if row_seen[start] || (0..n).all(|j| b[(start, j)].norm() == 0.0) {
            continue;
        }
        let (mut rows, mut cols) = (Vec::new(), Vec::new());
        let mut stack = vec![(true, start)];
        row_seen[start] = true;
        while let Some((is_row, k)) = stack.pop() {
            if is_row {
                rows.push(k);
                for j in 0..n {
                    if !col_seen[j] && b[(k, j)].norm() != 0.0 {
                        col_seen[j] = true;
                        stack.push((false, j));
                    }
                }
            } else {
                cols.push(k);
                for i in 0..m {
                    if !row_seen[i] && b[(i, k)].norm() != 0.0 {
                        row_seen[i] = true;
                        stack.push((true, i));
                    }
                }
            }
        }
        rows.sort_unstable();
        cols.sort_unstable();
        out.push((rows, cols));
    }
    out
}

/// True when unimodular `u, v` exist with `b[i, j] = u_i |b[i, j]| v_j`; then
/// `b` and `|b|` have the same norm for every `p`.
pub fn phase_conjugate_to_nonnegative(b: &CMatrix) -> bool {
    let (m, n) = b.shape();
    let mut u: Vec<Option<Complex64>> = vec![None; m];
    let mut v: Vec<Option<Complex64>> = vec![None; n];
    let phase = |z: Complex64| z / z.norm();
    for start in 0..m {
        if u[start].is_some() {
            continue;
        }
        u[start] = Some(Complex64::new(1.0, 0.0));
        let mut stack = vec![(true, start)];
        while let Some((is_row, k)) = stack.pop() {
            if is_row {
                let uk = u[k].expect("assigned");
                for j in (0..n).filter(|&j| b[(k, j)].norm() != 0.0) {
                    let want = phase(b[(k, j)]) / uk;
                    match v[j] {
                        Some(vj) if (vj - want).norm() > 1e-12 => return false,
                        Some(_) => {}
                        None => {
                            v[j] = Some(want);
                            stack.push((false, j));
                        }
                    }
                }
            } else {
                let vk = v[k].expect("assigned");
                for i in (0..m).filter(|&i| b[(i, k)].norm() != 0.0) {
                    let want = phase(b[(i, k)]) / vk;
                    match u[i] {
                        Some(ui) if (ui - want).norm() > 1e-12 => return false,
                        Some(_) => {}
                        None => {
                            u[i] = Some(want);
                            stack.push((true, i));
                        }
                    }
                }
            }
        }
    }
    true
}
