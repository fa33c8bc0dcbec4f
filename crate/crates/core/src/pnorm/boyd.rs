use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::CMatrix;

pub const MAX_ITERATIONS: usize = 10_000;
/// Random starts of the sphere search, on top of the basis vectors.
pub const SPHERE_STARTS: usize = 32;

#[derive(Debug, Clone)]
pub struct BoydResult {
    /// `‖M x‖_p` at the final unit vector `x`.
    pub lower: f64,
    /// Schur-test bound `max_j ((Mᵀ (Mx)^{p−1})_j / x_j^{p−1})^{1/p}`.
    pub upper: f64,
    pub vector: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

fn pnorm(v: impl Iterator<Item = f64>, p: f64) -> f64 {
    v.map(|t| t.abs().powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Boyd's power method for an entrywise nonnegative `M` and `1 < p < ∞`.
///
/// Iterates `x ← (Mᵀ (Mx)^{p−1})^{1/(p−1)}`, normalized. For nonnegative
/// matrices the positive fixed point is the global maximizer. Every iterate
/// gives the lower bound `‖Mx‖_p`; the upper bound follows from Jensen's
/// inequality applied row by row with the weights `M_ij x_j / (Mx)_i`.
pub fn boyd_nonnegative(m: &DMatrix<f64>, p: f64) -> BoydResult {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 || m.iter().all(|&t| t == 0.0) {
        return BoydResult {
            lower: 0.0,
            upper: 0.0,
            vector: vec![0.0; cols],
            iterations: 0,
            converged: true,
        };
    }
    let mut x = DVector::from_element(cols, (cols as f64).powf(-1.0 / p));
    let mut lower = 0.0f64;
    let mut upper = f64::INFINITY;
    let mut best = x.clone();
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let y = m * &x;
        let value = pnorm(y.iter().copied(), p);
        if value >= lower {
            lower = value;
            best = x.clone();
        }
        let z = m.transpose() * y.map(|t| t.powf(p - 1.0));
        let bound = z
            .iter()
            .zip(x.iter())
            .map(|(&zj, &xj)| if zj == 0.0 { 0.0 } else { zj / xj.powf(p - 1.0) })
            .fold(0.0, f64::max)
            .powf(1.0 / p);
        if bound.is_finite() {
            upper = upper.min(bound);
        }
        if upper - lower <= 1e-12 * upper {
            break;
        }
        let next = z.map(|t| t.powf(1.0 / (p - 1.0)));
        let norm = pnorm(next.iter().copied(), p);
        if !(norm.is_finite() && norm > 0.0) {
            break;
        }
        let next = next / norm;
        let change = (&next - &x).amax();
        x = next;
        if change < 1e-15 {
            break;
        }
    }
    let upper = upper.max(lower);
    BoydResult {
        lower,
        upper,
        vector: best.iter().copied().collect(),
        iterations,
        converged: upper - lower <= super::CERTIFY_TOL * upper,
    }
}

fn cnorm(v: &DVector<Complex64>, p: f64) -> f64 {
    pnorm(v.iter().map(|z| z.norm()), p)
}

// z ↦ |z|^{e} sign(z)
fn duality_map(v: &DVector<Complex64>, e: f64) -> DVector<Complex64> {
    v.map(|z| {
        let r = z.norm();
        if r == 0.0 {
            z
        } else {
            z * r.powf(e - 1.0)
        }
    })
}

/// Multistart ascent for `max ‖Bx‖_p / ‖x‖_p` over complex `x`. Returns the
/// best value found, which is a lower bound on the norm.
///
/// Starts are the optional warm vector, every basis vector and `starts`
/// random complex vectors drawn from `rng`; each is refined by the
/// nonlinear power iteration `x ← J_{p'}(Bᴴ J_p(Bx))`.
pub fn sphere_search<R: Rng>(b: &CMatrix, p: f64, starts: usize, rng: &mut R, warm: Option<&[f64]>) -> f64 {
    let n = b.ncols();
    if n == 0 {
        return 0.0;
    }
    let q = p / (p - 1.0);
    let mut candidates: Vec<DVector<Complex64>> = Vec::with_capacity(starts + n + 1);
    if let Some(w) = warm {
        candidates.push(DVector::from_iterator(n, w.iter().map(|&t| Complex64::new(t, 0.0))));
    }
    for j in 0..n {
        let mut e = DVector::zeros(n);
        e[j] = Complex64::new(1.0, 0.0);
        candidates.push(e);
    }
    for _ in 0..starts {
        candidates.push(DVector::from_fn(n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        }));
    }
    let mut best = 0.0f64;
    let bh = b.adjoint();
    for mut x in candidates {
        let mut last = 0.0;
        for _ in 0..500 {
            let nx = cnorm(&x, p);
            if nx == 0.0 {
                break;
            }
            x /= Complex64::new(nx, 0.0);
            let y = b * &x;
            let value = cnorm(&y, p);
            best = best.max(value);
            if value == 0.0 || (value - last).abs() <= 1e-13 * value {
                break;
            }
            last = value;
            x = duality_map(&(&bh * duality_map(&y, p - 1.0)), q - 1.0);
        }
    }
    best
}
