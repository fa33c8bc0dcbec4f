//! Symbolic constructions from the uniqueness arguments: the compression
//! operator `V = Σ_{τ∈G} s_{τλ} t_{τλ}` and the spectral-shift gadget.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::graphs::{find_nonreturning_path, Graph, Path, VertexId};

use super::element::Element;
use super::gauge::phi_n;
use super::monomial::Monomial;
use super::normal::{equal_in_algebra, BasisPolicy};
use super::scalar::Scalar;
use super::LeavittError;

/// The compression `V` built from a nonreturning path `λ` at `v`.
#[derive(Debug, Clone)]
pub struct VOperator<C: Scalar> {
    pub element: Element<C>,
    pub vertex: VertexId,
    pub lambda: Path,
    /// The paths of length `k` with source `v` occurring in the pair list.
    pub g_paths: Vec<Path>,
}

/// Builds `V` for the pairs of `pairs` sitting at `v` on level `k`.
///
/// `λ` is a nonreturning path with `r(λ) = v` and `|λ|` larger than every path
/// length in `pairs`; `V = Σ_{τ∈G} s_{τλ} t_{τλ}`.
pub fn v_operator<C: Scalar>(
    graph: &Arc<Graph>,
    pairs: &[(Path, Path)],
    v: VertexId,
    k: usize,
) -> Result<VOperator<C>, LeavittError> {
    let g = &**graph;
    let mut g_paths = BTreeSet::new();
    for (a, b) in pairs {
        if a.len() == k && b.len() == k && a.source() == v && b.source() == v {
            g_paths.insert(a.clone());
            g_paths.insert(b.clone());
        }
    }
    let longest = pairs.iter().map(|(a, b)| a.len().max(b.len())).max().unwrap_or(0);
    let lambda = find_nonreturning_path(g, v, longest + 1)?;
    let mut element = Element::zero(graph);
    for tau in &g_paths {
        let tl = tau.concat(g, &lambda).expect("s(τ) = v = r(λ)");
        element.add_term(
            Monomial {
                alpha: tl.clone(),
                beta: tl,
            },
            C::one(),
        );
    }
    Ok(VOperator {
        element,
        vertex: v,
        lambda,
        g_paths: g_paths.into_iter().collect(),
    })
}

impl<C: Scalar> VOperator<C> {
    /// `V x V`.
    pub fn compress(&self, x: &Element<C>) -> Result<Element<C>, LeavittError> {
        self.element.try_mul(x)?.try_mul(&self.element)
    }

    /// `V s_α t_β V = 0` for every pair with `|α| ≠ |β|`.
    pub fn annihilates_off_degree(
        &self,
        pairs: &[(Path, Path)],
        policy: &Arc<BasisPolicy>,
    ) -> Result<Vec<bool>, LeavittError> {
        let graph = self.element.graph_arc();
        let zero = Element::zero(graph);
        pairs
            .iter()
            .filter(|(a, b)| a.len() != b.len())
            .map(|(a, b)| {
                let m = Monomial::new(a.clone(), b.clone()).ok_or(LeavittError::InvalidMonomial)?;
                let x = Element::from_monomial(graph, m, C::one());
                equal_in_algebra(&self.compress(&x)?, &zero, policy)
            })
            .collect()
    }

    /// `V s_α t_β V = s_{αλ} t_{βλ}` for all `α, β ∈ G`.
    pub fn compresses_to_matrix_units(&self, policy: &Arc<BasisPolicy>) -> Result<bool, LeavittError> {
        let graph = self.element.graph_arc();
        let g = &**graph;
        for a in &self.g_paths {
            for b in &self.g_paths {
                let x = Element::from_monomial(
                    graph,
                    Monomial {
                        alpha: a.clone(),
                        beta: b.clone(),
                    },
                    C::one(),
                );
                let expected = Element::from_monomial(
                    graph,
                    Monomial {
                        alpha: a.concat(g, &self.lambda).expect("s(α) = r(λ)"),
                        beta: b.concat(g, &self.lambda).expect("s(β) = r(λ)"),
                    },
                    C::one(),
                );
                if !equal_in_algebra(&self.compress(&x)?, &expected, policy)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Output of [`spectral_shift_gadget`].
#[derive(Debug, Clone)]
pub struct SpectralShift<C: Scalar> {
    /// `a·x` for `n ≥ 0`, `x·a` for `n < 0`; of gauge degree zero.
    pub shifted: Element<C>,
    /// `x`: `Σ t_{τ_v}` for `n ≥ 0`, `Σ s_{τ_v}` for `n < 0`.
    pub x: Element<C>,
    /// `x*`, the formal adjoint of `x`.
    pub x_star: Element<C>,
    pub degree: i64,
}

/// For `a` homogeneous of gauge degree `n`, picks paths `τ_v` of length `|n|`
/// with `s(τ_v) = v` and moves `a` into the fixed-point algebra.
pub fn spectral_shift_gadget<C: Scalar>(a: &Element<C>, n: i64) -> Result<SpectralShift<C>, LeavittError> {
    let graph = a.graph_arc();
    let g = &**graph;
    if let Some((m, _)) = a.terms().find(|(m, _)| m.degree() != n) {
        return Err(LeavittError::NotHomogeneous {
            expected: n,
            found: m.degree(),
        });
    }
    let anchors: BTreeSet<VertexId> = a
        .terms()
        .map(|(m, _)| if n >= 0 { m.beta.range(g) } else { m.alpha.range(g) })
        .collect();
    let len = n.unsigned_abs() as usize;
    let mut taus = Vec::with_capacity(anchors.len());
    for &v in &anchors {
        let tau = forward_path(g, v, len).ok_or_else(|| LeavittError::SinkBlocked(g.vertex_name(v).to_string()))?;
        taus.push(tau);
    }
    let t_sum = Element::from_terms(graph, taus.iter().map(|t| (Monomial::t(t.clone()), C::one())));
    let s_sum = Element::from_terms(graph, taus.iter().map(|t| (Monomial::s(t.clone()), C::one())));
    let (x, x_star, shifted) = if n >= 0 {
        let shifted = a.try_mul(&t_sum)?;
        (t_sum, s_sum, shifted)
    } else {
        let shifted = s_sum.try_mul(a)?;
        (s_sum, t_sum, shifted)
    };
    Ok(SpectralShift {
        shifted,
        x,
        x_star,
        degree: n,
    })
}

impl<C: Scalar> SpectralShift<C> {
    /// `a x x* = a` (resp. `x* x a = a`) and `Φ₀(shifted) = shifted`.
    pub fn identities_hold(&self, a: &Element<C>, policy: &Arc<BasisPolicy>) -> Result<bool, LeavittError> {
        let restored = if self.degree >= 0 {
            a.try_mul(&self.x)?.try_mul(&self.x_star)?
        } else {
            self.x_star.try_mul(&self.x)?.try_mul(a)?
        };
        Ok(equal_in_algebra(&restored, a, policy)? && phi_n(0, &self.shifted) == self.shifted)
    }
}

/// Lexicographically least path of length `len` with source `v`, found by
/// walking out of `v` along emitted edges while avoiding dead ends.
fn forward_path(g: &Graph, v: VertexId, len: usize) -> Option<Path> {
    // can[m][u]: some path of length m starts (at its source end) at u
    let mut can = vec![vec![true; g.vertex_count()]];
    for m in 1..=len {
        let prev = &can[m - 1];
        let row = g
            .vertices()
            .map(|u| g.emits(u).iter().any(|&e| prev[g.range(e).index()]))
            .collect();
        can.push(row);
    }
    if !can[len][v.index()] {
        return None;
    }
    let mut edges = Vec::with_capacity(len);
    let mut cur = v;
    for m in (1..=len).rev() {
        let e = *g.emits(cur).iter().find(|&&e| can[m - 1][g.range(e).index()])?;
        edges.push(e);
        cur = g.range(e);
    }
    if edges.is_empty() {
        return Some(Path::vertex(v));
    }
    edges.reverse();
    Path::new(g, edges).ok()
}
