//! Gauge action, spectral projections and the level-`k` core filtration.

use std::sync::Arc;

use crate::graphs::{enumerate_paths, Graph, VertexId};

use super::element::Element;
use super::monomial::Monomial;
use super::scalar::Scalar;
use super::LeavittError;

/// `γ_z`: multiplies each term by `z^{|α|−|β|}`.
pub fn gauge_apply<C: Scalar>(z: &C, x: &Element<C>) -> Result<Element<C>, LeavittError> {
    if !z.is_unimodular() {
        return Err(LeavittError::NotUnimodular);
    }
    let zbar = z.conj();
    Ok(x.map_coefficients(|m, c| {
        let d = m.degree();
        let factor = if d >= 0 { z.pow(d as u32) } else { zbar.pow((-d) as u32) };
        c.clone() * factor
    }))
}

/// `Φₙ`: the terms of gauge degree exactly `n`.
///
/// The circle integral `∫ z^{−n} γ_z(x) dz` of a monomial of degree `d` is
/// `δ_{n,d}`, so no quadrature is involved.
pub fn phi_n<C: Scalar>(n: i64, x: &Element<C>) -> Element<C> {
    x.filter_terms(|m| m.degree() == n)
}

/// CK2 forward expansion until every term has `min(|α|, |β|) ≥ k`.
///
/// Each term with `min(|α|, |β|) < k` and common source `w` is replaced by
/// `Σ_{a ∈ r⁻¹(w)} s_{αa} t_{βa}`. The result is equal to `x` in `L_Q` but is
/// not reduced.
pub fn expand_to_level<C: Scalar>(x: &Element<C>, k: usize) -> Result<Element<C>, LeavittError> {
    let g = x.graph();
    let mut out = Element::zero(x.graph_arc());
    let mut stack: Vec<(Monomial, C)> = x.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    while let Some((m, c)) = stack.pop() {
        if m.alpha.len().min(m.beta.len()) >= k {
            out.add_term(m, c);
            continue;
        }
        let w = m.alpha.source();
        if g.is_source(w) {
            return Err(LeavittError::SourceBlocked(g.vertex_name(w).to_string()));
        }
        for &a in g.receives(w) {
            let next = Monomial {
                alpha: m.alpha.push(g, a).expect("r(a) = w"),
                beta: m.beta.push(g, a).expect("r(a) = w"),
            };
            stack.push((next, c.clone()));
        }
    }
    Ok(out)
}

/// `ε_v = Σ_{α ∈ Q^k ∩ s⁻¹(v)} s_α t_α`, the unit of the block `F_k(v)`.
pub fn level_unit<C: Scalar>(graph: &Arc<Graph>, v: VertexId, k: usize) -> Element<C> {
    let paths = enumerate_paths(graph, k, None);
    Element::from_terms(
        graph,
        paths.into_iter().filter(|p| p.len() == k && p.source() == v).map(|p| {
            (
                Monomial {
                    alpha: p.clone(),
                    beta: p,
                },
                C::one(),
            )
        }),
    )
}

/// True when every term has `|α| = |β| = k`, i.e. `x` lies in `span F_k`.
pub fn in_level<C: Scalar>(x: &Element<C>, k: usize) -> bool {
    x.terms().all(|(m, _)| m.alpha.len() == k && m.beta.len() == k)
}
