//! Canonical normal form in `L_Q`.
//!
//! For every regular vertex `v` a special edge `f_v ∈ r⁻¹(v)` is fixed. The
//! CK2 relation read right to left gives the rewrite rule
//!
//! ```text
//! s_{αf} t_{βf}  →  s_α t_β − Σ_{a ∈ r⁻¹(v), a ≠ f} s_{αa} t_{βa}      (f = f_v)
//! ```
//!
//! Each step replaces a term of total length `L` by one of length `L − 2` and
//! terms of length `L` that are already irreducible, so reduction terminates.
//! The irreducible monomials (those not ending in a common special edge) form
//! a basis, which makes the normal form a decision procedure for equality.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::graphs::{EdgeId, Graph, Path, VertexId};

use super::element::Element;
use super::monomial::Monomial;
use super::scalar::Scalar;
use super::LeavittError;

/// Choice of a special edge `f_v ∈ r⁻¹(v)` for each regular vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisPolicy {
    special: Vec<Option<EdgeId>>,
}

impl BasisPolicy {
    /// The least edge id of `r⁻¹(v)` at every regular `v`.
    pub fn default_for(g: &Graph) -> Self {
        BasisPolicy {
            special: g.vertices().map(|v| g.receives(v).first().copied()).collect(),
        }
    }

    /// A policy from an explicit map, which must cover every regular vertex.
    pub fn new(g: &Graph, choices: &BTreeMap<VertexId, EdgeId>) -> Result<Self, LeavittError> {
        let mut special = vec![None; g.vertex_count()];
        for (&v, &e) in choices {
            if g.range(e) != v {
                return Err(LeavittError::PolicyInvalid(format!(
                    "edge `{}` does not have range `{}`",
                    g.edge_name(e),
                    g.vertex_name(v)
                )));
            }
            special[v.index()] = Some(e);
        }
        let policy = BasisPolicy { special };
        policy.check_covers(g)?;
        Ok(policy)
    }

    /// Default policy with selected vertices overridden.
    pub fn with_overrides(g: &Graph, overrides: &BTreeMap<VertexId, EdgeId>) -> Result<Self, LeavittError> {
        let mut choices: BTreeMap<VertexId, EdgeId> = g
            .vertices()
            .filter_map(|v| g.receives(v).first().map(|&e| (v, e)))
            .collect();
        choices.extend(overrides.iter().map(|(&v, &e)| (v, e)));
        Self::new(g, &choices)
    }

    pub fn special_edge(&self, v: VertexId) -> Option<EdgeId> {
        self.special.get(v.index()).copied().flatten()
    }

    pub fn check_covers(&self, g: &Graph) -> Result<(), LeavittError> {
        if self.special.len() != g.vertex_count() {
            return Err(LeavittError::PolicyIncomplete(
                "policy built for a different graph".into(),
            ));
        }
        for v in g.vertices() {
            match self.special[v.index()] {
                None if g.is_regular(v) => {
                    return Err(LeavittError::PolicyIncomplete(g.vertex_name(v).to_string()));
                }
                Some(e) if g.range(e) != v => {
                    return Err(LeavittError::PolicyInvalid(g.edge_name(e).to_string()));
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// The special edge both paths end with, when the monomial is reducible.
    pub fn redex(&self, g: &Graph, m: &Monomial) -> Option<EdgeId> {
        let f = m.alpha.last_edge()?;
        (m.beta.last_edge() == Some(f) && self.special_edge(g.range(f)) == Some(f)).then_some(f)
    }

    pub fn is_reduced(&self, g: &Graph, m: &Monomial) -> bool {
        self.redex(g, m).is_none()
    }
}

/// One rewrite step on a reducible monomial: returns the shorter monomial
/// (coefficient `+1`) and the same-length siblings (coefficient `−1`).
pub fn rewrite_once(g: &Graph, policy: &BasisPolicy, m: &Monomial) -> Option<(Monomial, Vec<Monomial>)> {
    let f = policy.redex(g, m)?;
    let alpha = m.alpha.pop(g).expect("redex has an edge");
    let beta = m.beta.pop(g).expect("redex has an edge");
    let v = g.range(f);
    let siblings = g
        .receives(v)
        .iter()
        .filter(|&&a| a != f)
        .map(|&a| Monomial {
            alpha: alpha.push(g, a).expect("r(a) = v = s(α')"),
            beta: beta.push(g, a).expect("r(a) = v = s(β')"),
        })
        .collect();
    Some((Monomial { alpha, beta }, siblings))
}

fn reduce_into<C: Scalar>(g: &Graph, policy: &BasisPolicy, m: &Monomial, c: C, out: &mut Element<C>) {
    let mut current = m.clone();
    while let Some((shorter, siblings)) = rewrite_once(g, policy, &current) {
        for sib in siblings {
            out.add_term(sib, -c.clone());
        }
        current = shorter;
    }
    out.add_term(current, c);
}

/// Normal form of `x` with respect to `policy`.
pub fn normalize<C: Scalar>(x: &Element<C>, policy: &Arc<BasisPolicy>) -> Result<Element<C>, LeavittError> {
    let g = x.graph();
    policy.check_covers(g)?;
    let mut out = Element::zero(x.graph_arc());
    for (m, c) in x.terms() {
        reduce_into(g, policy, m, c.clone(), &mut out);
    }
    out.set_policy(Some(Arc::clone(policy)));
    Ok(out)
}

pub fn is_normal<C: Scalar>(x: &Element<C>, policy: &BasisPolicy) -> bool {
    x.terms().all(|(m, _)| policy.is_reduced(x.graph(), m))
}

/// `x == y` in `L_Q`, decided by comparing normal forms.
pub fn equal_in_algebra<C: Scalar>(
    x: &Element<C>,
    y: &Element<C>,
    policy: &Arc<BasisPolicy>,
) -> Result<bool, LeavittError> {
    Ok(normalize(&x.try_sub(y)?, policy)?.is_zero())
}

/// An uncollected term list that can be rewritten one step at a time, in any
/// order. Used to exercise confluence of the reduction.
#[derive(Debug, Clone)]
pub struct Rewriter<C: Scalar> {
    graph: Arc<Graph>,
    policy: Arc<BasisPolicy>,
    terms: Vec<(Monomial, C)>,
}

impl<C: Scalar> Rewriter<C> {
    pub fn new(x: &Element<C>, policy: &Arc<BasisPolicy>) -> Self {
        Rewriter {
            graph: Arc::clone(x.graph_arc()),
            policy: Arc::clone(policy),
            terms: x.terms().map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn from_raw(graph: &Arc<Graph>, policy: &Arc<BasisPolicy>, terms: Vec<(Monomial, C)>) -> Self {
        Rewriter {
            graph: Arc::clone(graph),
            policy: Arc::clone(policy),
            terms,
        }
    }

    /// Indices of terms that admit a rewrite.
    pub fn redexes(&self) -> Vec<usize> {
        (0..self.terms.len())
            .filter(|&i| self.policy.redex(&self.graph, &self.terms[i].0).is_some())
            .collect()
    }

    /// Rewrites term `i` once. Returns `false` if it is irreducible.
    pub fn step(&mut self, i: usize) -> bool {
        let Some((shorter, siblings)) = rewrite_once(&self.graph, &self.policy, &self.terms[i].0) else {
            return false;
        };
        let c = self.terms[i].1.clone();
        self.terms[i].0 = shorter;
        for sib in siblings {
            self.terms.push((sib, -c.clone()));
        }
        true
    }

    /// Merges repeated monomials and drops cancelled terms.
    pub fn collect(&mut self) {
        let e = Element::from_terms(&self.graph, self.terms.drain(..));
        self.terms = e.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn finish(mut self) -> Element<C> {
        self.collect();
        let mut out = Element::from_terms(&self.graph, self.terms);
        out.set_policy(Some(self.policy));
        out
    }
}

/// All reduced monomials `s_α t_β` with `|α|, |β| ≤ max_len`, in monomial order.
pub fn reduced_monomials(g: &Graph, policy: &BasisPolicy, max_len: usize) -> Vec<Monomial> {
    let paths = crate::graphs::enumerate_paths(g, max_len, None);
    let mut by_source: BTreeMap<VertexId, Vec<&Path>> = BTreeMap::new();
    for p in &paths {
        by_source.entry(p.source()).or_default().push(p);
    }
    let mut out = Vec::new();
    for group in by_source.values() {
        for &a in group {
            for &b in group {
                let m = Monomial {
                    alpha: a.clone(),
                    beta: b.clone(),
                };
                if policy.is_reduced(g, &m) {
                    out.push(m);
                }
            }
        }
    }
    out.sort();
    out
}
