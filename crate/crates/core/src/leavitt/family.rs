//! Symbolic Cuntz–Krieger families: assignments of elements of an ambient
//! `L_Q` to the generators of another graph's Leavitt path algebra.

use std::sync::Arc;

use crate::graphs::{CkCompletion, Graph, Provenance, VertexId};

use super::element::Element;
use super::normal::{equal_in_algebra, BasisPolicy};
use super::scalar::Scalar;
use super::LeavittError;

/// `v ↦ E_v`, `a ↦ S_a`, `a ↦ T_a` for the generators of `target`, with
/// values in `L_ambient`.
#[derive(Debug, Clone)]
pub struct GeneratorFamily<C: Scalar> {
    pub target: Arc<Graph>,
    pub ambient: Arc<Graph>,
    pub e: Vec<Element<C>>,
    pub s: Vec<Element<C>>,
    pub t: Vec<Element<C>>,
}

impl<C: Scalar> GeneratorFamily<C> {
    /// `E_v = e_v`, `S_a = s_a`, `T_a = t_a`.
    pub fn tautological(g: &Arc<Graph>) -> Self {
        GeneratorFamily {
            target: Arc::clone(g),
            ambient: Arc::clone(g),
            e: g.vertices().map(|v| Element::vertex(g, v)).collect(),
            s: g.edge_ids().map(|a| Element::s(g, a)).collect(),
            t: g.edge_ids().map(|a| Element::t(g, a)).collect(),
        }
    }

    /// Image of an element of `L_target` under the generator substitution
    /// `s_α t_β ↦ S_{α₁}⋯S_{αₙ} E_{s(α)} T_{βₘ}⋯T_{β₁}`.
    pub fn apply(&self, x: &Element<C>) -> Result<Element<C>, LeavittError> {
        let mut out = Element::zero(&self.ambient);
        for (m, c) in x.terms() {
            let mut acc = self.e[m.alpha.source().index()].scale(c);
            for &a in m.alpha.edges().iter().rev() {
                acc = self.s[a.index()].try_mul(&acc)?;
            }
            for &b in m.beta.edges().iter().rev() {
                acc = acc.try_mul(&self.t[b.index()])?;
            }
            out = out.try_add(&acc)?;
        }
        Ok(out)
    }
}

/// The family of the CK completion `R̄` inside `L_Q`:
///
/// * `E_v = e_v` for `v ∉ Y`; `E_v = ε_v` and `E_{v'} = e_v − ε_v` for `v ∈ Y`,
///   where `ε_v = Σ_{a ∈ r_𝔯⁻¹(v)} s_a t_a`;
/// * `S_a = s_a` if `s(a) ∉ Y`, otherwise `S_a = s_a ε_{s(a)}` and
///   `S_{a'} = s_a (e_{s(a)} − ε_{s(a)})`; `T` is the mirror image.
pub fn embedded_ck_family<C: Scalar>(
    completion: &CkCompletion,
    q: &Arc<Graph>,
) -> Result<GeneratorFamily<C>, LeavittError> {
    let rbar = Arc::new(completion.rbar.clone());
    let sat = &completion.saturated;
    let bad = |msg: String| LeavittError::NotFromCompletion(msg);
    let q_vertex = |name: &str| q.vertex(name).map_err(|_| bad(format!("vertex `{name}` is not in q")));
    let q_edge = |name: &str| q.edge_id(name).map_err(|_| bad(format!("edge `{name}` is not in q")));
    if completion.vertex_tags.len() != rbar.vertex_count() || completion.edge_tags.len() != rbar.edge_count() {
        return Err(bad("tag tables do not match the completed graph".into()));
    }

    let in_y = |name: &str| completion.y.iter().any(|y| y == name);
    let epsilon = |name: &str| -> Result<Element<C>, LeavittError> {
        let sv = sat
            .vertex(name)
            .map_err(|_| bad(format!("`{name}` missing from the saturated graph")))?;
        let mut acc = Element::zero(q);
        for &a in sat.receives(sv) {
            let qa = q_edge(sat.edge_name(a))?;
            acc = acc.try_add(&Element::s(q, qa).try_mul(&Element::t(q, qa))?)?;
        }
        Ok(acc)
    };

    let mut e = Vec::with_capacity(rbar.vertex_count());
    for v in rbar.vertices() {
        let origin = completion.vertex_origin(v);
        let qv = q_vertex(origin)?;
        let ev = Element::vertex(q, qv);
        e.push(match (&completion.vertex_tags[v.index()], in_y(origin)) {
            (Provenance::Primed { .. }, true) => ev.try_sub(&epsilon(origin)?)?,
            (Provenance::Primed { of }, false) => return Err(bad(format!("primed vertex of `{of}` outside Y"))),
            (_, true) => epsilon(origin)?,
            (_, false) => ev,
        });
    }

    let mut s = Vec::with_capacity(rbar.edge_count());
    let mut t = Vec::with_capacity(rbar.edge_count());
    for a in rbar.edge_ids() {
        let origin = completion.edge_origin(a);
        let qa = q_edge(origin)?;
        let src = q.vertex_name(q.source(qa)).to_string();
        let sa = Element::s(q, qa);
        let ta = Element::t(q, qa);
        let primed = completion.is_primed_edge(a);
        if primed && !in_y(&src) {
            return Err(bad(format!("primed edge of `{origin}` whose source is outside Y")));
        }
        if !in_y(&src) {
            s.push(sa);
            t.push(ta);
            continue;
        }
        let eps = epsilon(&src)?;
        let proj = if primed {
            Element::vertex(q, q.source(qa)).try_sub(&eps)?
        } else {
            eps
        };
        s.push(sa.try_mul(&proj)?);
        t.push(proj.try_mul(&ta)?);
    }

    Ok(GeneratorFamily {
        target: rbar,
        ambient: Arc::clone(q),
        e,
        s,
        t,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationCheck {
    pub relation: String,
    pub holds: bool,
}

/// Outcome of [`symbolic_ck_check`]; violations are entries, not errors.
#[derive(Debug, Clone, Default)]
pub struct SymbolicReport {
    pub checks: Vec<RelationCheck>,
}

impl SymbolicReport {
    pub fn violations(&self) -> impl Iterator<Item = &RelationCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Checks the algebraic Cuntz–Krieger relations of `family` by comparing
/// normal forms in the ambient algebra.
pub fn symbolic_ck_check<C: Scalar>(
    family: &GeneratorFamily<C>,
    policy: &Arc<BasisPolicy>,
) -> Result<SymbolicReport, LeavittError> {
    let g = &*family.target;
    let amb = &family.ambient;
    let mut report = SymbolicReport::default();
    let mut record = |relation: String, lhs: &Element<C>, rhs: &Element<C>| -> Result<(), LeavittError> {
        let holds = equal_in_algebra(lhs, rhs, policy)?;
        report.checks.push(RelationCheck { relation, holds });
        Ok(())
    };
    let zero = Element::zero(amb);
    let vn = |v: VertexId| g.vertex_name(v).to_string();
    let en = |a: crate::graphs::EdgeId| g.edge_name(a).to_string();

    for v in g.vertices() {
        for w in g.vertices() {
            let prod = family.e[v.index()].try_mul(&family.e[w.index()])?;
            if v == w {
                record(format!("E_{0} E_{0} = E_{0}", vn(v)), &prod, &family.e[v.index()])?;
            } else {
                record(format!("E_{} E_{} = 0", vn(v), vn(w)), &prod, &zero)?;
            }
        }
    }
    for a in g.edge_ids() {
        let (sa, ta) = (&family.s[a.index()], &family.t[a.index()]);
        let er = &family.e[g.range(a).index()];
        let es = &family.e[g.source(a).index()];
        let name = en(a);
        record(format!("E_r({name}) S_{name} = S_{name}"), &er.try_mul(sa)?, sa)?;
        record(format!("S_{name} E_s({name}) = S_{name}"), &sa.try_mul(es)?, sa)?;
        record(format!("E_s({name}) T_{name} = T_{name}"), &es.try_mul(ta)?, ta)?;
        record(format!("T_{name} E_r({name}) = T_{name}"), &ta.try_mul(er)?, ta)?;
        record(
            format!("S_{name} T_{name} S_{name} = S_{name}"),
            &sa.try_mul(ta)?.try_mul(sa)?,
            sa,
        )?;
        record(
            format!("T_{name} S_{name} T_{name} = T_{name}"),
            &ta.try_mul(sa)?.try_mul(ta)?,
            ta,
        )?;
        for b in g.edge_ids() {
            let prod = ta.try_mul(&family.s[b.index()])?;
            if a == b {
                record(format!("T_{name} S_{name} = E_s({name})"), &prod, es)?;
            } else {
                record(format!("T_{name} S_{} = 0", en(b)), &prod, &zero)?;
            }
        }
    }
    for v in g.vertices().filter(|&v| g.is_regular(v)) {
        let mut sum = Element::zero(amb);
        for &a in g.receives(v) {
            sum = sum.try_add(&family.s[a.index()].try_mul(&family.t[a.index()])?)?;
        }
        record(
            format!("E_{0} = Σ S_a T_a over r⁻¹({0})", vn(v)),
            &sum,
            &family.e[v.index()],
        )?;
    }
    Ok(report)
}
