use std::sync::Arc;

use serde::Serialize;

use crate::graphs::{enumerate_paths, Graph, Path};
use crate::leavitt::{
    equal_in_algebra, expand_to_level, in_level, mul_monomials, BasisPolicy, Element, Monomial, RationalComplex, Scalar,
};

use super::report::{Status, VerificationReport};
use super::VerifyError;

#[derive(Debug, Clone, Serialize)]
pub struct FixedPointBlock {
    pub vertex: String,
    /// `|Q^k ∩ s⁻¹(v)|`.
    pub paths: usize,
    pub dimension: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FixedPointReport {
    pub level: usize,
    pub blocks: Vec<FixedPointBlock>,
    pub total_dimension: usize,
    pub matrix_units_verified: bool,
    /// `None` when the graph has sources, where the inclusion is not defined
    /// termwise.
    pub inclusion_verified: Option<bool>,
    pub report: VerificationReport,
}

/// The blocks `F_k(v) = span{s_α t_β : α, β ∈ Q^k ∩ s⁻¹(v)}` of the level-`k`
/// core, the matrix-unit relations among their spanning monomials, and the
/// inclusion `F_k ⊆ F_{k+1}` through CK2 expansion.
pub fn fixed_point_algebra_report(g: &Arc<Graph>, k: usize) -> Result<FixedPointReport, VerifyError> {
    let policy = Arc::new(BasisPolicy::default_for(g));
    let level: Vec<Path> = enumerate_paths(g, k, None)
        .into_iter()
        .filter(|p| p.len() == k)
        .collect();
    let mut by_vertex: Vec<Vec<Path>> = vec![Vec::new(); g.vertex_count()];
    for p in level {
        by_vertex[p.source().index()].push(p);
    }
    let blocks: Vec<FixedPointBlock> = g
        .vertices()
        .map(|v| {
            let n = by_vertex[v.index()].len();
            FixedPointBlock {
                vertex: g.vertex_name(v).to_string(),
                paths: n,
                dimension: n * n,
            }
        })
        .collect();
    let mut report = VerificationReport::new(format!("level-{k} core of {}", g.name().unwrap_or("graph")));

    // (s_α t_β)(s_γ t_δ) = δ_{βγ} s_α t_δ on one level, zero across blocks
    let units: Vec<Monomial> = by_vertex
        .iter()
        .flat_map(|ps| {
            ps.iter().flat_map(move |a| {
                ps.iter().map(move |b| Monomial {
                    alpha: a.clone(),
                    beta: b.clone(),
                })
            })
        })
        .collect();
    let mut failures = 0usize;
    let mut first = None;
    for x in &units {
        for y in &units {
            let got = mul_monomials(g, x, y);
            let want = (x.beta == y.alpha).then(|| Monomial {
                alpha: x.alpha.clone(),
                beta: y.beta.clone(),
            });
            if got != want {
                failures += 1;
                first.get_or_insert_with(|| format!("{} · {}", x.label(g), y.label(g)));
            }
        }
    }
    let matrix_units_verified = failures == 0;
    report.push(
        "matrix-unit relations",
        Status::from_bool(matrix_units_verified),
        failures as f64,
        match first {
            Some(f) => format!("first failure at {f}"),
            None => format!("{} products", units.len() * units.len()),
        },
    );

    let inclusion_verified = if g.sources().is_empty() {
        let mut ok = true;
        for m in &units {
            let x: Element<RationalComplex> = Element::from_monomial(g, m.clone(), RationalComplex::one());
            let up = expand_to_level(&x, k + 1)?;
            ok &= in_level(&up, k + 1) && equal_in_algebra(&up, &x, &policy)?;
        }
        report.push(
            "F_k ⊆ F_{k+1} termwise",
            Status::from_bool(ok),
            if ok { 0.0 } else { 1.0 },
            "",
        );
        Some(ok)
    } else {
        report.skip("F_k ⊆ F_{k+1} termwise", "the graph has sources");
        None
    };
    Ok(FixedPointReport {
        level: k,
        total_dimension: blocks.iter().map(|b| b.dimension).sum(),
        blocks,
        matrix_units_verified,
        inclusion_verified,
        report,
    })
}
