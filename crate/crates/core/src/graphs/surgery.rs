//! Subgraph checks and graph surgeries: Cuntz–Krieger subgraphs, the
//! CK completion `R ↦ R̄`, and truncated desingularization.

use std::collections::{BTreeSet, HashSet};

use super::{EdgeId, Graph, GraphError, VertexId};

/// How `r` sits inside `q`, by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgraphEmbedding {
    pub vertex: Vec<VertexId>,
    pub edge: Vec<EdgeId>,
}

/// Matches `r` inside `q` by ids, requiring identical endpoints.
pub fn subgraph_embedding(r: &Graph, q: &Graph) -> Result<SubgraphEmbedding, GraphError> {
    let vertex = r
        .vertex_names()
        .iter()
        .map(|n| {
            q.vertex(n)
                .map_err(|_| GraphError::NotASubgraph(format!("vertex `{n}` missing")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut edge = Vec::with_capacity(r.edge_count());
    for e in r.edges() {
        let qe = q
            .edge_id(&e.id)
            .map_err(|_| GraphError::NotASubgraph(format!("edge `{}` missing", e.id)))?;
        if q.source(qe) != vertex[e.source.index()] || q.range(qe) != vertex[e.range.index()] {
            return Err(GraphError::NotASubgraph(format!(
                "edge `{}` has different endpoints",
                e.id
            )));
        }
        edge.push(qe);
    }
    Ok(SubgraphEmbedding { vertex, edge })
}

/// True iff every vertex `v` of `r` with `r_R⁻¹(v) ≠ ∅` has `r_R⁻¹(v) = r_Q⁻¹(v)`.
pub fn is_ck_subgraph(r: &Graph, q: &Graph) -> Result<bool, GraphError> {
    let emb = subgraph_embedding(r, q)?;
    Ok(r.vertices().all(|v| {
        let inside = r.receives(v);
        inside.is_empty() || inside.len() == q.receives(emb.vertex[v.index()]).len()
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Original,
    AddedFromQ,
    /// The primed copy `x'` of the item `of` (a vertex or edge id of `q`).
    Primed {
        of: String,
    },
}

/// Output of [`ck_completion`].
#[derive(Debug, Clone)]
pub struct CkCompletion {
    pub rbar: Graph,
    /// The intermediate graph `𝔯` (before priming).
    pub saturated: Graph,
    /// `Y = Reg(𝔯) \ Reg(Q)`, as vertex ids of `q`, sorted.
    pub y: Vec<String>,
    /// Provenance of each vertex of `rbar`, indexed by `VertexId`.
    pub vertex_tags: Vec<Provenance>,
    /// Provenance of each edge of `rbar`, indexed by `EdgeId`.
    pub edge_tags: Vec<Provenance>,
}

impl CkCompletion {
    /// The `q` id underlying an item of `rbar` (the unprimed original for primes).
    pub fn vertex_origin(&self, v: VertexId) -> &str {
        match &self.vertex_tags[v.index()] {
            Provenance::Primed { of } => of,
            _ => self.rbar.vertex_name(v),
        }
    }

    pub fn edge_origin(&self, e: EdgeId) -> &str {
        match &self.edge_tags[e.index()] {
            Provenance::Primed { of } => of,
            _ => self.rbar.edge_name(e),
        }
    }

    pub fn is_primed_vertex(&self, v: VertexId) -> bool {
        matches!(self.vertex_tags[v.index()], Provenance::Primed { .. })
    }

    pub fn is_primed_edge(&self, e: EdgeId) -> bool {
        matches!(self.edge_tags[e.index()], Provenance::Primed { .. })
    }
}

pub fn ck_completion(r: &Graph, q: &Graph) -> Result<CkCompletion, GraphError> {
    ck_completion_with_receivers(r, q, &[])
}

/// CK completion where the listed vertices of `q` are treated as infinite
/// receivers of an ambient graph, hence not regular. With an empty list this
/// is the plain finite construction, and `Y` is always empty.
pub fn ck_completion_with_receivers(
    r: &Graph,
    q: &Graph,
    infinite_receivers: &[VertexId],
) -> Result<CkCompletion, GraphError> {
    let emb = subgraph_embedding(r, q)?;
    let q_regular = |v: VertexId| q.is_regular(v) && !infinite_receivers.contains(&v);

    let mut verts: BTreeSet<VertexId> = emb.vertex.iter().copied().collect();
    let original_verts = verts.clone();
    let mut edges: BTreeSet<EdgeId> = emb.edge.iter().copied().collect();
    let original_edges = edges.clone();
    for v in r.vertices() {
        let qv = emb.vertex[v.index()];
        if q_regular(qv) && !r.receives(v).is_empty() {
            for &a in q.receives(qv) {
                edges.insert(a);
                verts.insert(q.source(a));
            }
        }
    }

    let name_v = |v: &VertexId| q.vertex_name(*v).to_string();
    let edge_triple = |a: &EdgeId| {
        (
            q.edge_name(*a).to_string(),
            q.vertex_name(q.source(*a)).to_string(),
            q.vertex_name(q.range(*a)).to_string(),
        )
    };
    let saturated = Graph::new(verts.iter().map(name_v), edges.iter().map(edge_triple))?;

    let y: Vec<VertexId> = verts
        .iter()
        .copied()
        .filter(|&v| {
            let sv = saturated.vertex(q.vertex_name(v)).expect("vertex of saturated graph");
            saturated.is_regular(sv) && !q_regular(v)
        })
        .collect();

    let mut taken: HashSet<String> = q.vertex_names().iter().cloned().collect();
    taken.extend(q.edges().iter().map(|e| e.id.clone()));
    let mut vertex_entries: Vec<(String, Provenance)> = verts
        .iter()
        .map(|v| {
            let tag = if original_verts.contains(v) {
                Provenance::Original
            } else {
                Provenance::AddedFromQ
            };
            (name_v(v), tag)
        })
        .collect();
    let mut edge_entries: Vec<((String, String, String), Provenance)> = edges
        .iter()
        .map(|a| {
            let tag = if original_edges.contains(a) {
                Provenance::Original
            } else {
                Provenance::AddedFromQ
            };
            (edge_triple(a), tag)
        })
        .collect();

    let mut primed_name = std::collections::HashMap::new();
    for v in &y {
        let p = fresh(&format!("{}'", q.vertex_name(*v)), &mut taken);
        primed_name.insert(*v, p.clone());
        vertex_entries.push((p, Provenance::Primed { of: name_v(v) }));
    }
    // a' for every edge a of 𝔯 whose source lies in Y: s(a') = s(a)', r(a') = r(a)
    for a in &edges {
        if let Some(src) = primed_name.get(&q.source(*a)) {
            let p = fresh(&format!("{}'", q.edge_name(*a)), &mut taken);
            edge_entries.push((
                (p, src.clone(), q.vertex_name(q.range(*a)).to_string()),
                Provenance::Primed {
                    of: q.edge_name(*a).to_string(),
                },
            ));
        }
    }

    let rbar = Graph::new(
        vertex_entries.iter().map(|(n, _)| n.clone()),
        edge_entries.iter().map(|(t, _)| t.clone()),
    )?;
    let mut vertex_tags = vec![Provenance::Original; rbar.vertex_count()];
    for (n, tag) in vertex_entries {
        vertex_tags[rbar.vertex(&n).unwrap().index()] = tag;
    }
    let mut edge_tags = vec![Provenance::Original; rbar.edge_count()];
    for ((n, _, _), tag) in edge_entries {
        edge_tags[rbar.edge_id(&n).unwrap().index()] = tag;
    }
    if q.is_acyclic() {
        assert!(
            rbar.is_acyclic(),
            "completion of a subgraph of an acyclic graph must be acyclic"
        );
    }
    Ok(CkCompletion {
        rbar,
        saturated,
        y: y.iter().map(name_v).collect(),
        vertex_tags,
        edge_tags,
    })
}

fn fresh(candidate: &str, taken: &mut HashSet<String>) -> String {
    let mut name = candidate.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    taken.insert(name.clone());
    name
}

/// `g` with tails and heads of length `depth` attached, plus the embedding of
/// `g` into it.
#[derive(Debug, Clone)]
pub struct Desingularized {
    pub graph: Graph,
    pub vertex_map: Vec<VertexId>,
    pub edge_map: Vec<EdgeId>,
}

/// Every sink `v` gets a tail `v → v~1 → ⋯ → v~depth` and every source a head
/// `v^depth → ⋯ → v^1 → v`. Infinite emitters and receivers cannot occur in a
/// finite graph, so those branches of the surgery do not exist here.
pub fn desingularize_truncated(g: &Graph, depth: usize) -> Result<Desingularized, GraphError> {
    if depth < 1 {
        return Err(GraphError::InvalidDepth);
    }
    let mut taken: HashSet<String> = g.vertex_names().iter().cloned().collect();
    taken.extend(g.edges().iter().map(|e| e.id.clone()));
    let mut vertices: Vec<String> = g.vertex_names().to_vec();
    let mut edges: Vec<(String, String, String)> = g
        .edges()
        .iter()
        .map(|e| {
            (
                e.id.clone(),
                g.vertex_name(e.source).to_string(),
                g.vertex_name(e.range).to_string(),
            )
        })
        .collect();

    for v in g.vertices() {
        let name = g.vertex_name(v);
        if g.is_sink(v) {
            let mut prev = name.to_string();
            for i in 1..=depth {
                let next = fresh(&format!("{name}~{i}"), &mut taken);
                let f = fresh(&format!("{name}~f{i}"), &mut taken);
                edges.push((f, prev.clone(), next.clone()));
                vertices.push(next.clone());
                prev = next;
            }
        }
        if g.is_source(v) {
            let mut prev = name.to_string();
            for i in 1..=depth {
                let next = fresh(&format!("{name}^{i}"), &mut taken);
                let h = fresh(&format!("{name}^h{i}"), &mut taken);
                edges.push((h, next.clone(), prev.clone()));
                vertices.push(next.clone());
                prev = next;
            }
        }
    }
    let graph = Graph::new(vertices, edges)?;
    let vertex_map = g.vertices().map(|v| graph.vertex(g.vertex_name(v)).unwrap()).collect();
    let edge_map = g.edge_ids().map(|e| graph.edge_id(g.edge_name(e)).unwrap()).collect();
    let graph = match g.name() {
        Some(n) => graph.with_name(format!("{n}~desing{depth}")),
        None => graph,
    };
    Ok(Desingularized {
        graph,
        vertex_map,
        edge_map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::find_cycles;

    fn two_loops() -> Graph {
        Graph::new(["v"], [("a", "v", "v"), ("b", "v", "v")]).unwrap()
    }

    #[test]
    fn ck_subgraph_examples() {
        let q = two_loops();
        assert!(is_ck_subgraph(&q, &q).unwrap());
        let r = Graph::new(["v"], [("a", "v", "v")]).unwrap();
        assert!(!is_ck_subgraph(&r, &q).unwrap());
        let bare = Graph::new(["v"], Vec::<(&str, &str, &str)>::new()).unwrap();
        assert!(is_ck_subgraph(&bare, &q).unwrap());
        let alien = Graph::new(["x"], Vec::<(&str, &str, &str)>::new()).unwrap();
        assert!(matches!(is_ck_subgraph(&alien, &q), Err(GraphError::NotASubgraph(_))));
        let wrong_ends = Graph::new(["v", "w"], [("a", "w", "v")]).unwrap();
        let q2 = Graph::new(["v", "w"], [("a", "v", "w")]).unwrap();
        assert!(matches!(
            is_ck_subgraph(&wrong_ends, &q2),
            Err(GraphError::NotASubgraph(_))
        ));
    }

    #[test]
    fn completion_examples() {
        let q = two_loops();
        let c = ck_completion(&q, &q).unwrap();
        assert_eq!(c.rbar, q);
        assert!(c.y.is_empty());
        assert!(c
            .vertex_tags
            .iter()
            .chain(&c.edge_tags)
            .all(|t| *t == Provenance::Original));

        let r = Graph::new(["v"], [("a", "v", "v")]).unwrap();
        let c = ck_completion(&r, &q).unwrap();
        assert_eq!(c.rbar, q);
        assert!(c.y.is_empty());
        assert_eq!(
            c.edge_tags[c.rbar.edge_id("b").unwrap().index()],
            Provenance::AddedFromQ
        );

        let q = Graph::new(["u", "v"], [("a", "v", "u"), ("b", "v", "u")]).unwrap();
        let r = Graph::new(["u", "v"], [("a", "v", "u")]).unwrap();
        let c = ck_completion(&r, &q).unwrap();
        assert_eq!(c.rbar, q);
        assert!(c.y.is_empty());
        assert!(is_ck_subgraph(&c.rbar, &q).unwrap());
    }

    #[test]
    fn completion_with_infinite_receiver_primes() {
        // v receives a and b in q, r keeps only a, and v is declared an infinite receiver
        let q = Graph::new(["u", "v", "w"], [("a", "u", "v"), ("b", "w", "v"), ("c", "v", "u")]).unwrap();
        let r = Graph::new(["u", "v"], [("a", "u", "v"), ("c", "v", "u")]).unwrap();
        let v = q.vertex("v").unwrap();
        let c = ck_completion_with_receivers(&r, &q, &[v]).unwrap();
        // u is regular in q and receives c in r, so nothing new at u; v keeps only a
        assert_eq!(c.saturated, r);
        assert_eq!(c.y, ["v"]);
        let vp = c.rbar.vertex("v'").unwrap();
        assert!(c.rbar.is_source(vp));
        let cp = c.rbar.edge_id("c'").unwrap();
        assert_eq!(c.rbar.source(cp), vp);
        assert_eq!(c.rbar.vertex_name(c.rbar.range(cp)), "u");
        assert_eq!(c.edge_origin(cp), "c");
    }

    #[test]
    fn desingularize_examples() {
        let lone = Graph::new(["v"], Vec::<(&str, &str, &str)>::new()).unwrap();
        let d = desingularize_truncated(&lone, 2).unwrap();
        assert_eq!(d.graph.vertex_count(), 5);
        assert_eq!(d.graph.edge_count(), 4);
        let v = d.vertex_map[0];
        assert!(!d.graph.is_sink(v) && !d.graph.is_source(v));
        assert!(d.graph.is_acyclic());
        assert_eq!(d.graph.sources().len(), 1);
        assert_eq!(d.graph.sinks().len(), 1);

        let lp = Graph::new(["v"], [("a", "v", "v")]).unwrap();
        assert_eq!(desingularize_truncated(&lp, 3).unwrap().graph, lp);
        assert!(matches!(desingularize_truncated(&lp, 0), Err(GraphError::InvalidDepth)));

        let entry = Graph::new(["v", "w"], [("a", "v", "v"), ("c", "w", "v")]).unwrap();
        let d = desingularize_truncated(&entry, 2).unwrap();
        let before = find_cycles(&entry);
        let after = find_cycles(&d.graph);
        assert_eq!(before.len(), after.len());
        for (b, a) in before.iter().zip(&after) {
            let mapped: Vec<EdgeId> = b.entries.iter().map(|e| d.edge_map[e.index()]).collect();
            assert_eq!(mapped, a.entries);
        }
    }
}
