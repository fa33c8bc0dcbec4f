use std::cmp::Ordering;

use super::{EdgeId, Graph, GraphError, VertexId};

/// A finite path `α₁⋯αₙ`, or the trivial path at a vertex when `n = 0`.
///
/// `base` always holds the source vertex `s(α)`, so the trivial path at `v`
/// and every path ending at `v` share the same base.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    base: VertexId,
    edges: Vec<EdgeId>,
}

impl Path {
    pub fn vertex(v: VertexId) -> Self {
        Path {
            base: v,
            edges: Vec::new(),
        }
    }

    pub fn edge(g: &Graph, e: EdgeId) -> Self {
        Path {
            base: g.source(e),
            edges: vec![e],
        }
    }

    /// Validates composability `s(αᵢ) = r(αᵢ₊₁)`; `edges` must be nonempty.
    pub fn new(g: &Graph, edges: Vec<EdgeId>) -> Result<Self, GraphError> {
        let last = *edges
            .last()
            .ok_or_else(|| GraphError::UnknownVertex("<empty path without base>".into()))?;
        for pair in edges.windows(2) {
            if g.source(pair[0]) != g.range(pair[1]) {
                return Err(GraphError::NotComposable(
                    g.edge_name(pair[0]).to_string(),
                    g.edge_name(pair[1]).to_string(),
                ));
            }
        }
        Ok(Path {
            base: g.source(last),
            edges,
        })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn source(&self) -> VertexId {
        self.base
    }

    pub fn range(&self, g: &Graph) -> VertexId {
        match self.edges.first() {
            Some(&e) => g.range(e),
            None => self.base,
        }
    }

    /// The edge at the source end, `α_{|α|}`.
    pub fn last_edge(&self) -> Option<EdgeId> {
        self.edges.last().copied()
    }

    /// `αe` for an edge with `r(e) = s(α)`.
    pub fn push(&self, g: &Graph, e: EdgeId) -> Option<Path> {
        if g.range(e) != self.base {
            return None;
        }
        let mut edges = self.edges.clone();
        edges.push(e);
        Some(Path {
            base: g.source(e),
            edges,
        })
    }

    /// Drops the last edge; `None` for a trivial path.
    pub fn pop(&self, g: &Graph) -> Option<Path> {
        let last = *self.edges.last()?;
        let edges = self.edges[..self.edges.len() - 1].to_vec();
        Some(Path {
            base: g.range(last),
            edges,
        })
    }

    /// The concatenation `self · other`, defined when `s(self) = r(other)`.
    pub fn concat(&self, g: &Graph, other: &Path) -> Option<Path> {
        if self.base != other.range(g) {
            return None;
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Some(Path {
            base: other.base,
            edges,
        })
    }

    /// Returns `γ` with `self = prefix · γ`.
    pub fn strip_prefix(&self, g: &Graph, prefix: &Path) -> Option<Path> {
        if prefix.is_trivial() {
            return (self.range(g) == prefix.base).then(|| self.clone());
        }
        if self.edges.len() < prefix.edges.len() || !self.edges.starts_with(&prefix.edges) {
            return None;
        }
        Some(Path {
            base: self.base,
            edges: self.edges[prefix.edges.len()..].to_vec(),
        })
    }

    pub fn is_valid(&self, g: &Graph) -> bool {
        if self.base.index() >= g.vertex_count() || self.edges.iter().any(|e| e.index() >= g.edge_count()) {
            return false;
        }
        match self.edges.last() {
            None => true,
            Some(&last) => {
                g.source(last) == self.base && self.edges.windows(2).all(|w| g.source(w[0]) == g.range(w[1]))
            }
        }
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on the edge list, then by base vertex.
impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.edges.cmp(&other.edges).then(self.base.cmp(&other.base))
    }
}

/// Outcome of comparing two paths under the prefix preorder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathOrder {
    Equal,
    /// `α = βγ` with `|γ| ≥ 1`.
    AlphaExtendsBeta(Path),
    /// `β = αγ` with `|γ| ≥ 1`.
    BetaExtendsAlpha(Path),
    Incomparable,
}

pub fn compare_paths(g: &Graph, alpha: &Path, beta: &Path) -> PathOrder {
    if alpha == beta {
        return PathOrder::Equal;
    }
    if let Some(gamma) = alpha.strip_prefix(g, beta) {
        if !gamma.is_trivial() {
            return PathOrder::AlphaExtendsBeta(gamma);
        }
    }
    if let Some(gamma) = beta.strip_prefix(g, alpha) {
        if !gamma.is_trivial() {
            return PathOrder::BetaExtendsAlpha(gamma);
        }
    }
    PathOrder::Incomparable
}

/// All paths of length `0..=max_len`: vertices first, then by length, each
/// length block in lexicographic edge order. `filter` keeps only paths with
/// the given `(range, source)`.
pub fn enumerate_paths(g: &Graph, max_len: usize, filter: Option<(VertexId, VertexId)>) -> Vec<Path> {
    let mut out: Vec<Path> = g.vertices().map(Path::vertex).collect();
    let mut frontier: Vec<Path> = g.edge_ids().map(|e| Path::edge(g, e)).collect();
    let mut len = 1;
    while len <= max_len && !frontier.is_empty() {
        frontier.sort();
        let next: Vec<Path> = frontier
            .iter()
            .flat_map(|p| g.receives(p.source()).iter().filter_map(move |&e| p.push(g, e)))
            .collect();
        out.append(&mut frontier);
        frontier = next;
        len += 1;
    }
    if let Some((r, s)) = filter {
        out.retain(|p| p.range(g) == r && p.source() == s);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn chain() -> Graph {
        // u <-a- v <-b- w
        Graph::new(["u", "v", "w"], [("a", "v", "u"), ("b", "w", "v")]).unwrap()
    }

    fn labels(g: &Graph, ps: &[Path]) -> Vec<String> {
        ps.iter().map(|p| g.path_label(p)).collect()
    }

    #[test]
    fn enumerate_examples() {
        let a2 = Graph::new(["v", "w"], [("a", "v", "w")]).unwrap();
        assert_eq!(labels(&a2, &enumerate_paths(&a2, 2, None)), ["v", "w", "a"]);
        let lp = Graph::new(["v"], [("a", "v", "v")]).unwrap();
        assert_eq!(labels(&lp, &enumerate_paths(&lp, 3, None)), ["v", "a", "aa", "aaa"]);
        assert_eq!(labels(&chain(), &enumerate_paths(&chain(), 0, None)), ["u", "v", "w"]);
        let g = chain();
        let u = g.vertex("u").unwrap();
        let w = g.vertex("w").unwrap();
        assert_eq!(labels(&g, &enumerate_paths(&g, 5, Some((u, w)))), ["ab"]);
    }

    #[test]
    fn compare_examples() {
        let g = chain();
        let a = Path::edge(&g, g.edge_id("a").unwrap());
        let b = Path::edge(&g, g.edge_id("b").unwrap());
        let ab = a.concat(&g, &b).unwrap();
        assert_eq!(compare_paths(&g, &ab, &a), PathOrder::AlphaExtendsBeta(b.clone()));
        assert_eq!(compare_paths(&g, &a, &ab), PathOrder::BetaExtendsAlpha(b.clone()));
        assert_eq!(compare_paths(&g, &a, &b), PathOrder::Incomparable);
        let v = Path::vertex(g.vertex("v").unwrap());
        assert_eq!(compare_paths(&g, &v, &v), PathOrder::Equal);
        // the trivial path at r(a) is a prefix of a
        let u = Path::vertex(g.vertex("u").unwrap());
        assert_eq!(compare_paths(&g, &a, &u), PathOrder::AlphaExtendsBeta(a.clone()));
        assert_eq!(compare_paths(&g, &a, &v), PathOrder::Incomparable);
    }

    #[test]
    fn push_pop_and_validation() {
        let g = chain();
        let a = Path::edge(&g, g.edge_id("a").unwrap());
        let ab = a.push(&g, g.edge_id("b").unwrap()).unwrap();
        assert_eq!(ab.pop(&g).unwrap(), a);
        assert!(a.push(&g, g.edge_id("a").unwrap()).is_none());
        assert!(Path::new(&g, vec![g.edge_id("b").unwrap(), g.edge_id("a").unwrap()]).is_err());
        assert!(ab.is_valid(&g));
        let two_loops = Graph::new(["v"], [("a", "v", "v"), ("b", "v", "v")]).unwrap();
        let ps = enumerate_paths(&two_loops, 4, None);
        let uniq: HashSet<_> = ps.iter().collect();
        assert_eq!(uniq.len(), ps.len());
        assert_eq!(ps.len(), 1 + 2 + 4 + 8 + 16);
    }
}
