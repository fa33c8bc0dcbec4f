//! Finite directed multigraphs.
//!
//! Conventions: an edge `a` runs from its source `s(a)` to its range `r(a)`.
//! A vertex `v` is a *source* when `r⁻¹(v)` is empty and a *sink* when
//! `s⁻¹(v)` is empty. On a finite graph every non-source is regular. Paths
//! are written range-first: `α = α₁α₂⋯αₙ` with `s(αᵢ) = r(αᵢ₊₁)`, so
//! `r(α) = r(α₁)` and `s(α) = s(αₙ)`.

mod cycles;
mod json;
pub mod library;
mod path;
mod surgery;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

pub use cycles::{find_cycles, find_nonreturning_path, is_nonreturning, satisfies_condition_l, Cycle};
pub use json::GraphJson;
pub use path::{compare_paths, enumerate_paths, Path, PathOrder};
pub use surgery::{
    ck_completion, ck_completion_with_receivers, desingularize_truncated, is_ck_subgraph, subgraph_embedding,
    CkCompletion, Desingularized, Provenance, SubgraphEmbedding,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{edge}` refers to unknown vertex `{vertex}`")]
    DanglingEdge { edge: String, vertex: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("edges are not composable: s({0}) != r({1})")]
    NotComposable(String, String),
    #[error("not a subgraph: {0}")]
    NotASubgraph(String),
    #[error("no nonreturning path of length >= {min_len} with range `{vertex}`")]
    NoSuchPath { vertex: String, min_len: usize },
    #[error("desingularization depth must be at least 1")]
    InvalidDepth,
    #[error("unsupported graph convention `{0}` (expected `paper-rs`)")]
    Convention(String),
    #[error("malformed graph json: {0}")]
    Json(String),
}

/// Classification of a vertex by the sizes of `r⁻¹(v)` and `s⁻¹(v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexClass {
    /// `r⁻¹(v) = ∅` and `s⁻¹(v) ≠ ∅`.
    Source,
    /// Receives nothing and emits nothing.
    SourceAndSink,
    /// Receives at least one edge and emits at least one.
    Regular,
    /// Receives at least one edge and emits none.
    RegularSink,
}

impl VertexClass {
    pub fn is_source(self) -> bool {
        matches!(self, VertexClass::Source | VertexClass::SourceAndSink)
    }

    pub fn is_sink(self) -> bool {
        matches!(self, VertexClass::SourceAndSink | VertexClass::RegularSink)
    }

    pub fn is_regular(self) -> bool {
        matches!(self, VertexClass::Regular | VertexClass::RegularSink)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub source: VertexId,
    pub range: VertexId,
}

/// A finite directed multigraph.
///
/// Vertex and edge ids are stored sorted, so `VertexId`/`EdgeId` order agrees
/// with the lexicographic order of the string ids.
#[derive(Debug, Clone)]
pub struct Graph {
    name: Option<String>,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_lookup: HashMap<String, VertexId>,
    edge_lookup: HashMap<String, EdgeId>,
    receives: Vec<Vec<EdgeId>>,
    emits: Vec<Vec<EdgeId>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph from vertex ids and `(edge id, source, range)` triples.
    pub fn new<V, E, S>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (S, S, S)>,
        S: Into<String>,
    {
        let mut names: Vec<String> = vertices.into_iter().map(Into::into).collect();
        names.sort();
        for pair in names.windows(2) {
            if pair[0] == pair[1] {
                return Err(GraphError::DuplicateVertex(pair[0].clone()));
            }
        }
        let vertex_lookup: HashMap<String, VertexId> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), VertexId(i as u32)))
            .collect();

        let mut raw: Vec<(String, String, String)> = edges
            .into_iter()
            .map(|(id, s, r)| (id.into(), s.into(), r.into()))
            .collect();
        raw.sort_by(|a, b| a.0.cmp(&b.0));
        for pair in raw.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(GraphError::DuplicateEdge(pair[0].0.clone()));
            }
        }
        let mut edge_list = Vec::with_capacity(raw.len());
        for (id, s, r) in raw {
            let lookup = |v: &String| {
                vertex_lookup.get(v).copied().ok_or_else(|| GraphError::DanglingEdge {
                    edge: id.clone(),
                    vertex: v.clone(),
                })
            };
            let source = lookup(&s)?;
            let range = lookup(&r)?;
            edge_list.push(Edge { id, source, range });
        }

        let mut receives = vec![Vec::new(); names.len()];
        let mut emits = vec![Vec::new(); names.len()];
        let mut edge_lookup = HashMap::with_capacity(edge_list.len());
        for (i, e) in edge_list.iter().enumerate() {
            let id = EdgeId(i as u32);
            receives[e.range.index()].push(id);
            emits[e.source.index()].push(id);
            edge_lookup.insert(e.id.clone(), id);
        }

        Ok(Graph {
            name: None,
            vertices: names,
            edges: edge_list,
            vertex_lookup,
            edge_lookup,
            receives,
            emits,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexId> + '_ {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl ExactSizeIterator<Item = EdgeId> + '_ {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.index()]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.index()]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.index()].id
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId, GraphError> {
        self.vertex_lookup
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn edge_id(&self, name: &str) -> Result<EdgeId, GraphError> {
        self.edge_lookup
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownEdge(name.to_string()))
    }

    pub fn source(&self, e: EdgeId) -> VertexId {
        self.edges[e.index()].source
    }

    pub fn range(&self, e: EdgeId) -> VertexId {
        self.edges[e.index()].range
    }

    /// `r⁻¹(v)`, in edge order.
    pub fn receives(&self, v: VertexId) -> &[EdgeId] {
        &self.receives[v.index()]
    }

    /// `s⁻¹(v)`, in edge order.
    pub fn emits(&self, v: VertexId) -> &[EdgeId] {
        &self.emits[v.index()]
    }

    pub fn classify(&self, v: VertexId) -> VertexClass {
        match (self.receives(v).is_empty(), self.emits(v).is_empty()) {
            (true, true) => VertexClass::SourceAndSink,
            (true, false) => VertexClass::Source,
            (false, true) => VertexClass::RegularSink,
            (false, false) => VertexClass::Regular,
        }
    }

    pub fn is_source(&self, v: VertexId) -> bool {
        self.receives(v).is_empty()
    }

    pub fn is_sink(&self, v: VertexId) -> bool {
        self.emits(v).is_empty()
    }

    pub fn is_regular(&self, v: VertexId) -> bool {
        !self.receives(v).is_empty()
    }

    pub fn sources(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| self.is_source(v)).collect()
    }

    pub fn sinks(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| self.is_sink(v)).collect()
    }

    /// True when the graph has no cycle (Kahn's algorithm).
    pub fn is_acyclic(&self) -> bool {
        let mut indegree: Vec<usize> = self.vertices().map(|v| self.receives(v).len()).collect();
        let mut stack: Vec<VertexId> = self.vertices().filter(|v| indegree[v.index()] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &e in self.emits(v) {
                let r = self.range(e);
                indegree[r.index()] -= 1;
                if indegree[r.index()] == 0 {
                    stack.push(r);
                }
            }
        }
        seen == self.vertex_count()
    }

    /// Human-readable label of a path: the vertex id for a trivial path,
    /// otherwise the edge ids (concatenated when all are one character).
    pub fn path_label(&self, p: &Path) -> String {
        if p.is_trivial() {
            return self.vertex_name(p.source()).to_string();
        }
        let names: Vec<&str> = p.edges().iter().map(|&e| self.edge_name(e)).collect();
        if names.iter().all(|n| n.chars().count() == 1) {
            names.concat()
        } else {
            names.join(".")
        }
    }

    /// Parses a path from its edge-id list; the empty list denotes the trivial
    /// path at `base`.
    pub fn path_from_names(&self, edges: &[impl AsRef<str>], base: Option<&str>) -> Result<Path, GraphError> {
        let ids = edges
            .iter()
            .map(|n| self.edge_id(n.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        if ids.is_empty() {
            let base = base.ok_or_else(|| GraphError::UnknownVertex(String::new()))?;
            return Ok(Path::vertex(self.vertex(base)?));
        }
        let p = Path::new(self, ids)?;
        if let Some(b) = base {
            if self.vertex(b)? != p.source() {
                return Err(GraphError::NotComposable(b.to_string(), self.path_label(&p)));
            }
        }
        Ok(p)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(")?;
        if let Some(n) = &self.name {
            write!(f, "{n}: ")?;
        }
        write!(f, "{} vertices, {} edges)", self.vertex_count(), self.edge_count())
    }
}

/// Classifies `v`, failing for an unknown vertex id.
pub fn classify_vertex(g: &Graph, v: &str) -> Result<VertexClass, GraphError> {
    Ok(g.classify(g.vertex(v)?))
}
