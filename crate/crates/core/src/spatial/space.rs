use std::sync::Arc;

use crate::graphs::{EdgeId, Graph, VertexId};

use super::SpatialError;

/// A finite set of atoms with positive weights, optionally partitioned by the
/// vertices of a graph and refined by edge supports.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasureSpace {
    pub atoms: Vec<String>,
    pub weights: Vec<f64>,
    pub layout: Option<Layout>,
}

/// `X = ⊔ X_v` and `X_a ⊆ X_{r(a)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub graph: Arc<Graph>,
    pub vertex_of: Vec<VertexId>,
    /// Indexed by edge; atom indices in increasing order.
    pub edge_support: Vec<Vec<usize>>,
}

impl AtomicMeasureSpace {
    /// `n` atoms `x0, x1, ...` of weight one.
    pub fn uniform(n: usize) -> Self {
        Self::weighted(vec![1.0; n]).expect("unit weights are valid")
    }

    pub fn weighted(weights: Vec<f64>) -> Result<Self, SpatialError> {
        let atoms = (0..weights.len()).map(|i| format!("x{i}")).collect();
        Self::new(atoms, weights, None)
    }

    pub fn new(atoms: Vec<String>, weights: Vec<f64>, layout: Option<Layout>) -> Result<Self, SpatialError> {
        let space = AtomicMeasureSpace { atoms, weights, layout };
        space.validate()?;
        Ok(space)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `(Σ μᵢ |ξᵢ|ᵖ)^{1/p}`.
    pub fn norm(&self, xi: &[num_complex::Complex64], p: f64) -> f64 {
        xi.iter()
            .zip(&self.weights)
            .map(|(z, w)| w * z.norm().powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
    }

    pub fn atom_index(&self, name: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == name)
    }

    pub fn graph(&self) -> Option<&Arc<Graph>> {
        self.layout.as_ref().map(|l| &l.graph)
    }

    /// `X_v`, in atom order.
    pub fn vertex_atoms(&self, v: VertexId) -> Vec<usize> {
        match &self.layout {
            Some(l) => (0..self.len()).filter(|&i| l.vertex_of[i] == v).collect(),
            None => Vec::new(),
        }
    }

    pub fn edge_atoms(&self, a: EdgeId) -> &[usize] {
        match &self.layout {
            Some(l) => &l.edge_support[a.index()],
            None => &[],
        }
    }

    /// Checks weights and, when a layout is present, the partition and the
    /// support condition `X_v = ⊔_{a ∈ r⁻¹(v)} X_a` at regular `v`.
    pub fn validate(&self) -> Result<(), SpatialError> {
        let bad = |m: String| Err(SpatialError::InvalidSpace(m));
        if self.atoms.len() != self.weights.len() {
            return bad(format!("{} atoms but {} weights", self.atoms.len(), self.weights.len()));
        }
        let mut names = self.atoms.clone();
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return bad(format!("duplicate atom `{}`", w[0]));
        }
        if let Some(i) = self.weights.iter().position(|&w| !(w.is_finite() && w > 0.0)) {
            return bad(format!(
                "atom `{}` has non-positive weight {}",
                self.atoms[i], self.weights[i]
            ));
        }
        let Some(l) = &self.layout else {
            return Ok(());
        };
        let g = &*l.graph;
        if l.vertex_of.len() != self.len() || l.edge_support.len() != g.edge_count() {
            return bad("layout tables do not match the atoms and edges".into());
        }
        for v in g.vertices() {
            let xv = self.vertex_atoms(v);
            if xv.is_empty() {
                return bad(format!("X_{} is empty", g.vertex_name(v)));
            }
            if !g.is_regular(v) {
                continue;
            }
            let mut covered: Vec<usize> = Vec::new();
            for &a in g.receives(v) {
                let xa = &l.edge_support[a.index()];
                if xa.iter().any(|&i| i >= self.len() || l.vertex_of[i] != v) {
                    return bad(format!("X_{} is not inside X_{}", g.edge_name(a), g.vertex_name(v)));
                }
                covered.extend(xa);
            }
            covered.sort_unstable();
            if covered != xv {
                return bad(format!("edge supports do not partition X_{}", g.vertex_name(v)));
            }
        }
        Ok(())
    }
}
