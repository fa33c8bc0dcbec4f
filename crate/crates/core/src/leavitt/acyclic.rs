//! Block decomposition of `L_Q` for finite acyclic `Q`.
//!
//! For each source `v` let `F_v = {α : s(α) = v}`. The monomials `s_α t_β`
//! with `α, β ∈ F_v` form a system of `n_v × n_v` matrix units, and `L_Q` is
//! the direct sum of these full matrix algebras.

use std::collections::HashMap;
use std::sync::Arc;

use crate::graphs::{enumerate_paths, Graph, Path, VertexId};

use super::element::Element;
use super::monomial::Monomial;
use super::scalar::Scalar;
use super::LeavittError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceBlock {
    pub source: VertexId,
    /// `F_v` in enumeration order (the trivial path first).
    pub paths: Vec<Path>,
}

impl SourceBlock {
    pub fn dimension(&self) -> usize {
        self.paths.len()
    }
}

#[derive(Debug, Clone)]
pub struct AcyclicDecomposition {
    graph: Arc<Graph>,
    pub blocks: Vec<SourceBlock>,
    index: HashMap<Path, (usize, usize)>,
}

/// Row-major square matrix with generic coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix<C> {
    pub n: usize,
    pub entries: Vec<C>,
}

impl<C: Scalar> BlockMatrix<C> {
    pub fn zeros(n: usize) -> Self {
        BlockMatrix {
            n,
            entries: vec![C::zero(); n * n],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.entries[i * self.n + j]
    }

    pub fn to_cmatrix(&self) -> crate::CMatrix {
        crate::CMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j).to_c64())
    }
}

pub fn acyclic_decomposition(graph: &Arc<Graph>) -> Result<AcyclicDecomposition, LeavittError> {
    if !graph.is_acyclic() {
        return Err(LeavittError::CyclicGraph);
    }
    let paths = enumerate_paths(graph, graph.vertex_count(), None);
    let mut blocks = Vec::new();
    let mut index = HashMap::new();
    for v in graph.sources() {
        let fv: Vec<Path> = paths.iter().filter(|p| p.source() == v).cloned().collect();
        for (i, p) in fv.iter().enumerate() {
            index.insert(p.clone(), (blocks.len(), i));
        }
        blocks.push(SourceBlock { source: v, paths: fv });
    }
    Ok(AcyclicDecomposition {
        graph: Arc::clone(graph),
        blocks,
        index,
    })
}

impl AcyclicDecomposition {
    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    /// `Σ_v n_v²`, the dimension of `L_Q`.
    pub fn total_dimension(&self) -> usize {
        self.blocks.iter().map(|b| b.dimension().pow(2)).sum()
    }

    /// `(block, row)` of a path in some `F_v`.
    pub fn locate(&self, p: &Path) -> Option<(usize, usize)> {
        self.index.get(p).copied()
    }

    /// Every matrix unit `s_α t_β`, block by block.
    pub fn matrix_units(&self) -> Vec<(usize, Monomial)> {
        let mut out = Vec::new();
        for (bi, b) in self.blocks.iter().enumerate() {
            for a in &b.paths {
                for c in &b.paths {
                    out.push((
                        bi,
                        Monomial {
                            alpha: a.clone(),
                            beta: c.clone(),
                        },
                    ));
                }
            }
        }
        out
    }

    /// Rewrites `x` in matrix units by expanding every term with CK2 until its
    /// common source is a source of the graph.
    pub fn full_expansion<C: Scalar>(&self, x: &Element<C>) -> Result<Element<C>, LeavittError> {
        x.check_same_graph(&Element::zero(&self.graph))?;
        let g = &*self.graph;
        let mut out = Element::zero(&self.graph);
        let mut stack: Vec<(Monomial, C)> = x.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        while let Some((m, c)) = stack.pop() {
            let w = m.alpha.source();
            if g.is_source(w) {
                out.add_term(m, c);
                continue;
            }
            for &a in g.receives(w) {
                stack.push((
                    Monomial {
                        alpha: m.alpha.push(g, a).expect("r(a) = w"),
                        beta: m.beta.push(g, a).expect("r(a) = w"),
                    },
                    c.clone(),
                ));
            }
        }
        Ok(out)
    }

    /// The component of `x` in each block, as an `n_v × n_v` matrix.
    pub fn block_components<C: Scalar>(&self, x: &Element<C>) -> Result<Vec<BlockMatrix<C>>, LeavittError> {
        let expanded = self.full_expansion(x)?;
        let mut out: Vec<BlockMatrix<C>> = self.blocks.iter().map(|b| BlockMatrix::zeros(b.dimension())).collect();
        for (m, c) in expanded.terms() {
            let (bi, i) = self.locate(&m.alpha).expect("expanded terms start at a source");
            let (bj, j) = self.locate(&m.beta).expect("expanded terms start at a source");
            debug_assert_eq!(bi, bj);
            let n = out[bi].n;
            out[bi].entries[i * n + j] = c.clone();
        }
        Ok(out)
    }

    /// The element with the given block matrices.
    pub fn from_blocks<C: Scalar>(&self, blocks: &[BlockMatrix<C>]) -> Element<C> {
        let mut out = Element::zero(&self.graph);
        for (b, mat) in self.blocks.iter().zip(blocks) {
            for (i, a) in b.paths.iter().enumerate() {
                for (j, c) in b.paths.iter().enumerate() {
                    out.add_term(
                        Monomial {
                            alpha: a.clone(),
                            beta: c.clone(),
                        },
                        mat.get(i, j).clone(),
                    );
                }
            }
        }
        out
    }
}
