use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_complex::Complex64;

use crate::graphs::{EdgeId, Graph, Path, VertexId};
use crate::leavitt::{Element, Scalar};
use crate::CMatrix;

use super::space::{AtomicMeasureSpace, Layout};
use super::system::{spi_matrix, spi_reverse, SpatialOperator, SpatialSystem};
use super::SpatialError;

/// Families larger than this are refused.
pub const MAX_ATOMS: usize = 4096;

/// Positive atom counts with `|X_v| = Σ_{a ∈ r⁻¹(v)} |X_{s(a)}|` at every
/// regular `v`.
///
/// Sources and entry-free cycles are free; they get `free[v]` atoms (default
/// 1, for a cycle the value of its first listed vertex). Any other cycle
/// forces a zero count and makes the system unsolvable.
pub fn atomic_size_assignment(g: &Graph, free: &BTreeMap<VertexId, usize>) -> Result<Vec<usize>, SpatialError> {
    let n = g.vertex_count();
    let mut size: Vec<Option<usize>> = vec![None; n];
    let free_for = |v: VertexId| free.get(&v).copied().unwrap_or(1).max(1);
    for v in g.vertices().filter(|&v| g.is_source(v)) {
        size[v.index()] = Some(free_for(v));
    }
    loop {
        let mut progress = false;
        for v in g.vertices() {
            if size[v.index()].is_some() {
                continue;
            }
            let preds: Option<Vec<usize>> = g.receives(v).iter().map(|&a| size[g.source(a).index()]).collect();
            if let Some(preds) = preds {
                let total: usize = preds.iter().sum();
                if total > MAX_ATOMS {
                    return Err(SpatialError::TooLarge(total));
                }
                size[v.index()] = Some(total);
                progress = true;
            }
        }
        if size.iter().all(Option::is_some) {
            break;
        }
        if progress {
            continue;
        }
        match entry_free_cycle(g, &size) {
            Some(cycle) => {
                let k = free_for(cycle[0]);
                for v in cycle {
                    size[v.index()] = Some(k);
                }
            }
            None => {
                let stuck: Vec<&str> = g
                    .vertices()
                    .filter(|v| size[v.index()].is_none())
                    .map(|v| g.vertex_name(v))
                    .collect();
                return Err(SpatialError::Unsolvable(format!(
                    "a cycle with an entry forces an empty X_v among {{{}}}",
                    stuck.join(", ")
                )));
            }
        }
    }
    Ok(size.into_iter().map(|s| s.expect("all assigned")).collect())
}

// an unassigned cycle along which every vertex has exactly one incoming edge
fn entry_free_cycle(g: &Graph, size: &[Option<usize>]) -> Option<Vec<VertexId>> {
    for start in g.vertices().filter(|v| size[v.index()].is_none()) {
        let mut chain = vec![start];
        let mut cur = start;
        while let [a] = g.receives(cur) {
            let prev = g.source(*a);
            if prev == start {
                return Some(chain);
            }
            if chain.contains(&prev) || size[prev.index()].is_some() {
                break;
            }
            chain.push(prev);
            cur = prev;
        }
    }
    None
}

/// Knobs for [`atomic_ck_family`].
#[derive(Debug, Clone, Default)]
pub struct FamilyOptions {
    /// Constant phase of `S_a`; default 1.
    pub phases: BTreeMap<EdgeId, Complex64>,
    /// One weight per atom in layout order; default all 1.
    pub weights: Option<Vec<f64>>,
    /// Free atom counts at sources and entry-free cycles.
    pub free_sizes: BTreeMap<VertexId, usize>,
}

/// A Cuntz–Krieger family of spatial operators on an atomic space.
#[derive(Debug, Clone)]
pub struct CkFamily {
    pub graph: Arc<Graph>,
    pub space: AtomicMeasureSpace,
    pub p: f64,
    pub s: Vec<SpatialOperator>,
    pub t: Vec<SpatialOperator>,
    pub e: Vec<SpatialOperator>,
}

/// Atom layout for `g`: `X_v` contiguous in vertex order, named `v.i`, and at
/// regular `v` the supports `X_a` (`a ∈ r⁻¹(v)`, edge order) split `X_v` into
/// consecutive runs of length `|X_{s(a)}|`.
pub fn atomic_layout(
    g: &Arc<Graph>,
    sizes: &[usize],
    weights: Option<Vec<f64>>,
) -> Result<AtomicMeasureSpace, SpatialError> {
    let total: usize = sizes.iter().sum();
    let mut atoms = Vec::with_capacity(total);
    let mut vertex_of = Vec::with_capacity(total);
    let mut start = Vec::with_capacity(g.vertex_count());
    for v in g.vertices() {
        start.push(atoms.len());
        for i in 0..sizes[v.index()] {
            atoms.push(format!("{}.{i}", g.vertex_name(v)));
            vertex_of.push(v);
        }
    }
    let mut edge_support = vec![Vec::new(); g.edge_count()];
    for v in g.vertices() {
        let mut next = start[v.index()];
        for &a in g.receives(v) {
            let len = sizes[g.source(a).index()];
            edge_support[a.index()] = (next..next + len).collect();
            next += len;
        }
    }
    let weights = weights.unwrap_or_else(|| vec![1.0; total]);
    AtomicMeasureSpace::new(
        atoms,
        weights,
        Some(Layout {
            graph: Arc::clone(g),
            vertex_of,
            edge_support,
        }),
    )
}

pub fn atomic_ck_family(g: &Arc<Graph>, p: f64, options: &FamilyOptions) -> Result<CkFamily, SpatialError> {
    super::check_exponent(p)?;
    let sizes = atomic_size_assignment(g, &options.free_sizes)?;
    let space = atomic_layout(g, &sizes, options.weights.clone())?;
    let one = Complex64::new(1.0, 0.0);
    let mut s = Vec::with_capacity(g.edge_count());
    let mut t = Vec::with_capacity(g.edge_count());
    for a in g.edge_ids() {
        let phase = options.phases.get(&a).copied().unwrap_or(one);
        let sys = SpatialSystem::order_preserving(&space.vertex_atoms(g.source(a)), space.edge_atoms(a), phase)?;
        let sa = spi_matrix(&space, &sys, p)?;
        t.push(spi_reverse(&sa, &space, p)?);
        s.push(sa);
    }
    let e = g
        .vertices()
        .map(|v| SpatialOperator::indicator(space.len(), &space.vertex_atoms(v)))
        .collect();
    Ok(CkFamily {
        graph: Arc::clone(g),
        space,
        p,
        s,
        t,
        e,
    })
}

impl CkFamily {
    pub fn dimension(&self) -> usize {
        self.space.len()
    }

    /// `(zS, z̄T, E)`.
    pub fn rotated(&self, z: Complex64) -> CkFamily {
        CkFamily {
            s: self.s.iter().map(|op| op.scaled(z)).collect(),
            t: self.t.iter().map(|op| op.scaled(z.conj())).collect(),
            ..self.clone()
        }
    }

    /// `S_α = S_{α₁}⋯S_{αₙ} E_{s(α)}`.
    pub fn s_path(&self, alpha: &Path) -> CMatrix {
        let mut acc = self.e[alpha.source().index()].matrix.clone();
        for &a in alpha.edges().iter().rev() {
            acc = &self.s[a.index()].matrix * acc;
        }
        acc
    }

    /// `T_β = E_{s(β)} T_{βₙ}⋯T_{β₁}`.
    pub fn t_path(&self, beta: &Path) -> CMatrix {
        let mut acc = self.e[beta.source().index()].matrix.clone();
        for &b in beta.edges().iter().rev() {
            acc *= &self.t[b.index()].matrix;
        }
        acc
    }
}

/// `π(x)`, substituting the family's matrices for the generators.
pub fn represent<C: Scalar>(x: &Element<C>, fam: &CkFamily) -> Result<CMatrix, SpatialError> {
    if *x.graph() != *fam.graph {
        return Err(SpatialError::GraphMismatch);
    }
    let n = fam.dimension();
    let mut out = CMatrix::zeros(n, n);
    let mut s_cache: HashMap<&Path, CMatrix> = HashMap::new();
    let mut t_cache: HashMap<&Path, CMatrix> = HashMap::new();
    for (m, c) in x.terms() {
        let sa = s_cache.entry(&m.alpha).or_insert_with(|| fam.s_path(&m.alpha));
        let sa = sa.clone();
        let tb = t_cache.entry(&m.beta).or_insert_with(|| fam.t_path(&m.beta));
        out += (sa * &*tb) * c.to_c64();
    }
    Ok(out)
}

/// The atom set `A` with `π(x) = m_{1_A}`.
pub fn support_of<C: Scalar>(x: &Element<C>, fam: &CkFamily) -> Result<Vec<usize>, SpatialError> {
    indicator_support(&represent(x, fam)?, 1e-9).ok_or(SpatialError::NotAnIndicator)
}

/// `Some(A)` when `m` is the indicator of `A` up to `tol`.
pub fn indicator_support(m: &CMatrix, tol: f64) -> Option<Vec<usize>> {
    let n = m.nrows();
    if m.ncols() != n {
        return None;
    }
    let mut support = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            if i != j {
                if z.norm() > tol {
                    return None;
                }
            } else if (z - Complex64::new(1.0, 0.0)).norm() <= tol {
                support.push(i);
            } else if z.norm() > tol {
                return None;
            }
        }
    }
    Some(support)
}
