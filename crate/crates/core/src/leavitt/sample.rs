//! Seeded random elements, used by property tests and the verification
//! harness.

use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::graphs::{enumerate_paths, Graph, Path};

use super::element::Element;
use super::monomial::Monomial;
use super::scalar::Scalar;

/// Paths of length `0..=max_len` grouped for quick sampling.
#[derive(Debug, Clone)]
pub struct MonomialSampler {
    graph: Arc<Graph>,
    by_source: Vec<Vec<Path>>,
    sources: Vec<usize>,
}

impl MonomialSampler {
    pub fn new(graph: &Arc<Graph>, max_len: usize) -> Self {
        Self::with_filter(graph, max_len, |_| true)
    }

    /// Only paths accepted by `keep` are sampled.
    pub fn with_filter(graph: &Arc<Graph>, max_len: usize, keep: impl Fn(&Path) -> bool) -> Self {
        let mut by_source = vec![Vec::new(); graph.vertex_count()];
        for p in enumerate_paths(graph, max_len, None).into_iter().filter(|p| keep(p)) {
            by_source[p.source().index()].push(p);
        }
        let sources = (0..by_source.len()).filter(|&i| !by_source[i].is_empty()).collect();
        MonomialSampler {
            graph: Arc::clone(graph),
            by_source,
            sources,
        }
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn is_empty(&self) -> bool {
        self.sources.is_empty()
    }

    pub fn monomial<R: Rng>(&self, rng: &mut R) -> Monomial {
        let v = *self.sources.choose(rng).expect("sampler has paths");
        let pool = &self.by_source[v];
        Monomial {
            alpha: pool.choose(rng).expect("nonempty").clone(),
            beta: pool.choose(rng).expect("nonempty").clone(),
        }
    }

    /// Up to `max_terms` monomials with small Gaussian-integer coefficients.
    pub fn element<C: Scalar, R: Rng>(&self, rng: &mut R, max_terms: usize) -> Element<C> {
        let n = rng.random_range(1..=max_terms.max(1));
        let mut x = Element::zero(&self.graph);
        for _ in 0..n {
            let m = self.monomial(rng);
            x.add_term(m, small_scalar(rng));
        }
        x
    }
}

/// `a + bi` with `a, b ∈ {-3..3}`, not both zero.
pub fn small_scalar<C: Scalar, R: Rng>(rng: &mut R) -> C {
    loop {
        let a = rng.random_range(-3..=3i64);
        let b = rng.random_range(-3..=3i64);
        if a != 0 || b != 0 {
            return C::from_i64(a) + C::from_i64(b) * C::i();
        }
    }
}
