use std::cmp::Ordering;

use crate::graphs::{Graph, Path};

/// The monomial `s_α t_β`, with `s(α) = s(β)`.
///
/// `e_v` is `(v, v)`, `s_α` is `(α, s(α))` and `t_β` is `(s(β), β)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub alpha: Path,
    pub beta: Path,
}

impl Monomial {
    /// `None` unless `s(α) = s(β)`.
    pub fn new(alpha: Path, beta: Path) -> Option<Self> {
        (alpha.source() == beta.source()).then_some(Monomial { alpha, beta })
    }

    pub fn vertex(v: crate::graphs::VertexId) -> Self {
        Monomial {
            alpha: Path::vertex(v),
            beta: Path::vertex(v),
        }
    }

    pub fn s(alpha: Path) -> Self {
        let beta = Path::vertex(alpha.source());
        Monomial { alpha, beta }
    }

    pub fn t(beta: Path) -> Self {
        let alpha = Path::vertex(beta.source());
        Monomial { alpha, beta }
    }

    pub fn total_len(&self) -> usize {
        self.alpha.len() + self.beta.len()
    }

    /// Gauge degree `|α| − |β|`.
    pub fn degree(&self) -> i64 {
        self.alpha.len() as i64 - self.beta.len() as i64
    }

    pub fn is_vertex(&self) -> bool {
        self.alpha.is_trivial() && self.beta.is_trivial()
    }

    /// The formal adjoint `s_β t_α`.
    pub fn star(&self) -> Self {
        Monomial {
            alpha: self.beta.clone(),
            beta: self.alpha.clone(),
        }
    }

    pub fn is_valid(&self, g: &Graph) -> bool {
        self.alpha.is_valid(g) && self.beta.is_valid(g) && self.alpha.source() == self.beta.source()
    }

    pub fn label(&self, g: &Graph) -> String {
        match (self.alpha.is_trivial(), self.beta.is_trivial()) {
            (true, true) => format!("e_{}", g.path_label(&self.alpha)),
            (false, true) => format!("s_{}", g.path_label(&self.alpha)),
            (true, false) => format!("t_{}", g.path_label(&self.beta)),
            (false, false) => format!("s_{} t_{}", g.path_label(&self.alpha), g.path_label(&self.beta)),
        }
    }
}

/// Orders by `(|α| + |β|, α, β)`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_len()
            .cmp(&other.total_len())
            .then_with(|| self.alpha.cmp(&other.alpha))
            .then_with(|| self.beta.cmp(&other.beta))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `(s_α t_β)(s_γ t_δ)` as a monomial, or `None` when it vanishes.
///
/// `t_β s_γ` is `e_{s(β)}` if `β = γ`, `t_{β'}` if `β = γβ'`, `s_{γ'}` if
/// `γ = βγ'`, and zero otherwise.
pub fn mul_monomials(g: &Graph, left: &Monomial, right: &Monomial) -> Option<Monomial> {
    let (alpha, beta) = (&left.alpha, &left.beta);
    let (gamma, delta) = (&right.alpha, &right.beta);
    if beta == gamma {
        return Some(Monomial {
            alpha: alpha.clone(),
            beta: delta.clone(),
        });
    }
    if let Some(beta_rest) = beta.strip_prefix(g, gamma) {
        // t_{β'} t_δ = t_{δβ'}
        let beta_new = delta.concat(g, &beta_rest).expect("s(δ) = s(γ) = r(β')");
        return Some(Monomial {
            alpha: alpha.clone(),
            beta: beta_new,
        });
    }
    if let Some(gamma_rest) = gamma.strip_prefix(g, beta) {
        let alpha_new = alpha.concat(g, &gamma_rest).expect("s(α) = s(β) = r(γ')");
        return Some(Monomial {
            alpha: alpha_new,
            beta: delta.clone(),
        });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> Graph {
        Graph::new(["u", "v", "w"], [("a", "v", "u"), ("b", "w", "v")]).unwrap()
    }

    #[test]
    fn vertex_times_edge_projection() {
        let g = Graph::new(["u", "v"], [("a", "v", "u")]).unwrap();
        let a = Path::edge(&g, g.edge_id("a").unwrap());
        let sa_ta = Monomial::new(a.clone(), a.clone()).unwrap();
        let eu = Monomial::vertex(g.vertex("u").unwrap());
        assert_eq!(mul_monomials(&g, &eu, &sa_ta), Some(sa_ta.clone()));
        let ev = Monomial::vertex(g.vertex("v").unwrap());
        assert_eq!(mul_monomials(&g, &ev, &sa_ta), None);
    }

    #[test]
    fn incomparable_projections_vanish() {
        let g = Graph::new(["v"], [("a", "v", "v"), ("b", "v", "v")]).unwrap();
        let a = Path::edge(&g, g.edge_id("a").unwrap());
        let b = Path::edge(&g, g.edge_id("b").unwrap());
        let pa = Monomial::new(a.clone(), a).unwrap();
        let pb = Monomial::new(b.clone(), b).unwrap();
        assert_eq!(mul_monomials(&g, &pa, &pb), None);
    }

    #[test]
    fn chain_projection_absorbs_longer_projection() {
        let g = chain();
        let a = Path::edge(&g, g.edge_id("a").unwrap());
        let ab = a.push(&g, g.edge_id("b").unwrap()).unwrap();
        let pa = Monomial::new(a.clone(), a.clone()).unwrap();
        let pab = Monomial::new(ab.clone(), ab.clone()).unwrap();
        assert_eq!(mul_monomials(&g, &pa, &pab), Some(pab.clone()));
        assert_eq!(mul_monomials(&g, &pab, &pa), Some(pab));
        // t_a s_ab = s_b; s_v t_a times s_ab t_w
        let ta = Monomial::t(a.clone());
        let sab = Monomial::s(ab);
        let b = Path::edge(&g, g.edge_id("b").unwrap());
        assert_eq!(mul_monomials(&g, &ta, &sab), Some(Monomial::s(b)));
    }

    #[test]
    fn ordering_is_length_first() {
        let g = chain();
        let a = Path::edge(&g, g.edge_id("a").unwrap());
        let ev = Monomial::vertex(g.vertex("w").unwrap());
        let sa = Monomial::s(a.clone());
        let pa = Monomial::new(a.clone(), a).unwrap();
        let mut ms = vec![pa.clone(), sa.clone(), ev.clone()];
        ms.sort();
        assert_eq!(ms, [ev, sa, pa]);
    }
}
