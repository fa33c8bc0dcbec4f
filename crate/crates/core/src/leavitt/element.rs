use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::graphs::{EdgeId, Graph, Path, VertexId};

use super::monomial::{mul_monomials, Monomial};
use super::normal::{normalize, BasisPolicy};
use super::scalar::{Scalar, ScalarDisplay};
use super::LeavittError;

/// A finitely supported combination `Σ λ_{α,β} s_α t_β` in `L_Q`.
///
/// No stored coefficient is zero. When `policy` is set the element is kept in
/// normal form with respect to it, and products involving it are normalized.
#[derive(Clone, Debug)]
pub struct Element<C: Scalar> {
    graph: Arc<Graph>,
    terms: BTreeMap<Monomial, C>,
    policy: Option<Arc<BasisPolicy>>,
}

impl<C: Scalar> PartialEq for Element<C> {
    fn eq(&self, other: &Self) -> bool {
        same_graph(&self.graph, &other.graph) && self.terms == other.terms
    }
}

pub(crate) fn same_graph(a: &Arc<Graph>, b: &Arc<Graph>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<C: Scalar> Element<C> {
    pub fn zero(graph: &Arc<Graph>) -> Self {
        Element {
            graph: Arc::clone(graph),
            terms: BTreeMap::new(),
            policy: None,
        }
    }

    pub fn from_monomial(graph: &Arc<Graph>, m: Monomial, c: C) -> Self {
        let mut x = Self::zero(graph);
        x.add_term(m, c);
        x
    }

    /// Collects terms, merging repeats and dropping zeros.
    pub fn from_terms(graph: &Arc<Graph>, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut x = Self::zero(graph);
        for (m, c) in terms {
            x.add_term(m, c);
        }
        x
    }

    /// `e_v`.
    pub fn vertex(graph: &Arc<Graph>, v: VertexId) -> Self {
        Self::from_monomial(graph, Monomial::vertex(v), C::one())
    }

    /// `s_a`.
    pub fn s(graph: &Arc<Graph>, e: EdgeId) -> Self {
        Self::from_monomial(graph, Monomial::s(Path::edge(graph, e)), C::one())
    }

    /// `t_a`.
    pub fn t(graph: &Arc<Graph>, e: EdgeId) -> Self {
        Self::from_monomial(graph, Monomial::t(Path::edge(graph, e)), C::one())
    }

    pub fn s_path(graph: &Arc<Graph>, alpha: Path) -> Self {
        Self::from_monomial(graph, Monomial::s(alpha), C::one())
    }

    pub fn t_path(graph: &Arc<Graph>, beta: Path) -> Self {
        Self::from_monomial(graph, Monomial::t(beta), C::one())
    }

    /// `Σ_{v ∈ vs} e_v`.
    pub fn vertex_sum(graph: &Arc<Graph>, vs: impl IntoIterator<Item = VertexId>) -> Self {
        Self::from_terms(graph, vs.into_iter().map(|v| (Monomial::vertex(v), C::one())))
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn policy(&self) -> Option<&Arc<BasisPolicy>> {
        self.policy.as_ref()
    }

    pub(crate) fn set_policy(&mut self, policy: Option<Arc<BasisPolicy>>) {
        self.policy = policy;
    }

    /// The same element with the normal-form flag cleared.
    pub fn unflagged(mut self) -> Self {
        self.policy = None;
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&C> {
        self.terms.get(m)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_negligible() {
            return;
        }
        match self.terms.remove(&m) {
            Some(prev) => {
                let sum = prev + c;
                if !sum.is_negligible() {
                    self.terms.insert(m, sum);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(
            &self.graph,
            self.terms.iter().map(|(m, d)| (m.clone(), d.clone() * c.clone())),
        )
    }

    /// Keeps terms satisfying `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Self {
        Element {
            graph: Arc::clone(&self.graph),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
            policy: self.policy.clone(),
        }
    }

    /// Applies `f` to every coefficient, keeping monomials.
    pub fn map_coefficients(&self, mut f: impl FnMut(&Monomial, &C) -> C) -> Self {
        let mut out = Self::from_terms(&self.graph, self.terms.iter().map(|(m, c)| (m.clone(), f(m, c))));
        out.policy = self.policy.clone();
        out
    }

    /// Converts the coefficients into another scalar type.
    pub fn convert<D: Scalar>(&self, mut f: impl FnMut(&C) -> D) -> Element<D> {
        Element::from_terms(&self.graph, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn to_numeric(&self) -> Element<num_complex::Complex64> {
        self.convert(|c| c.to_c64())
    }

    /// Formal adjoint: `(λ s_α t_β)* = λ̄ s_β t_α`.
    pub fn star(&self) -> Self {
        Self::from_terms(&self.graph, self.terms.iter().map(|(m, c)| (m.star(), c.conj())))
    }

    /// Largest `max(|α|, |β|)` over the terms (zero for the zero element).
    pub fn max_path_len(&self) -> usize {
        self.terms
            .keys()
            .map(|m| m.alpha.len().max(m.beta.len()))
            .max()
            .unwrap_or(0)
    }

    pub fn check_same_graph(&self, other: &Self) -> Result<(), LeavittError> {
        if same_graph(&self.graph, &other.graph) {
            Ok(())
        } else {
            Err(LeavittError::GraphMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LeavittError> {
        self.check_same_graph(other)?;
        let mut out = self.clone().unflagged();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, LeavittError> {
        self.check_same_graph(other)?;
        let mut out = self.clone().unflagged();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    /// Bilinear extension of [`mul_monomials`]. The product is normalized when
    /// either factor carries a normal-form policy.
    pub fn try_mul(&self, other: &Self) -> Result<Self, LeavittError> {
        self.check_same_graph(other)?;
        let mut out = Self::zero(&self.graph);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some(m) = mul_monomials(&self.graph, m1, m2) {
                    out.add_term(m, c1.clone() * c2.clone());
                }
            }
        }
        match self.policy.as_ref().or(other.policy.as_ref()) {
            Some(p) => {
                let p = Arc::clone(p);
                normalize(&out, &p)
            }
            None => Ok(out),
        }
    }

    pub fn display(&self) -> String {
        self.to_string()
    }
}

impl<C: Scalar> fmt::Display for Element<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let label = m.label(&self.graph);
            let coeff = ScalarDisplay(c).to_string();
            let (sign, mag) = match coeff.strip_prefix('-') {
                Some(rest) if !coeff.starts_with('(') => ("-", rest.to_string()),
                _ => ("+", coeff),
            };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mag == "1" {
                write!(f, "{label}")?;
            } else {
                write!(f, "{mag}·{label}")?;
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        /// Panics when the operands live over different graphs; use the
        /// `try_` method to get an error instead.
        impl<C: Scalar> $trait<&Element<C>> for &Element<C> {
            type Output = Element<C>;
            fn $method(self, rhs: &Element<C>) -> Element<C> {
                self.$try(rhs).expect("operands over different graphs")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl<C: Scalar> Neg for &Element<C> {
    type Output = Element<C>;
    fn neg(self) -> Element<C> {
        self.scale(&-C::one())
    }
}
