//! JSON forms of algebra elements and basis policies.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::graphs::Graph;

use super::element::Element;
use super::monomial::Monomial;
use super::normal::BasisPolicy;
use super::scalar::Scalar;
use super::LeavittError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementJson {
    pub graph: String,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub alpha: Vec<String>,
    pub beta: Vec<String>,
    pub base_alpha: String,
    pub base_beta: String,
    pub re: Value,
    pub im: Value,
}

/// Special-edge overrides, `{"special_edges": {"v": "a"}}`. Vertices not
/// listed keep the default choice.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyJson {
    pub special_edges: BTreeMap<String, String>,
}

impl<C: Scalar> Element<C> {
    /// Terms in monomial order: total length, then `α`, then `β`.
    pub fn to_json_value(&self) -> ElementJson {
        let g = self.graph();
        let names = |p: &crate::graphs::Path| p.edges().iter().map(|&e| g.edge_name(e).to_string()).collect();
        ElementJson {
            graph: g.name().unwrap_or("").to_string(),
            terms: self
                .terms()
                .map(|(m, c)| {
                    let (re, im) = c.to_json();
                    TermJson {
                        alpha: names(&m.alpha),
                        beta: names(&m.beta),
                        base_alpha: g.vertex_name(m.alpha.source()).to_string(),
                        base_beta: g.vertex_name(m.beta.source()).to_string(),
                        re,
                        im,
                    }
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("element json is serializable")
    }

    /// Parses an element over `graph`. The `graph` field must match the
    /// graph's name when both are nonempty.
    pub fn from_json(graph: &Arc<Graph>, text: &str) -> Result<Self, LeavittError> {
        let parsed: ElementJson = serde_json::from_str(text).map_err(|e| LeavittError::Json(e.to_string()))?;
        Self::from_json_value(graph, &parsed)
    }

    pub fn from_json_value(graph: &Arc<Graph>, parsed: &ElementJson) -> Result<Self, LeavittError> {
        if let Some(name) = graph.name() {
            if !parsed.graph.is_empty() && parsed.graph != name {
                return Err(LeavittError::Json(format!(
                    "element is over `{}`, not `{name}`",
                    parsed.graph
                )));
            }
        }
        let mut out = Element::zero(graph);
        for t in &parsed.terms {
            let alpha = graph.path_from_names(&t.alpha, Some(&t.base_alpha))?;
            let beta = graph.path_from_names(&t.beta, Some(&t.base_beta))?;
            let m = Monomial::new(alpha, beta).ok_or(LeavittError::InvalidMonomial)?;
            let c = C::from_json(&t.re, &t.im).map_err(LeavittError::Json)?;
            out.add_term(m, c);
        }
        Ok(out)
    }
}

impl BasisPolicy {
    pub fn from_json(g: &Graph, text: &str) -> Result<Self, LeavittError> {
        let parsed: PolicyJson = serde_json::from_str(text).map_err(|e| LeavittError::Json(e.to_string()))?;
        let mut overrides = BTreeMap::new();
        for (v, e) in &parsed.special_edges {
            overrides.insert(g.vertex(v)?, g.edge_id(e)?);
        }
        Self::with_overrides(g, &overrides)
    }

    pub fn to_json(&self, g: &Graph) -> String {
        let special_edges = g
            .vertices()
            .filter_map(|v| {
                self.special_edge(v)
                    .map(|e| (g.vertex_name(v).to_string(), g.edge_name(e).to_string()))
            })
            .collect();
        serde_json::to_string(&PolicyJson { special_edges }).expect("policy json is serializable")
    }
}
