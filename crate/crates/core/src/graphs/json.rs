use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};

pub const CONVENTION: &str = "paper-rs";

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub id: String,
    pub source: String,
    pub range: String,
}

/// Wire form of a graph: `{"vertices":[..],"edges":[{"id","source","range"}]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl GraphJson {
    pub fn into_graph(self) -> Result<Graph, GraphError> {
        if let Some(c) = &self.convention {
            if c != CONVENTION {
                return Err(GraphError::Convention(c.clone()));
            }
        }
        let g = Graph::new(self.vertices, self.edges.into_iter().map(|e| (e.id, e.source, e.range)))?;
        Ok(match self.name {
            Some(n) => g.with_name(n),
            None => g,
        })
    }
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            vertices: g.vertex_names().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeJson {
                    id: e.id.clone(),
                    source: g.vertex_name(e.source).to_string(),
                    range: g.vertex_name(e.range).to_string(),
                })
                .collect(),
            convention: None,
            name: g.name().map(str::to_string),
        }
    }
}

impl Graph {
    pub fn from_json(text: &str) -> Result<Graph, GraphError> {
        let raw: GraphJson = serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        raw.into_graph()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphJson::from(self)).expect("graph json is always serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_wire_format() {
        let text = r#"{"vertices":["v","w"],"edges":[{"id":"a","source":"v","range":"w"}]}"#;
        let g = Graph::from_json(text).unwrap();
        assert_eq!(g.to_json(), text);
        assert!(g.is_source(g.vertex("v").unwrap()));
    }

    #[test]
    fn convention_field() {
        let ok = r#"{"vertices":["v"],"edges":[],"convention":"paper-rs"}"#;
        assert!(Graph::from_json(ok).is_ok());
        let bad = r#"{"vertices":["v"],"edges":[],"convention":"raeburn"}"#;
        assert_eq!(Graph::from_json(bad), Err(GraphError::Convention("raeburn".into())));
        assert!(matches!(Graph::from_json("{"), Err(GraphError::Json(_))));
        assert!(matches!(
            Graph::from_json(r#"{"vertices":["v"],"edges":[],"extra":1}"#),
            Err(GraphError::Json(_))
        ));
    }
}
