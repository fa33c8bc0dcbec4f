//! Wire form of a [`CkFamily`].
//!
//! Matrices are `{"rows": n, "data": [[re, im], ...]}` in row-major order,
//! or `{"rows": n, "triplets": [[i, j, re, im], ...]}`; the writer uses the
//! sparse form from [`SPARSE_THRESHOLD`] atoms on. A spatial certificate is
//! carried as `"certificate": [[y, η(y), re, im], ...]`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::graphs::{Graph, GraphJson};
use crate::CMatrix;

use super::family::CkFamily;
use super::space::{AtomicMeasureSpace, Layout};
use super::system::{SpatialOperator, SpatialSystem};
use super::SpatialError;

pub const SPARSE_THRESHOLD: usize = 64;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyJson {
    pub graph: GraphJson,
    pub p: f64,
    pub space: SpaceJson,
    #[serde(rename = "S")]
    pub s: BTreeMap<String, MatrixJson>,
    #[serde(rename = "T")]
    pub t: BTreeMap<String, MatrixJson>,
    #[serde(rename = "E")]
    pub e: BTreeMap<String, MatrixJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceJson {
    pub atoms: Vec<String>,
    pub weights: Vec<f64>,
    pub vertex_of: Vec<String>,
    pub edge_support: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triplets: Option<Vec<(usize, usize, f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<(usize, usize, f64, f64)>>,
}

impl MatrixJson {
    fn from_operator(op: &SpatialOperator) -> Self {
        let n = op.matrix.nrows();
        let (data, triplets) = if n >= SPARSE_THRESHOLD {
            let mut t = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    let z = op.matrix[(i, j)];
                    if z != Complex64::new(0.0, 0.0) {
                        t.push((i, j, z.re, z.im));
                    }
                }
            }
            (None, Some(t))
        } else {
            let mut d = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    let z = op.matrix[(i, j)];
                    d.push([z.re, z.im]);
                }
            }
            (Some(d), None)
        };
        MatrixJson {
            rows: n,
            data,
            triplets,
            certificate: op
                .certificate
                .as_ref()
                .map(|c| c.triples().iter().map(|&(y, x, f)| (y, x, f.re, f.im)).collect()),
        }
    }

    fn into_operator(self, n: usize) -> Result<SpatialOperator, SpatialError> {
        let bad = |m: String| SpatialError::Json(m);
        if self.rows != n {
            return Err(bad(format!("matrix has {} rows, space has {n} atoms", self.rows)));
        }
        let mut m = CMatrix::zeros(n, n);
        match (self.data, self.triplets) {
            (Some(d), None) => {
                if d.len() != n * n {
                    return Err(bad(format!("dense matrix needs {} entries, found {}", n * n, d.len())));
                }
                for (k, [re, im]) in d.into_iter().enumerate() {
                    m[(k / n, k % n)] = Complex64::new(re, im);
                }
            }
            (None, Some(t)) => {
                for (i, j, re, im) in t {
                    if i >= n || j >= n {
                        return Err(bad(format!("triplet ({i}, {j}) out of range")));
                    }
                    m[(i, j)] += Complex64::new(re, im);
                }
            }
            _ => return Err(bad("a matrix needs exactly one of `data` and `triplets`".into())),
        }
        let certificate = match self.certificate {
            Some(c) => Some(SpatialSystem::new(
                c.into_iter()
                    .map(|(y, x, re, im)| (y, x, Complex64::new(re, im)))
                    .collect(),
            )?),
            None => None,
        };
        Ok(SpatialOperator { matrix: m, certificate })
    }
}

impl CkFamily {
    pub fn to_json_value(&self) -> FamilyJson {
        let g = &*self.graph;
        let layout = self.space.layout.as_ref().expect("family spaces carry a layout");
        FamilyJson {
            graph: GraphJson::from(g),
            p: self.p,
            space: SpaceJson {
                atoms: self.space.atoms.clone(),
                weights: self.space.weights.clone(),
                vertex_of: layout.vertex_of.iter().map(|&v| g.vertex_name(v).to_string()).collect(),
                edge_support: g
                    .edge_ids()
                    .map(|a| {
                        let atoms = layout.edge_support[a.index()]
                            .iter()
                            .map(|&i| self.space.atoms[i].clone())
                            .collect();
                        (g.edge_name(a).to_string(), atoms)
                    })
                    .collect(),
            },
            s: g.edge_ids()
                .map(|a| {
                    (
                        g.edge_name(a).to_string(),
                        MatrixJson::from_operator(&self.s[a.index()]),
                    )
                })
                .collect(),
            t: g.edge_ids()
                .map(|a| {
                    (
                        g.edge_name(a).to_string(),
                        MatrixJson::from_operator(&self.t[a.index()]),
                    )
                })
                .collect(),
            e: g.vertices()
                .map(|v| {
                    (
                        g.vertex_name(v).to_string(),
                        MatrixJson::from_operator(&self.e[v.index()]),
                    )
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("family json is serializable")
    }

    pub fn from_json(text: &str) -> Result<CkFamily, SpatialError> {
        let raw: FamilyJson = serde_json::from_str(text).map_err(|e| SpatialError::Json(e.to_string()))?;
        Self::from_json_value(raw)
    }

    pub fn from_json_value(raw: FamilyJson) -> Result<CkFamily, SpatialError> {
        let graph: Arc<Graph> = Arc::new(raw.graph.into_graph()?);
        let g = &*graph;
        super::check_exponent(raw.p)?;
        let atom = |name: &String| {
            raw.space
                .atoms
                .iter()
                .position(|a| a == name)
                .ok_or_else(|| SpatialError::Json(format!("unknown atom `{name}`")))
        };
        let vertex_of = raw
            .space
            .vertex_of
            .iter()
            .map(|v| g.vertex(v))
            .collect::<Result<Vec<_>, _>>()?;
        let mut edge_support = vec![Vec::new(); g.edge_count()];
        for (e, atoms) in &raw.space.edge_support {
            let mut ids = atoms.iter().map(atom).collect::<Result<Vec<_>, _>>()?;
            ids.sort_unstable();
            edge_support[g.edge_id(e)?.index()] = ids;
        }
        let space = AtomicMeasureSpace::new(
            raw.space.atoms.clone(),
            raw.space.weights.clone(),
            Some(Layout {
                graph: Arc::clone(&graph),
                vertex_of,
                edge_support,
            }),
        )?;
        let n = space.len();
        let take = |map: BTreeMap<String, MatrixJson>, names: Vec<String>, kind: &str| {
            let mut map = map;
            let ops = names
                .iter()
                .map(|name| {
                    map.remove(name)
                        .ok_or_else(|| SpatialError::Json(format!("missing {kind}_{name}")))?
                        .into_operator(n)
                })
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(extra) = map.keys().next() {
                return Err(SpatialError::Json(format!("unknown generator {kind}_{extra}")));
            }
            Ok(ops)
        };
        let edge_names: Vec<String> = g.edge_ids().map(|a| g.edge_name(a).to_string()).collect();
        let vertex_names: Vec<String> = g.vertex_names().to_vec();
        let s = take(raw.s, edge_names.clone(), "S")?;
        let t = take(raw.t, edge_names, "T")?;
        let e = take(raw.e, vertex_names, "E")?;
        Ok(CkFamily {
            graph,
            space,
            p: raw.p,
            s,
            t,
            e,
        })
    }
}
