use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use lpga_core::graphs::{EdgeId, Graph, GraphError};
use lpga_core::leavitt::{BasisPolicy, ExactElement, LeavittError, NumericElement, RationalComplex, Scalar};
use lpga_core::pnorm::PnormError;
use lpga_core::spatial::{
    atomic_ck_family, atomic_layout, atomic_size_assignment, CkFamily, FamilyOptions, SpatialError,
};
use lpga_core::verify::VerifyError;
use lpga_core::Complex64;
use serde_json::Value;

use crate::args::Cli;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError(pub String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

macro_rules! from_error {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError(e.to_string())
            }
        })*
    };
}

from_error!(GraphError, LeavittError, SpatialError, PnormError, VerifyError);

impl From<String> for CliError {
    fn from(s: String) -> Self {
        CliError(s)
    }
}

impl From<&str> for CliError {
    fn from(s: &str) -> Self {
        CliError(s.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError(format!("cannot read {}: {e}", path.display())))
}

/// Parses a graph; an unnamed graph takes `fallback` as its name.
pub fn graph_from_text(text: &str, fallback: &str) -> CliResult<Graph> {
    let g = Graph::from_json(text)?;
    Ok(if g.name().is_none() { g.with_name(fallback) } else { g })
}

pub fn load_graph(path: &Path) -> CliResult<Arc<Graph>> {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("");
    let g = graph_from_text(&read_file(path)?, stem).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    Ok(Arc::new(g))
}

pub fn require_graph(cli: &Cli) -> CliResult<Arc<Graph>> {
    let path = cli.graph.as_ref().ok_or("--graph is required for this command")?;
    load_graph(path)
}

pub fn load_policy(cli: &Cli, g: &Graph) -> CliResult<Arc<BasisPolicy>> {
    Ok(Arc::new(match &cli.policy {
        Some(path) => BasisPolicy::from_json(g, &read_file(path)?)?,
        None => BasisPolicy::default_for(g),
    }))
}

/// An element read from disk: exact when every coefficient is a rational
/// string or an integer, floating otherwise.
#[derive(Debug, Clone)]
pub enum AnyElement {
    Exact(ExactElement),
    Numeric(NumericElement),
}

impl AnyElement {
    pub fn numeric(&self) -> NumericElement {
        match self {
            AnyElement::Exact(x) => x.to_numeric(),
            AnyElement::Numeric(x) => x.clone(),
        }
    }
}

pub fn load_element(g: &Arc<Graph>, path: &Path) -> CliResult<AnyElement> {
    let text = read_file(path)?;
    let exact = ExactElement::from_json(g, &text);
    match exact {
        Ok(x) => Ok(AnyElement::Exact(x)),
        Err(first) => match NumericElement::from_json(g, &text) {
            Ok(x) => Ok(AnyElement::Numeric(x)),
            Err(_) => Err(CliError(format!("{}: {first}", path.display()))),
        },
    }
}

/// `re[,im]`; also returns the exact value when both parts are rationals.
pub fn parse_complex(text: &str) -> CliResult<(Option<RationalComplex>, Complex64)> {
    let mut parts = text.split(',').map(str::trim);
    let re = parts
        .next()
        .filter(|s| !s.is_empty())
        .ok_or_else(|| CliError(format!("empty complex number `{text}`")))?;
    let im = parts.next().unwrap_or("0");
    if parts.next().is_some() {
        return Err(CliError(format!("expected `re,im`, found `{text}`")));
    }
    let exact = RationalComplex::from_json(&Value::from(re), &Value::from(im)).ok();
    let float = |s: &str| s.parse::<f64>().map_err(|_| CliError(format!("not a number: `{s}`")));
    let z = match &exact {
        Some(q) => q.to_c64(),
        None => Complex64::new(float(re)?, float(im)?),
    };
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(CliError(format!("not a finite complex number: `{text}`")));
    }
    Ok((exact, z))
}

/// Unimodular value of `re[,im]`: exact input must have modulus exactly 1,
/// decimal input within `1e-9`, and is then rescaled onto the circle.
pub fn parse_unimodular(text: &str) -> CliResult<(Option<RationalComplex>, Complex64)> {
    let (exact, z) = parse_complex(text)?;
    match exact {
        Some(q) if q.is_unimodular() => Ok((Some(q), z)),
        Some(_) => Err(CliError(format!("`{text}` is not unimodular"))),
        None if (z.norm() - 1.0).abs() <= 1e-9 => Ok((None, z / z.norm())),
        None => Err(CliError(format!("`{text}` is not unimodular"))),
    }
}

pub fn parse_phases(cli: &Cli, g: &Graph) -> CliResult<BTreeMap<EdgeId, Complex64>> {
    let mut out = BTreeMap::new();
    for spec in &cli.phase {
        let (edge, value) = spec
            .split_once('=')
            .ok_or_else(|| CliError(format!("--phase expects `edge=re,im`, found `{spec}`")))?;
        let a = g.edge_id(edge.trim())?;
        let (_, z) = parse_unimodular(value)?;
        if out.insert(a, z).is_some() {
            return Err(CliError(format!("phase of `{edge}` given twice")));
        }
    }
    Ok(out)
}

pub fn load_weights(cli: &Cli, g: &Arc<Graph>) -> CliResult<Option<Vec<f64>>> {
    let Some(path) = &cli.weights else {
        return Ok(None);
    };
    let text = read_file(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    let sizes = atomic_size_assignment(g, &BTreeMap::new())?;
    let space = atomic_layout(g, &sizes, None)?;
    let number = |v: &Value| {
        v.as_f64()
            .ok_or_else(|| CliError(format!("weight is not a number: {v}")))
    };
    let weights = match value {
        Value::Array(items) => {
            if items.len() != space.len() {
                return Err(CliError(format!(
                    "{} weights given for {} atoms",
                    items.len(),
                    space.len()
                )));
            }
            items.iter().map(number).collect::<CliResult<Vec<f64>>>()?
        }
        Value::Object(map) => {
            let mut w = vec![1.0; space.len()];
            for (atom, v) in &map {
                let i = space
                    .atom_index(atom)
                    .ok_or_else(|| CliError(format!("unknown atom `{atom}`")))?;
                w[i] = number(v)?;
            }
            w
        }
        _ => return Err("weights must be a JSON array or object".into()),
    };
    Ok(Some(weights))
}

pub fn family_options(cli: &Cli, g: &Arc<Graph>) -> CliResult<FamilyOptions> {
    Ok(FamilyOptions {
        phases: parse_phases(cli, g)?,
        weights: load_weights(cli, g)?,
        free_sizes: BTreeMap::new(),
    })
}

pub fn build_family(cli: &Cli, g: &Arc<Graph>) -> CliResult<CkFamily> {
    Ok(atomic_ck_family(g, cli.p, &family_options(cli, g)?)?)
}
