use std::fmt::Write as _;

use lpga_core::leavitt::{Element, Scalar};
use lpga_core::pnorm::NormEstimate;
use lpga_core::spatial::SPARSE_THRESHOLD;
use lpga_core::verify::{Status, VerificationReport};
use lpga_core::CMatrix;
use serde_json::{json, Value};

/// Result of one command in both output formats.
#[derive(Debug, Clone)]
pub struct Output {
    pub json: Value,
    pub text: String,
    /// `None` for commands that compute rather than verify.
    pub verdict: Option<Status>,
}

impl Output {
    pub fn plain(json: Value, text: String) -> Self {
        Output {
            json,
            text,
            verdict: None,
        }
    }

    pub fn failed(&self) -> bool {
        self.verdict == Some(Status::Fail)
    }
}

pub fn verdict_str(ok: bool) -> &'static str {
    Status::from_bool(ok).as_str()
}

pub fn report_text(r: &VerificationReport) -> String {
    let mut s = format!("{}\n", r.subject);
    for c in &r.checks {
        let _ = write!(s, "  [{}] {}", c.status.as_str(), c.name);
        if c.status != Status::Skipped {
            let _ = write!(s, "  residual {:.3e}", c.residual);
        }
        if !c.detail.is_empty() {
            let _ = write!(s, "  ({})", c.detail);
        }
        s.push('\n');
    }
    let _ = writeln!(s, "verdict: {}", r.verdict.as_str());
    s
}

pub fn report_json(r: &VerificationReport) -> Value {
    serde_json::to_value(r).expect("reports serialize")
}

pub fn element_json<C: Scalar>(x: &Element<C>) -> Value {
    json!({
        "element": serde_json::to_value(x.to_json_value()).expect("elements serialize"),
        "display": x.display(),
        "exact": C::EXACT,
    })
}

pub fn norm_json(est: &NormEstimate) -> Value {
    serde_json::to_value(est).expect("estimates serialize")
}

pub fn norm_text(est: &NormEstimate) -> String {
    let upper = est.upper.map_or("unknown".to_string(), |u| format!("{u:.12}"));
    format!(
        "{:.12} (upper {upper}, {}, {})",
        est.lower,
        est.method.as_str(),
        if est.certified { "certified" } else { "uncertified" }
    )
}

/// Dense row-major `[re, im]` pairs below the sparse threshold, coordinate
/// triplets from it on.
pub fn matrix_json(m: &CMatrix) -> Value {
    let n = m.nrows();
    if n >= SPARSE_THRESHOLD {
        let mut t = Vec::new();
        for i in 0..n {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                if z.re != 0.0 || z.im != 0.0 {
                    t.push(json!([i, j, z.re, z.im]));
                }
            }
        }
        json!({ "rows": n, "triplets": t })
    } else {
        let data: Vec<Value> = (0..n)
            .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
            .map(|(i, j)| json!([m[(i, j)].re, m[(i, j)].im]))
            .collect();
        json!({ "rows": n, "data": data })
    }
}

fn entry_text(re: f64, im: f64) -> String {
    let clean = |t: f64| if t.abs() < 1e-15 { 0.0 } else { t };
    let (re, im) = (clean(re), clean(im));
    if im == 0.0 {
        format!("{re}")
    } else if re == 0.0 {
        format!("{im}i")
    } else {
        format!("{re}{:+}i", im)
    }
}

pub fn matrix_text(m: &CMatrix, atoms: &[String]) -> String {
    let cells: Vec<Vec<String>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| entry_text(m[(i, j)].re, m[(i, j)].im)).collect())
        .collect();
    let width = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(1);
    let label = atoms.iter().map(|a| a.chars().count()).max().unwrap_or(0);
    let mut s = String::new();
    for (i, row) in cells.iter().enumerate() {
        let _ = write!(s, "  {:>label$} |", atoms.get(i).map_or("", String::as_str));
        for c in row {
            let _ = write!(s, " {c:>width$}");
        }
        s.push('\n');
    }
    s
}
