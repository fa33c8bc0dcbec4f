use serde::Serialize;

use crate::pnorm::NormEstimate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Not applicable to the input; does not affect the verdict.
    Skipped,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub residual: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub subject: String,
    pub checks: Vec<Check>,
    pub verdict: Status,
}

impl VerificationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        VerificationReport {
            subject: subject.into(),
            checks: Vec::new(),
            verdict: Status::Pass,
        }
    }

    pub fn push(&mut self, name: impl Into<String>, status: Status, residual: f64, detail: impl Into<String>) {
        if status == Status::Fail {
            self.verdict = Status::Fail;
        }
        self.checks.push(Check {
            name: name.into(),
            status,
            residual,
            detail: detail.into(),
        });
    }

    /// Passes when `residual ≤ tol`.
    pub fn residual(&mut self, name: impl Into<String>, residual: f64, tol: f64) {
        let ok = residual <= tol;
        self.push(
            name,
            Status::from_bool(ok),
            residual,
            if ok { String::new() } else { format!("exceeds {tol:e}") },
        );
    }

    pub fn skip(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.push(name, Status::Skipped, 0.0, detail);
    }

    pub fn merge(&mut self, prefix: &str, other: VerificationReport) {
        for c in other.checks {
            self.push(format!("{prefix}{}", c.name), c.status, c.residual, c.detail);
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Status::Pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    /// Largest residual among checks that ran.
    pub fn max_residual(&self) -> f64 {
        self.checks
            .iter()
            .filter(|c| c.status != Status::Skipped)
            .map(|c| c.residual)
            .fold(0.0, f64::max)
    }
}

/// `[lower, upper]` of a norm estimate, the upper end infinite when unknown.
pub(crate) fn interval(est: &NormEstimate) -> (f64, f64) {
    (est.lower, est.upper.unwrap_or(f64::INFINITY))
}
