use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::leavitt::sample::MonomialSampler;
use crate::leavitt::{acyclic_decomposition, Element, NumericElement};
use crate::pnorm::{opnorm, NormEstimate};
use crate::spatial::{represent, AtomicMeasureSpace, CkFamily};

use super::report::{interval, Status, VerificationReport};
use super::VerifyError;

/// Relative deviation accepted between certified norms.
pub const ISOMETRY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct IsometryTrial {
    pub element: String,
    pub reference: NormEstimate,
    pub represented: NormEstimate,
    pub relative_deviation: f64,
    pub certified: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IsometryReport {
    pub level: usize,
    pub p: f64,
    /// Over trials where both norms are certified.
    pub max_relative_deviation: f64,
    pub certified_trials: usize,
    pub uncertified_trials: usize,
    pub trials: Vec<IsometryTrial>,
    pub report: VerificationReport,
}

/// Norm of `x` in `⊕_v M_{n_v}` with spatial norms, through the acyclic block
/// decomposition.
pub fn reference_norm(x: &NumericElement, p: f64, seed: u64) -> Result<NormEstimate, VerifyError> {
    let dec = acyclic_decomposition(x.graph_arc())?;
    let mut best: Option<NormEstimate> = None;
    for block in dec.block_components(x)? {
        let m = block.to_cmatrix();
        let est = opnorm(&m, &AtomicMeasureSpace::uniform(m.nrows()), p, seed)?;
        best = Some(match best {
            None => est,
            Some(b) => NormEstimate {
                lower: b.lower.max(est.lower),
                upper: b.upper.zip(est.upper).map(|(u, v)| u.max(v)),
                certified: b.certified && est.certified,
                method: b.method.max(est.method),
            },
        });
    }
    Ok(best.unwrap_or(NormEstimate {
        lower: 0.0,
        upper: Some(0.0),
        certified: true,
        method: crate::pnorm::NormMethod::ExactP1,
    }))
}

fn relative(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Compares `‖π(x)‖` on the family's space with the spatial norm of `x` for
/// `trials` random `x` on level `k`, on an acyclic graph.
///
/// The norm computation runs at exponent `p`; the family's matrices are
/// used as given, so `p` should match `fam.p`. Even trials use nonnegative
/// coefficients, which keeps both norms certified at every `p`; odd trials
/// use complex coefficients and count only when certified. Uncertified
/// trials must still have overlapping norm intervals.
pub fn isometry_on_level(
    fam: &CkFamily,
    k: usize,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<IsometryReport, VerifyError> {
    let graph = &fam.graph;
    if !graph.is_acyclic() {
        return Err(VerifyError::Leavitt(crate::leavitt::LeavittError::CyclicGraph));
    }
    let sampler = MonomialSampler::new(graph, k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    for i in 0..trials {
        let x: NumericElement = sampler.element(&mut rng, 6);
        let x = if i % 2 == 0 {
            x.map_coefficients(|_, c| Complex64::new(c.norm() + rng.random_range(0.0..1.0), 0.0))
        } else {
            x
        };
        let x = if x.is_zero() {
            Element::from_monomial(graph, sampler.monomial(&mut rng), Complex64::new(1.0, 0.0))
        } else {
            x
        };
        out.push(isometry_trial(fam, &x, p, seed.wrapping_add(i as u64))?);
    }
    Ok(summarize(k, p, out))
}

/// One comparison for a given element.
pub fn isometry_trial(fam: &CkFamily, x: &NumericElement, p: f64, seed: u64) -> Result<IsometryTrial, VerifyError> {
    let reference = reference_norm(x, p, seed)?;
    let represented = opnorm(&represent(x, fam)?, &fam.space, p, seed)?;
    Ok(IsometryTrial {
        element: x.display(),
        relative_deviation: relative(reference.lower, represented.lower),
        certified: reference.certified && represented.certified,
        reference,
        represented,
    })
}

pub(crate) fn summarize(k: usize, p: f64, trials: Vec<IsometryTrial>) -> IsometryReport {
    let mut report = VerificationReport::new(format!("π isometric on level {k}, p = {p}"));
    let certified: Vec<&IsometryTrial> = trials.iter().filter(|t| t.certified).collect();
    let max_dev = certified.iter().map(|t| t.relative_deviation).fold(0.0, f64::max);
    report.push(
        "certified norms agree",
        Status::from_bool(max_dev <= ISOMETRY_TOL),
        max_dev,
        format!("{} certified trials", certified.len()),
    );
    let mut worst_gap = 0.0f64;
    for t in trials.iter().filter(|t| !t.certified) {
        let (rl, ru) = interval(&t.reference);
        let (pl, pu) = interval(&t.represented);
        let gap = (rl - pu).max(pl - ru).max(0.0) / rl.max(pl).max(f64::MIN_POSITIVE);
        worst_gap = worst_gap.max(gap);
    }
    let uncertified = trials.len() - certified.len();
    if uncertified == 0 {
        report.skip("uncertified norm intervals overlap", "no uncertified trials");
    } else {
        report.push(
            "uncertified norm intervals overlap",
            Status::from_bool(worst_gap <= ISOMETRY_TOL),
            worst_gap,
            format!("{uncertified} sphere-search trials, reported and not counted"),
        );
    }
    IsometryReport {
        level: k,
        p,
        max_relative_deviation: max_dev,
        certified_trials: certified.len(),
        uncertified_trials: uncertified,
        trials,
        report,
    }
}
