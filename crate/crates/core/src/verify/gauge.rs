use std::sync::Arc;

use num_complex::Complex64;

use crate::leavitt::{gauge_apply, reduced_monomials, BasisPolicy, Element, NumericElement};
use crate::spatial::{represent, CkFamily};

use super::ck::check_ck_family;
use super::report::VerificationReport;
use super::{max_entry, TOL};

/// For each `z`: the rotated family `(zS, z̄T, E)` passes
/// [`check_ck_family`], and `π_z(x) = π(γ_z(x))` on the reduced monomials of
/// level `k`.
pub fn gauge_equivariance_check(fam: &CkFamily, zs: &[Complex64], k: usize) -> VerificationReport {
    gauge_equivariance_with(fam, zs, k, |fam, z| fam.rotated(z))
}

/// As [`gauge_equivariance_check`] with a caller-supplied rotation, so that
/// broken rotations can be probed.
pub fn gauge_equivariance_with(
    fam: &CkFamily,
    zs: &[Complex64],
    k: usize,
    rotate: impl Fn(&CkFamily, Complex64) -> CkFamily,
) -> VerificationReport {
    let g = &fam.graph;
    let policy = Arc::new(BasisPolicy::default_for(g));
    let basis = reduced_monomials(g, &policy, k);
    let mut report = VerificationReport::new(format!(
        "gauge equivariance of the family of {} on level {k}",
        g.name().unwrap_or("graph")
    ));
    for &z in zs {
        let tag = format!("z = {:.6}{:+.6}i", z.re, z.im);
        if (z.norm() - 1.0).abs() > 1e-12 {
            report.push(
                format!("{tag}: unimodular"),
                super::Status::Fail,
                (z.norm() - 1.0).abs(),
                "",
            );
            continue;
        }
        let rotated = rotate(fam, z);
        report.merge(&format!("{tag}: "), check_ck_family(&rotated));
        let mut worst = 0.0f64;
        let mut worst_at = String::new();
        for m in &basis {
            let x: NumericElement = Element::from_monomial(g, m.clone(), Complex64::new(1.0, 0.0));
            let moved = gauge_apply(&z, &x).expect("z is unimodular");
            let lhs = represent(&x, &rotated).expect("same graph");
            let rhs = represent(&moved, fam).expect("same graph");
            let r = max_entry(&(lhs - rhs));
            if r > worst {
                worst = r;
                worst_at = m.label(g);
            }
        }
        let ok = worst <= TOL;
        report.push(
            format!("{tag}: π_z = π∘γ_z on {} monomials", basis.len()),
            super::Status::from_bool(ok),
            worst,
            if ok {
                String::new()
            } else {
                format!("worst at {worst_at}")
            },
        );
    }
    report
}
