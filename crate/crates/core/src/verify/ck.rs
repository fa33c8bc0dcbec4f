use crate::pnorm::{hermitian_idempotent_test, opnorm};
use crate::spatial::CkFamily;
use crate::CMatrix;

use super::report::{Status, VerificationReport};
use super::{max_entry, TOL};

const EXP_SAMPLES: usize = 8;

/// Numeric check of the Cuntz–Krieger relations and the spatial conditions
/// on a represented family.
pub fn check_ck_family(fam: &CkFamily) -> VerificationReport {
    let g = &*fam.graph;
    let n = fam.dimension();
    let p = fam.p;
    let mut report = VerificationReport::new(format!(
        "CK family of {} on {n} atoms, p = {p}",
        g.name().unwrap_or("graph")
    ));
    let vn = |v: crate::graphs::VertexId| g.vertex_name(v).to_string();
    let en = |a: crate::graphs::EdgeId| g.edge_name(a).to_string();
    let e = |v: crate::graphs::VertexId| &fam.e[v.index()].matrix;
    let s = |a: crate::graphs::EdgeId| &fam.s[a.index()].matrix;
    let t = |a: crate::graphs::EdgeId| &fam.t[a.index()].matrix;

    let hermitian = |report: &mut VerificationReport, name: String, m: &CMatrix| match hermitian_idempotent_test(
        m,
        &fam.space,
        p,
        EXP_SAMPLES,
        0,
    ) {
        Ok(r) => {
            let detail = if r.is_hermitian {
                String::new()
            } else if !r.is_idempotent {
                "not idempotent".to_string()
            } else if p == 2.0 {
                "not self-adjoint".to_string()
            } else {
                format!(
                    "not an indicator matrix; sampled ‖exp(iλe)‖ up to {:.6}",
                    r.max_exp_norm
                )
            };
            report.push(name, Status::from_bool(r.is_hermitian), r.idempotent_residual, detail);
        }
        Err(err) => report.push(name, Status::Fail, f64::INFINITY, err.to_string()),
    };

    for v in g.vertices() {
        hermitian(&mut report, format!("E_{} hermitian idempotent", vn(v)), e(v));
        for w in g.vertices().filter(|&w| w > v) {
            report.residual(format!("E_{} E_{} = 0", vn(v), vn(w)), max_entry(&(e(v) * e(w))), TOL);
            report.residual(format!("E_{} E_{} = 0", vn(w), vn(v)), max_entry(&(e(w) * e(v))), TOL);
        }
    }
    for a in g.edge_ids() {
        let name = en(a);
        let (er, es) = (e(g.range(a)), e(g.source(a)));
        for (label, m) in [("S", s(a)), ("T", t(a))] {
            let check = format!("‖{label}_{name}‖ ≤ 1");
            match opnorm(m, &fam.space, p, 0) {
                Ok(est) => {
                    let excess = (est.lower - 1.0).max(0.0);
                    let detail = if est.certified {
                        String::new()
                    } else {
                        format!("uncertified ({})", est.method.as_str())
                    };
                    report.push(check, Status::from_bool(excess <= TOL), excess, detail);
                }
                Err(err) => report.push(check, Status::Fail, f64::INFINITY, err.to_string()),
            }
        }
        report.residual(
            format!("E_r({name}) S_{name} = S_{name}"),
            max_entry(&(er * s(a) - s(a))),
            TOL,
        );
        report.residual(
            format!("S_{name} E_s({name}) = S_{name}"),
            max_entry(&(s(a) * es - s(a))),
            TOL,
        );
        report.residual(
            format!("E_s({name}) T_{name} = T_{name}"),
            max_entry(&(es * t(a) - t(a))),
            TOL,
        );
        report.residual(
            format!("T_{name} E_r({name}) = T_{name}"),
            max_entry(&(t(a) * er - t(a))),
            TOL,
        );
        let st = s(a) * t(a);
        let ts = t(a) * s(a);
        report.residual(
            format!("S_{name} T_{name} S_{name} = S_{name}"),
            max_entry(&(&st * s(a) - s(a))),
            TOL,
        );
        report.residual(
            format!("T_{name} S_{name} T_{name} = T_{name}"),
            max_entry(&(&ts * t(a) - t(a))),
            TOL,
        );
        hermitian(&mut report, format!("S_{name} T_{name} hermitian idempotent"), &st);
        hermitian(&mut report, format!("T_{name} S_{name} hermitian idempotent"), &ts);
        for b in g.edge_ids() {
            if a == b {
                report.residual(format!("T_{name} S_{name} = E_s({name})"), max_entry(&(&ts - es)), TOL);
            } else {
                report.residual(format!("T_{name} S_{} = 0", en(b)), max_entry(&(t(a) * s(b))), TOL);
            }
        }
    }
    for v in g.vertices().filter(|&v| g.is_regular(v)) {
        let mut sum = CMatrix::zeros(n, n);
        for &a in g.receives(v) {
            sum += s(a) * t(a);
        }
        report.residual(
            format!("E_{0} = Σ S_a T_a over r⁻¹({0})", vn(v)),
            max_entry(&(sum - e(v))),
            TOL,
        );
    }
    report
}
