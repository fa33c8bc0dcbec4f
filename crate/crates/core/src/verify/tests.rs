use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::graphs::library::{a2, chain3, cuntz, loop_with_entry, random_graph, single_loop};
use crate::graphs::Graph;
use crate::leavitt::{BasisPolicy, Element, Monomial, NumericElement};
use crate::spatial::{atomic_ck_family, CkFamily, FamilyOptions, SpatialError};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn family(g: Graph, p: f64) -> CkFamily {
    atomic_ck_family(&Arc::new(g), p, &FamilyOptions::default()).unwrap()
}

fn policy(g: &Arc<Graph>) -> Arc<BasisPolicy> {
    Arc::new(BasisPolicy::default_for(g))
}

#[test]
fn atomic_families_pass_the_relation_check() {
    for p in [1.0, 1.5, 2.0, 3.0] {
        for g in [a2(), chain3(), single_loop()] {
            let fam = family(g, p);
            let r = check_ck_family(&fam);
            assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
            assert!(r.max_residual() <= 1e-12);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut tried = 0;
    while tried < 10 {
        let g = Arc::new(random_graph(&mut rng, 6, 8));
        let opts = FamilyOptions {
            phases: g
                .edge_ids()
                .map(|a| (a, Complex64::from_polar(1.0, 0.7 * a.index() as f64)))
                .collect(),
            ..FamilyOptions::default()
        };
        match atomic_ck_family(&g, 3.0, &opts) {
            Ok(fam) => {
                tried += 1;
                let r = check_ck_family(&fam);
                assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
            }
            Err(SpatialError::Unsolvable(_) | SpatialError::TooLarge(_)) => {}
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn weighted_p2_family_uses_adjoints() {
    let g = Arc::new(chain3());
    let opts = FamilyOptions {
        weights: Some(vec![1.0, 2.0, 0.5]),
        ..FamilyOptions::default()
    };
    let fam = atomic_ck_family(&g, 2.0, &opts).unwrap();
    let r = check_ck_family(&fam);
    assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
}

#[test]
fn scaled_phase_breaks_contractivity_and_reverse_laws() {
    let mut fam = family(a2(), 3.0);
    fam.s[0] = fam.s[0].scaled(c(1.1, 0.0));
    let r = check_ck_family(&fam);
    assert!(!r.passed());
    let failed: Vec<&str> = r.failures().map(|c| c.name.as_str()).collect();
    assert!(failed.contains(&"‖S_a‖ ≤ 1"), "{failed:?}");
    assert!(failed.contains(&"S_a T_a S_a = S_a"), "{failed:?}");
}

#[test]
fn injectivity_examples() {
    let fam = family(a2(), 3.0);
    for k in 0..=3 {
        let r = injectivity_on_level(&fam, k, &policy(&fam.graph));
        assert_eq!(r.kernel_dimension, 0, "k = {k}");
        assert!(r.exact && r.report.passed());
    }

    let g = Arc::new(single_loop());
    let a = g.edge_id("a").unwrap();
    let opts = FamilyOptions {
        phases: BTreeMap::from([(a, c(0.0, 1.0))]),
        ..FamilyOptions::default()
    };
    let fam = atomic_ck_family(&g, 3.0, &opts).unwrap();
    assert_eq!(injectivity_on_level(&fam, 0, &policy(&g)).kernel_dimension, 0);
    let r = injectivity_on_level(&fam, 1, &policy(&g));
    assert!(r.exact);
    assert!(r.kernel_dimension >= 1);
    assert!(!r.report.passed());
    let v = g.vertex("v").unwrap();
    let expected: NumericElement = Element::s(&g, a)
        .try_sub(&Element::vertex(&g, v).scale(&c(0.0, 1.0)))
        .unwrap();
    assert!(r.kernel_witnesses.contains(&expected), "{:?}", r.witness_labels);
    assert!(
        r.witness_labels.iter().any(|l| l.contains("s_a") && l.contains("e_v")),
        "{:?}",
        r.witness_labels
    );

    // irrational phase: floating mode finds the same relation
    let z = Complex64::from_polar(1.0, 1.0);
    let opts = FamilyOptions {
        phases: BTreeMap::from([(a, z)]),
        ..FamilyOptions::default()
    };
    let fam = atomic_ck_family(&g, 3.0, &opts).unwrap();
    let r = injectivity_on_level(&fam, 1, &policy(&g));
    assert!(!r.exact);
    assert_eq!(r.kernel_dimension, 2);
    let w = r
        .kernel_witnesses
        .iter()
        .find(|w| w.len() == 2 && w.terms().any(|(m, _)| m.alpha.len() == 1))
        .unwrap();
    let coeff = w.coefficient(&Monomial::vertex(v)).unwrap();
    assert!((coeff + z).norm() < 1e-9);
}

#[test]
fn isometry_examples() {
    for p in [1.0, 1.5, 2.0, 3.0] {
        let fam = family(chain3(), p);
        let g = Arc::clone(&fam.graph);
        let ab = g.path_from_names(&["a", "b"], None).unwrap();
        let b = g.path_from_names(&["b"], None).unwrap();
        let unit: NumericElement =
            Element::from_monomial(&g, Monomial::new(ab.clone(), b.clone()).unwrap(), c(1.0, 0.0));
        let t = isometry_trial(&fam, &unit, p, 0).unwrap();
        assert!((t.reference.lower - 1.0).abs() < 1e-12 && (t.represented.lower - 1.0).abs() < 1e-12);

        // λ₁ s_{ab} t_{ab} + λ₂ s_{b} t_{b}: ab and b are comparable, so use
        // incomparable paths from the A2-shaped tail instead
        let w = g.vertex("w").unwrap();
        let sum: NumericElement = Element::from_terms(
            &g,
            [
                (Monomial::new(ab.clone(), ab.clone()).unwrap(), c(0.0, -2.5)),
                (Monomial::vertex(w), c(1.5, 0.0)),
            ],
        );
        let t = isometry_trial(&fam, &sum, p, 0).unwrap();
        assert!(t.certified);
        assert!((t.reference.lower - 2.5).abs() < 1e-9 && (t.represented.lower - 2.5).abs() < 1e-9);

        let r = isometry_on_level(&fam, 2, p, 6, 3).unwrap();
        assert!(r.report.passed(), "{:?}", r.report);
        assert!(r.certified_trials >= 3);
        if p == 1.0 {
            assert!(r.max_relative_deviation <= 1e-12);
        }
    }
    let fam = family(single_loop(), 2.0);
    assert!(isometry_on_level(&fam, 1, 2.0, 1, 0).is_err());
}

#[test]
fn gauge_examples() {
    let fam = family(chain3(), 3.0);
    let zs = [
        c(1.0, 0.0),
        c(0.0, 1.0),
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0),
    ];
    let r = gauge_equivariance_check(&fam, &zs, 2);
    assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());

    let broken = gauge_equivariance_with(&fam, &[c(0.0, 1.0)], 2, |f, z| CkFamily {
        s: f.s.iter().map(|op| op.scaled(z)).collect(),
        ..f.clone()
    });
    assert!(!broken.passed());
    assert!(broken.failures().any(|c| c.name.contains("T_a S_a = E_s(a)")));
}

#[test]
fn uniqueness_suite_examples() {
    let opts = SuiteOptions {
        p: 3.0,
        trials: 6,
        seed: 1,
    };
    let g = Arc::new(chain3());
    let fam = atomic_ck_family(&g, 3.0, &FamilyOptions::default()).unwrap();
    let r = uniqueness_witness_suite(&g, Some(&fam), 2, &policy(&g), opts).unwrap();
    assert!(r.passed(), "{r:#?}");
    assert!(r.checks.iter().all(|c| c.status == Status::Pass), "{r:#?}");

    let g = Arc::new(loop_with_entry());
    let r = uniqueness_witness_suite(&g, None, 2, &policy(&g), opts).unwrap();
    assert!(r.passed(), "{r:#?}");
    let skipped: Vec<&Check> = r.checks.iter().filter(|c| c.status == Status::Skipped).collect();
    assert_eq!(skipped.len(), 3);
    assert!(skipped.iter().all(|c| c.detail.contains("no finite representation")));
    assert!(r
        .checks
        .iter()
        .filter(|c| c.name.starts_with("(i) V s_α"))
        .all(|c| c.status == Status::Pass));

    let g = Arc::new(single_loop());
    assert!(matches!(
        uniqueness_witness_suite(&g, None, 1, &policy(&g), opts),
        Err(VerifyError::Precondition(_))
    ));
}

#[test]
fn fixed_point_examples() {
    let g = Arc::new(cuntz(2));
    let r = fixed_point_algebra_report(&g, 2).unwrap();
    assert_eq!(r.blocks.len(), 1);
    assert_eq!((r.blocks[0].paths, r.blocks[0].dimension), (4, 16));
    assert!(r.matrix_units_verified);
    assert_eq!(r.inclusion_verified, Some(true));

    let r = fixed_point_algebra_report(&g, 0).unwrap();
    assert_eq!(r.blocks[0].dimension, 1);

    let g = Arc::new(chain3());
    let r = fixed_point_algebra_report(&g, 5).unwrap();
    assert!(r.blocks.iter().all(|b| b.dimension == 0));
    assert_eq!(r.total_dimension, 0);
    assert_eq!(r.inclusion_verified, None);
    assert!(r.report.passed());
}
