use std::f64::consts::TAU;
use std::sync::Arc;

use lpga_core::graphs::library::{random_acyclic_graph, random_graph};
use lpga_core::graphs::Graph;
use lpga_core::leavitt::sample::MonomialSampler;
use lpga_core::leavitt::{phi_n, ExactElement, NumericElement};
use lpga_core::pnorm::opnorm;
use lpga_core::spatial::{atomic_ck_family, represent, CkFamily, FamilyOptions};
use lpga_core::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn solvable<R: Rng>(rng: &mut R, acyclic: bool, p: f64) -> CkFamily {
    loop {
        let g: Arc<Graph> = Arc::new(if acyclic {
            random_acyclic_graph(rng, 4, 5)
        } else {
            random_graph(rng, 5, 7)
        });
        let phases = g
            .edge_ids()
            .map(|a| (a, Complex64::from_polar(1.0, rng.random_range(0.0..TAU))))
            .collect();
        if let Ok(fam) = atomic_ck_family(
            &g,
            p,
            &FamilyOptions {
                phases,
                ..Default::default()
            },
        ) {
            return fam;
        }
    }
}

#[test]
fn represent_is_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut pairs = 0;
    while pairs < 1000 {
        let fam = solvable(&mut rng, false, 2.0);
        let sampler = MonomialSampler::new(&fam.graph, 3);
        for _ in 0..50 {
            let x: NumericElement = sampler.element(&mut rng, 3);
            let y: NumericElement = sampler.element(&mut rng, 3);
            let lhs = represent(&x.try_mul(&y).unwrap(), &fam).unwrap();
            let rhs = represent(&x, &fam).unwrap() * represent(&y, &fam).unwrap();
            let scale = 1.0 + rhs.norm();
            assert!((lhs - &rhs).norm() <= 1e-9 * scale);
            pairs += 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phi_zero_is_contractive_on_acyclic_families(seed in any::<u64>(), pi in 0usize..3) {
        let p = [1.0, 2.0, 3.0][pi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fam = solvable(&mut rng, true, p);
        let x: ExactElement = MonomialSampler::new(&fam.graph, 3).element(&mut rng, 5);
        let full = represent(&x, &fam).unwrap();
        let core = represent(&phi_n(0, &x), &fam).unwrap();
        let nx = opnorm(&full, &fam.space, p, seed).unwrap();
        let n0 = opnorm(&core, &fam.space, p, seed).unwrap();
        if nx.certified && n0.certified {
            prop_assert!(n0.lower <= nx.lower * (1.0 + 1e-6) + 1e-9);
        }
    }

    #[test]
    fn gauge_components_reassemble_the_matrix(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fam = solvable(&mut rng, false, 2.0);
        let x: ExactElement = MonomialSampler::new(&fam.graph, 3).element(&mut rng, 5);
        let mut sum = represent(&phi_n(0, &x), &fam).unwrap();
        for n in 1..=3 {
            sum += represent(&phi_n(n, &x), &fam).unwrap();
            sum += represent(&phi_n(-n, &x), &fam).unwrap();
        }
        let full = represent(&x, &fam).unwrap();
        prop_assert!((full - sum).norm() <= 1e-9);
    }
}
