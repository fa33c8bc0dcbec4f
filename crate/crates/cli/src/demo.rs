//! The bundled showcase behind `lpga demo`.

use std::fmt::Write as _;
use std::path::Path as FsPath;
use std::sync::Arc;

use lpga_core::graphs::Graph;
use lpga_core::leavitt::{acyclic_decomposition, BasisPolicy, Element, NumericElement};
use lpga_core::pnorm::opnorm;
use lpga_core::spatial::{atomic_ck_family, spi_matrix, AtomicMeasureSpace, FamilyOptions, SpatialSystem};
use lpga_core::verify::{
    fixed_point_algebra_report, injectivity_on_level, uniqueness_witness_suite, Status, SuiteOptions,
};
use lpga_core::{CMatrix, Complex64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::input::{graph_from_text, read_file, CliError, CliResult};
use crate::render::Output;

/// Bundled graph files; `--data-dir` replaces them with copies on disk.
pub const DATA_FILES: &[(&str, &str)] = &[
    ("a2.json", include_str!("../data/a2.json")),
    ("chain3.json", include_str!("../data/chain3.json")),
    ("loop.json", include_str!("../data/loop.json")),
    ("loop-entry.json", include_str!("../data/loop-entry.json")),
    ("o2.json", include_str!("../data/o2.json")),
];

struct Item {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn load(dir: Option<&FsPath>, file: &str) -> CliResult<Arc<Graph>> {
    let text = match dir {
        Some(d) => read_file(&d.join(file))?,
        None => DATA_FILES
            .iter()
            .find(|(n, _)| *n == file)
            .map(|(_, t)| t.to_string())
            .ok_or_else(|| CliError(format!("no bundled file {file}")))?,
    };
    let stem = file.trim_end_matches(".json");
    let g = graph_from_text(&text, stem).map_err(|e| CliError(format!("{file}: {e}")))?;
    Ok(Arc::new(g))
}

fn a2_decomposition(g: &Arc<Graph>) -> CliResult<Item> {
    let dec = acyclic_decomposition(g)?;
    let blocks: Vec<String> = dec
        .blocks
        .iter()
        .map(|b| format!("{}: M_{}", g.vertex_name(b.source), b.dimension()))
        .collect();
    let passed = dec.blocks.len() == 1 && g.vertex_name(dec.blocks[0].source) == "v" && dec.blocks[0].dimension() == 2;
    Ok(Item {
        name: "a2-decomposition",
        passed,
        detail: format!("blocks [{}]", blocks.join(", ")),
    })
}

fn o2_fixed_point(g: &Arc<Graph>) -> CliResult<Item> {
    let r = fixed_point_algebra_report(g, 2)?;
    let dims: Vec<String> = r
        .blocks
        .iter()
        .map(|b| format!("{}: {}", b.vertex, b.dimension))
        .collect();
    let passed = r.report.passed()
        && r.matrix_units_verified
        && r.inclusion_verified == Some(true)
        && r.blocks.iter().map(|b| b.dimension).collect::<Vec<_>>() == vec![16];
    Ok(Item {
        name: "o2-fixed-point",
        passed,
        detail: format!(
            "level 2 blocks [{}], inclusion into level 3 {}",
            dims.join(", "),
            match r.inclusion_verified {
                Some(true) => "holds",
                Some(false) => "fails",
                None => "undefined",
            }
        ),
    })
}

fn loop_kernel(g: &Arc<Graph>) -> CliResult<Item> {
    let fam = atomic_ck_family(g, 3.0, &FamilyOptions::default())?;
    let policy = Arc::new(BasisPolicy::default_for(g));
    let r = injectivity_on_level(&fam, 1, &policy);
    let (v, a) = (g.vertex("v")?, g.edge_id("a")?);
    let expected: NumericElement = Element::s(g, a).try_sub(&Element::vertex(g, v))?;
    let found = r.kernel_witnesses.iter().any(|w| {
        w.try_sub(&expected)
            .map(|d| d.terms().all(|(_, c)| c.norm() <= 1e-9))
            .unwrap_or(false)
    });
    Ok(Item {
        name: "loop-kernel",
        passed: r.kernel_dimension >= 1 && found,
        detail: format!(
            "level 1 kernel dimension {}, witnesses [{}]",
            r.kernel_dimension,
            r.witness_labels.join("; ")
        ),
    })
}

fn loop_entry_v_operator(g: &Arc<Graph>, seed: u64) -> CliResult<Item> {
    let policy = Arc::new(BasisPolicy::default_for(g));
    let options = SuiteOptions {
        seed,
        ..SuiteOptions::default()
    };
    let r = uniqueness_witness_suite(g, None, 2, &policy, options)?;
    let symbolic: Vec<_> = r.checks.iter().filter(|c| c.name.contains("in L_Q")).collect();
    let passed = r.passed() && !symbolic.is_empty() && symbolic.iter().all(|c| c.status == Status::Pass);
    Ok(Item {
        name: "loop-entry-v-operator",
        passed,
        detail: format!(
            "{} symbolic identities pass, {} numeric checks skipped",
            symbolic.iter().filter(|c| c.status == Status::Pass).count(),
            r.checks.iter().filter(|c| c.status == Status::Skipped).count()
        ),
    })
}

/// `‖Σ λᵢ sᵢ‖ = max |λᵢ|` for spatial partial isometries with disjoint domains
/// and disjoint ranges.
fn orthogonal_sums(seed: u64) -> CliResult<Item> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut certified = true;
    for p in [1.0, 1.5, 3.0, 7.0] {
        for _ in 0..25 {
            let k = rng.random_range(1..=4);
            let n = 2 * k + rng.random_range(0..3);
            let weights: Vec<f64> = (0..n).map(|_| rng.random_range(0.2..5.0)).collect();
            let space = AtomicMeasureSpace::weighted(weights)?;
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                perm.swap(i, rng.random_range(0..=i));
            }
            let mut sum = CMatrix::zeros(n, n);
            let mut top = 0.0f64;
            for i in 0..k {
                let phase = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
                let sys = SpatialSystem::new(vec![(perm[2 * i], perm[2 * i + 1], phase)])?;
                let lambda = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
                top = top.max(lambda.norm());
                sum += spi_matrix(&space, &sys, p)?.matrix * lambda;
            }
            let est = opnorm(&sum, &space, p, seed)?;
            certified &= est.certified;
            worst = worst.max((est.lower - top).abs() / top);
            count += 1;
        }
    }
    Ok(Item {
        name: "orthogonal-sums",
        passed: certified && worst <= 1e-6,
        detail: format!("{count} sums over p in {{1, 1.5, 3, 7}}, max relative deviation {worst:.3e}"),
    })
}

pub fn run_demo(dir: Option<&FsPath>, seed: u64) -> CliResult<Output> {
    // parse every graph first so a damaged file fails before any output
    let a2 = load(dir, "a2.json")?;
    let o2 = load(dir, "o2.json")?;
    let single = load(dir, "loop.json")?;
    let entry = load(dir, "loop-entry.json")?;
    load(dir, "chain3.json")?;
    let items = vec![
        a2_decomposition(&a2)?,
        o2_fixed_point(&o2)?,
        loop_kernel(&single)?,
        loop_entry_v_operator(&entry, seed)?,
        orthogonal_sums(seed)?,
    ];
    let all = items.iter().all(|i| i.passed);
    let mut text = String::new();
    for i in &items {
        let _ = writeln!(
            text,
            "[{}] {}: {}",
            Status::from_bool(i.passed).as_str(),
            i.name,
            i.detail
        );
    }
    let _ = writeln!(text, "verdict: {}", Status::from_bool(all).as_str());
    let json_items: Vec<Value> = items
        .iter()
        .map(|i| json!({ "name": i.name, "verdict": Status::from_bool(i.passed).as_str(), "detail": i.detail }))
        .collect();
    Ok(Output {
        json: json!({ "seed": seed, "items": json_items }),
        text,
        verdict: Some(Status::from_bool(all)),
    })
}
