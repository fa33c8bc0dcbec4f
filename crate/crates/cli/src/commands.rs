use std::fmt::Write as _;
use std::path::Path as FsPath;
use std::sync::Arc;

use lpga_core::graphs::{
    ck_completion_with_receivers, classify_vertex, compare_paths, desingularize_truncated, enumerate_paths,
    find_cycles, is_ck_subgraph, Graph, GraphJson, PathOrder, Provenance, VertexClass,
};
use lpga_core::leavitt::{
    acyclic_decomposition, embedded_ck_family, expand_to_level, gauge_apply, mul_monomials, normalize, phi_n,
    spectral_shift_gadget, symbolic_ck_check, BasisPolicy, Element, RationalComplex, Scalar,
};
use lpga_core::pnorm::{hermitian_idempotent_test, opnorm};
use lpga_core::spatial::{atomic_size_assignment, represent, spi_compose, support_of, CkFamily, SpatialOperator};
use lpga_core::verify::{
    check_ck_family, fixed_point_algebra_report, gauge_equivariance_check, injectivity_on_level, isometry_on_level,
    uniqueness_witness_suite, Status, SuiteOptions,
};
use serde_json::{json, Value};

use crate::args::{Cli, Command};
use crate::demo;
use crate::input::{
    build_family, load_element, load_graph, load_policy, parse_unimodular, require_graph, AnyElement, CliError,
    CliResult,
};
use crate::render::{
    element_json, matrix_json, matrix_text, norm_json, norm_text, report_json, report_text, verdict_str, Output,
};

pub fn execute(cli: &Cli) -> CliResult<Output> {
    if !(cli.p.is_finite() && cli.p >= 1.0) {
        return Err(CliError(format!("--p must be a real number >= 1, found {}", cli.p)));
    }
    let seed = cli.effective_seed()?;
    let mut out = match &cli.command {
        Command::Normalize { element } => normalize_cmd(cli, element)?,
        Command::Mul { left, right } => mul_cmd(cli, left, right)?,
        Command::Phi {
            element,
            n,
            expand,
            shift,
        } => phi_cmd(cli, element, *n, *expand, *shift)?,
        Command::Gauge { z, element } => gauge_cmd(cli, z, element.as_deref())?,
        Command::Decompose => decompose_cmd(cli)?,
        Command::CompleteCk { subgraph, receiver } => complete_ck_cmd(cli, subgraph, receiver)?,
        Command::Desingularize { depth } => desingularize_cmd(cli, *depth)?,
        Command::CkSubgraph { subgraph } => ck_subgraph_cmd(cli, subgraph)?,
        Command::Represent { element } => represent_cmd(cli, element)?,
        Command::Norm { element } => norm_cmd(cli, element, seed)?,
        Command::VerifyCk => verify_ck_cmd(cli)?,
        Command::Injectivity => injectivity_cmd(cli)?,
        Command::Isometry { trials } => isometry_cmd(cli, *trials, seed)?,
        Command::Uniqueness { trials } => uniqueness_cmd(cli, *trials, seed)?,
        Command::FixedPoint => fixed_point_cmd(cli)?,
        Command::Demo { data_dir } => demo::run_demo(data_dir.as_deref(), seed)?,
    };
    if let Value::Object(map) = &mut out.json {
        map.insert("command".into(), Value::from(cli.command.name()));
        if let Some(v) = out.verdict {
            map.insert("verdict".into(), Value::from(v.as_str()));
        }
    }
    Ok(out)
}

fn graph_name(g: &Graph) -> String {
    g.name().unwrap_or("").to_string()
}

fn any_normalize(x: &AnyElement, policy: &Arc<BasisPolicy>) -> CliResult<AnyElement> {
    Ok(match x {
        AnyElement::Exact(x) => AnyElement::Exact(normalize(x, policy)?),
        AnyElement::Numeric(x) => AnyElement::Numeric(normalize(x, policy)?),
    })
}

fn any_json(x: &AnyElement) -> Value {
    match x {
        AnyElement::Exact(x) => element_json(x),
        AnyElement::Numeric(x) => element_json(x),
    }
}

fn any_display(x: &AnyElement) -> String {
    match x {
        AnyElement::Exact(x) => x.display(),
        AnyElement::Numeric(x) => x.display(),
    }
}

fn normalize_cmd(cli: &Cli, path: &FsPath) -> CliResult<Output> {
    let g = require_graph(cli)?;
    let policy = load_policy(cli, &g)?;
    let x = load_element(&g, path)?;
    let nf = any_normalize(&x, &policy)?;
    let text = format!("{}\n  = {}\n", any_display(&x), any_display(&nf));
    Ok(Output::plain(
        json!({ "input": any_json(&x), "normal_form": any_json(&nf) }),
        text,
    ))
}

fn order_json(g: &Graph, order: &PathOrder) -> Value {
    match order {
        PathOrder::Equal => json!({ "relation": "equal" }),
        PathOrder::AlphaExtendsBeta(c) => json!({ "relation": "left_extends_right", "gamma": g.path_label(c) }),
        PathOrder::BetaExtendsAlpha(c) => json!({ "relation": "right_extends_left", "gamma": g.path_label(c) }),
        PathOrder::Incomparable => json!({ "relation": "incomparable" }),
    }
}

fn mul_cmd(cli: &Cli, left: &FsPath, right: &FsPath) -> CliResult<Output> {
    let g = require_graph(cli)?;
    let policy = load_policy(cli, &g)?;
    let x = load_element(&g, left)?;
    let y = load_element(&g, right)?;
    let product = match (&x, &y) {
        (AnyElement::Exact(a), AnyElement::Exact(b)) => AnyElement::Exact(normalize(&a.try_mul(b)?, &policy)?),
        _ => AnyElement::Numeric(normalize(&x.numeric().try_mul(&y.numeric())?, &policy)?),
    };
    let mut json = json!({ "left": any_json(&x), "right": any_json(&y), "product": any_json(&product) });
    let mut text = format!(
        "({}) · ({})\n  = {}\n",
        any_display(&x),
        any_display(&y),
        any_display(&product)
    );
    // for two monomials, how the inner paths compare under the prefix preorder
    let (xn, yn) = (x.numeric(), y.numeric());
    if let (Some((m1, _)), Some((m2, _)), 1, 1) = (xn.terms().next(), yn.terms().next(), xn.len(), yn.len()) {
        let order = compare_paths(&g, &m1.beta, &m2.alpha);
        let unit = mul_monomials(&g, m1, m2).map(|m| m.label(&g));
        let _ = writeln!(
            text,
            "  β₁ vs α₂: {}",
            order_json(&g, &order)["relation"].as_str().unwrap_or("")
        );
        json["inner_paths"] = order_json(&g, &order);
        json["monomial_product"] = unit.map_or(Value::Null, Value::from);
    }
    Ok(Output::plain(json, text))
}

fn phi_cmd(cli: &Cli, path: &FsPath, n: i64, expand: bool, shift: bool) -> CliResult<Output> {
    let g = require_graph(cli)?;
    let policy = load_policy(cli, &g)?;
    let x = load_element(&g, path)?;
    match any_normalize(&x, &policy)? {
        AnyElement::Exact(x) => phi_generic(&x, n, cli.level, expand, shift, &policy),
        AnyElement::Numeric(x) => phi_generic(&x, n, cli.level, expand, shift, &policy),
    }
}

fn phi_generic<C: Scalar>(
    x: &Element<C>,
    n: i64,
    level: usize,
    expand: bool,
    shift: bool,
    policy: &Arc<BasisPolicy>,
) -> CliResult<Output> {
    let y = phi_n(n, x);
    let mut json = json!({ "n": n, "input": element_json(x), "result": element_json(&y) });
    let mut text = format!("Φ_{n}({})\n  = {}\n", x.display(), y.display());
    if expand {
        match expand_to_level(&y, level) {
            Ok(e) => {
                let _ = writeln!(text, "  on level {level}: {}", e.display());
                json["expanded"] = json!({ "level": level, "element": element_json(&e) });
            }
            Err(e) => {
                let _ = writeln!(text, "  on level {level}: {e}");
                json["expanded"] = json!({ "level": level, "error": e.to_string() });
            }
        }
    }
    if shift {
        match spectral_shift_gadget(&y, n) {
            Ok(s) => {
                let holds = s.identities_hold(&y, policy)?;
                let _ = writeln!(
                    text,
                    "  x = {}\n  shifted = {}\n  identities: {}",
                    s.x.display(),
                    s.shifted.display(),
                    verdict_str(holds)
                );
                json["shift"] = json!({
                    "x": element_json(&s.x),
                    "x_star": element_json(&s.x_star),
                    "shifted": element_json(&s.shifted),
                    "identities_hold": holds,
                });
            }
            Err(e) => {
                let _ = writeln!(text, "  shift: {e}");
                json["shift"] = json!({ "error": e.to_string() });
            }
        }
    }
    Ok(Output::plain(json, text))
}

fn gauge_cmd(cli: &Cli, z_text: &str, element: Option<&FsPath>) -> CliResult<Output> {
    let g = require_graph(cli)?;
    let (exact_z, z) = parse_unimodular(z_text)?;
    let Some(path) = element else {
        let fam = build_family(cli, &g)?;
        let report = gauge_equivariance_check(&fam, &[z], cli.level);
        let json = json!({ "graph": graph_name(&g), "p": fam.p, "z": [z.re, z.im], "level": cli.level, "report": report_json(&report) });
        return Ok(Output {
            json,
            text: report_text(&report),
            verdict: Some(report.verdict),
        });
    };
    let x = load_element(&g, path)?;
    let y = match (&x, exact_z) {
        (AnyElement::Exact(x), Some(q)) => AnyElement::Exact(gauge_apply(&q, x)?),
        _ => AnyElement::Numeric(gauge_apply(&z, &x.numeric())?),
    };
    let text = format!("γ_z({})\n  = {}\n", any_display(&x), any_display(&y));
    Ok(Output::plain(
        json!({ "z": [z.re, z.im], "input": any_json(&x), "result": any_json(&y) }),
        text,
    ))
}

fn class_name(c: VertexClass) -> &'static str {
    match c {
        VertexClass::Source => "source",
        VertexClass::SourceAndSink => "source_and_sink",
        VertexClass::Regular => "regular",
        VertexClass::RegularSink => "regular_sink",
    }
}

fn decompose_cmd(cli: &Cli) -> CliResult<Output> {
    let g = require_graph(cli)?;
    let mut text = format!(
        "graph {}: {} vertices, {} edges\n",
        graph_name(&g),
        g.vertex_count(),
        g.edge_count()
    );
    let mut vertices = Vec::new();
    for name in g.vertex_names() {
        let class = class_name(classify_vertex(&g, name)?);
        let _ = writeln!(text, "  {name}: {class}");
        vertices.push(json!({ "id": name, "class": class }));
    }
    let cycles: Vec<Value> = find_cycles(&g)
        .iter()
        .map(|c| {
            let entries: Vec<&str> = c.entries.iter().map(|&e| g.edge_name(e)).collect();
            let _ = writeln!(
                text,
                "  cycle {} entries [{}]",
                g.path_label(&c.path),
                entries.join(", ")
            );
            json!({ "cycle": g.path_label(&c.path), "entries": entries })
        })
        .collect();
    let paths: Vec<String> = enumerate_paths(&g, cli.level, None)
        .iter()
        .map(|p| g.path_label(p))
        .collect();
    let _ = writeln!(text, "  {} paths of length <= {}", paths.len(), cli.level);
    let mut json = json!({
        "graph": graph_name(&g),
        "vertices": vertices,
        "cycles": cycles,
        "acyclic": g.is_acyclic(),
        "paths": { "max_len": cli.level, "count": paths.len(), "labels": paths },
    });
    if g.is_acyclic() {
        let dec = acyclic_decomposition(&g)?;
        let blocks: Vec<Value> = dec
            .blocks
            .iter()
            .map(|b| {
                let n = b.dimension();
                let labels: Vec<String> = b.paths.iter().map(|p| g.path_label(p)).collect();
                let name = g.vertex_name(b.source);
                let _ = writeln!(
                    text,
                    "  source {name}: n = {n}, block M_{n}, F = {{{}}}",
                    labels.join(", ")
                );
                json!({ "source": name, "n": n, "block": format!("M_{n}"), "paths": labels })
            })
            .collect();
        let _ = writeln!(text, "  dimension {}", dec.total_dimension());
        json["blocks"] = Value::Array(blocks);
        json["dimension"] = Value::from(dec.total_dimension());
    }
    Ok(Output::plain(json, text))
}

fn provenance(p: &Provenance) -> String {
    match p {
        Provenance::Original => "original".into(),
        Provenance::AddedFromQ => "added".into(),
        Provenance::Primed { of } => format!("primed:{of}"),
    }
}

fn graph_json(g: &Graph) -> Value {
    serde_json::to_value(GraphJson::from(g)).expect("graphs serialize")
}

fn complete_ck_cmd(cli: &Cli, subgraph: &FsPath, receivers: &[String]) -> CliResult<Output> {
    let q = require_graph(cli)?;
    let r = load_graph(subgraph)?;
    let ids = receivers.iter().map(|v| q.vertex(v)).collect::<Result<Vec<_>, _>>()?;
    let completion = ck_completion_with_receivers(&r, &q, &ids)?;
    let family = embedded_ck_family::<RationalComplex>(&completion, &q)?;
    let policy = load_policy(cli, &q)?;
    let symbolic = symbolic_ck_check(&family, &policy)?;
    let rbar = &completion.rbar;
    let mut text = format!(
        "R̄: {} vertices, {} edges; Y = {{{}}}\n",
        rbar.vertex_count(),
        rbar.edge_count(),
        completion.y.join(", ")
    );
    let mut family_json = serde_json::Map::new();
    let (mut e_map, mut s_map, mut t_map) = (serde_json::Map::new(), serde_json::Map::new(), serde_json::Map::new());
    for v in rbar.vertices() {
        let x = &family.e[v.index()];
        let _ = writeln!(text, "  E_{} = {}", rbar.vertex_name(v), x.display());
        e_map.insert(rbar.vertex_name(v).into(), Value::from(x.display()));
    }
    for a in rbar.edge_ids() {
        let (s, t) = (&family.s[a.index()], &family.t[a.index()]);
        let _ = writeln!(
            text,
            "  S_{0} = {1}, T_{0} = {2}",
            rbar.edge_name(a),
            s.display(),
            t.display()
        );
        s_map.insert(rbar.edge_name(a).into(), Value::from(s.display()));
        t_map.insert(rbar.edge_name(a).into(), Value::from(t.display()));
    }
    family_json.insert("E".into(), Value::Object(e_map));
    family_json.insert("S".into(), Value::Object(s_map));
    family_json.insert("T".into(), Value::Object(t_map));
    let violations: Vec<&str> = symbolic.violations().map(|c| c.relation.as_str()).collect();
    for v in &violations {
        let _ = writeln!(text, "  violated: {v}");
    }
    let passed = symbolic.passed();
    let _ = writeln!(
        text,
        "{} relations checked\nverdict: {}",
        symbolic.checks.len(),
        verdict_str(passed)
    );
    let tags = |names: Vec<String>, tags: &[Provenance]| -> Value {
        Value::Object(
            names
                .into_iter()
                .zip(tags)
                .map(|(n, p)| (n, Value::from(provenance(p))))
                .collect(),
        )
    };
    let json = json!({
        "rbar": graph_json(rbar),
        "saturated": graph_json(&completion.saturated),
        "y": completion.y,
        "vertex_tags": tags(rbar.vertex_names().to_vec(), &completion.vertex_tags),
        "edge_tags": tags(rbar.edge_ids().map(|a| rbar.edge_name(a).to_string()).collect(), &completion.edge_tags),
        "family": Value::Object(family_json),
        "relations_checked": symbolic.checks.len(),
        "violations": violations,
    });
    Ok(Output {
        json,
        text,
        verdict: Some(Status::from_bool(passed)),
    })
}

fn desingularize_cmd(cli: &Cli, depth: usize) -> CliResult<Output> {
    let g = require_graph(cli)?;
    let d = desingularize_truncated(&g, depth)?;
    let vertex_map: serde_json::Map<String, Value> = g
        .vertices()
        .map(|v| {
            (
                g.vertex_name(v).to_string(),
                Value::from(d.graph.vertex_name(d.vertex_map[v.index()])),
            )
        })
        .collect();
    let edge_map: serde_json::Map<String, Value> = g
        .edge_ids()
        .map(|a| {
            (
                g.edge_name(a).to_string(),
                Value::from(d.graph.edge_name(d.edge_map[a.index()])),
            )
        })
        .collect();
    let mut text = format!(
        "depth {depth}: {} vertices, {} edges\n",
        d.graph.vertex_count(),
        d.graph.edge_count()
    );
    for e in d.graph.edges() {
        let _ = writeln!(
            text,
            "  {}: {} -> {}",
            e.id,
            d.graph.vertex_name(e.source),
            d.graph.vertex_name(e.range)
        );
    }
    let json = json!({ "depth": depth, "graph": graph_json(&d.graph), "vertex_map": vertex_map, "edge_map": edge_map });
    Ok(Output::plain(json, text))
}

fn ck_subgraph_cmd(cli: &Cli, subgraph: &FsPath) -> CliResult<Output> {
    let q = require_graph(cli)?;
    let r = load_graph(subgraph)?;
    let is = is_ck_subgraph(&r, &q)?;
    let text = format!(
        "{} is {}a CK subgraph of {}\n",
        graph_name(&r),
        if is { "" } else { "not " },
        graph_name(&q)
    );
    Ok(Output::plain(
        json!({ "subgraph": graph_name(&r), "graph": graph_name(&q), "is_ck_subgraph": is }),
        text,
    ))
}

/// `π(s_α t_β)` assembled by composing spatial operators, so that it keeps a
/// certificate.
fn monomial_operator(fam: &CkFamily, m: &lpga_core::leavitt::Monomial) -> CliResult<SpatialOperator> {
    let mut s = fam.e[m.alpha.source().index()].clone();
    for &a in m.alpha.edges().iter().rev() {
        s = spi_compose(&fam.s[a.index()], &s)?;
    }
    let mut t = fam.e[m.beta.source().index()].clone();
    for &b in m.beta.edges().iter().rev() {
        t = spi_compose(&t, &fam.t[b.index()])?;
    }
    Ok(spi_compose(&s, &t)?)
}

fn represent_cmd(cli: &Cli, path: &FsPath) -> CliResult<Output> {
    let g = require_graph(cli)?;
    let fam = build_family(cli, &g)?;
    let x = load_element(&g, path)?.numeric();
    let m = represent(&x, &fam)?;
    let atoms = &fam.space.atoms;
    let support = support_of(&x, &fam).ok();
    let certificate = match (x.len(), x.terms().next()) {
        (1, Some((mono, c))) if c.is_unimodular() => monomial_operator(&fam, mono)
            .ok()
            .and_then(|op| op.scaled(*c).certificate)
            .map(|sys| {
                sys.triples()
                    .iter()
                    .map(|&(y, x, f)| json!([atoms[y], atoms[x], f.re, f.im]))
                    .collect::<Vec<_>>()
            }),
        _ => None,
    };
    let mut text = format!("π({}) on {} atoms, p = {}\n", x.display(), atoms.len(), fam.p);
    text.push_str(&matrix_text(&m, atoms));
    if let Some(s) = &support {
        let names: Vec<&str> = s.iter().map(|&i| atoms[i].as_str()).collect();
        let _ = writeln!(text, "  indicator of {{{}}}", names.join(", "));
    }
    if certificate.is_some() {
        text.push_str("  spatial\n");
    }
    let json = json!({
        "graph": graph_name(&g),
        "p": fam.p,
        "element": element_json(&x),
        "atoms": atoms,
        "weights": fam.space.weights,
        "matrix": matrix_json(&m),
        "support": support.map(|s| s.iter().map(|&i| atoms[i].clone()).collect::<Vec<_>>()),
        "certificate": certificate,
    });
    Ok(Output::plain(json, text))
}

fn norm_cmd(cli: &Cli, path: &FsPath, seed: u64) -> CliResult<Output> {
    let g = require_graph(cli)?;
    let fam = build_family(cli, &g)?;
    let x = load_element(&g, path)?.numeric();
    let m = represent(&x, &fam)?;
    let est = opnorm(&m, &fam.space, fam.p, seed)?;
    let mut text = format!("‖π({})‖_{} = {}\n", x.display(), fam.p, norm_text(&est));
    let idempotent = (&m * &m - &m).iter().all(|z| z.norm() <= 1e-9);
    let hermitian = if idempotent {
        let h = hermitian_idempotent_test(&m, &fam.space, fam.p, 8, seed)?;
        let _ = writeln!(
            text,
            "  idempotent, {}hermitian (max ‖exp(iλe)‖ = {:.12})",
            if h.is_hermitian { "" } else { "not " },
            h.max_exp_norm
        );
        Some(serde_json::to_value(&h).expect("reports serialize"))
    } else {
        None
    };
    let json = json!({
        "graph": graph_name(&g),
        "p": fam.p,
        "element": element_json(&x),
        "norm": norm_json(&est),
        "hermitian": hermitian,
    });
    Ok(Output::plain(json, text))
}

fn verify_ck_cmd(cli: &Cli) -> CliResult<Output> {
    let g = require_graph(cli)?;
    let fam = build_family(cli, &g)?;
    let sizes = atomic_size_assignment(&g, &Default::default())?;
    let report = check_ck_family(&fam);
    let size_map: serde_json::Map<String, Value> = g
        .vertices()
        .map(|v| (g.vertex_name(v).to_string(), Value::from(sizes[v.index()])))
        .collect();
    let json = json!({
        "graph": graph_name(&g),
        "p": fam.p,
        "sizes": size_map,
        "atoms": fam.space.atoms,
        "report": report_json(&report),
    });
    Ok(Output {
        json,
        text: report_text(&report),
        verdict: Some(report.verdict),
    })
}

fn injectivity_cmd(cli: &Cli) -> CliResult<Output> {
    let g = require_graph(cli)?;
    let fam = build_family(cli, &g)?;
    let policy = load_policy(cli, &g)?;
    let r = injectivity_on_level(&fam, cli.level, &policy);
    let mut text = format!(
        "level {}: {} reduced monomials, rank {}, kernel dimension {} ({})\n",
        r.level,
        r.basis_size,
        r.rank,
        r.kernel_dimension,
        if r.exact { "exact" } else { "floating" }
    );
    for w in &r.witness_labels {
        let _ = writeln!(text, "  kernel: {w}");
    }
    text.push_str(&report_text(&r.report));
    let mut json = serde_json::to_value(&r).expect("reports serialize");
    json["graph"] = Value::from(graph_name(&g));
    json["p"] = Value::from(fam.p);
    Ok(Output {
        json,
        text,
        verdict: Some(r.report.verdict),
    })
}

fn isometry_cmd(cli: &Cli, trials: usize, seed: u64) -> CliResult<Output> {
    let g = require_graph(cli)?;
    let fam = build_family(cli, &g)?;
    let r = isometry_on_level(&fam, cli.level, fam.p, trials, seed)?;
    let mut text = format!(
        "level {}, p = {}: max relative deviation {:.3e} over {} certified trials ({} uncertified)\n",
        r.level, r.p, r.max_relative_deviation, r.certified_trials, r.uncertified_trials
    );
    text.push_str(&report_text(&r.report));
    let mut json = serde_json::to_value(&r).expect("reports serialize");
    json["graph"] = Value::from(graph_name(&g));
    Ok(Output {
        json,
        text,
        verdict: Some(r.report.verdict),
    })
}

fn uniqueness_cmd(cli: &Cli, trials: usize, seed: u64) -> CliResult<Output> {
    let g = require_graph(cli)?;
    let policy = load_policy(cli, &g)?;
    // graphs without a finite atomic family still get the symbolic checks
    let fam = build_family(cli, &g).ok();
    let options = SuiteOptions { p: cli.p, trials, seed };
    let report = uniqueness_witness_suite(&g, fam.as_ref(), cli.level, &policy, options)?;
    let json = json!({
        "graph": graph_name(&g),
        "p": cli.p,
        "level": cli.level,
        "atomic_family": fam.is_some(),
        "report": report_json(&report),
    });
    Ok(Output {
        json,
        text: report_text(&report),
        verdict: Some(report.verdict),
    })
}

fn fixed_point_cmd(cli: &Cli) -> CliResult<Output> {
    let g = require_graph(cli)?;
    let r = fixed_point_algebra_report(&g, cli.level)?;
    let mut text = format!("level {}: dimension {}\n", r.level, r.total_dimension);
    for b in &r.blocks {
        let _ = writeln!(
            text,
            "  {}: {} paths, block of dimension {}",
            b.vertex, b.paths, b.dimension
        );
    }
    text.push_str(&report_text(&r.report));
    let mut json = serde_json::to_value(&r).expect("reports serialize");
    json["graph"] = Value::from(graph_name(&g));
    Ok(Output {
        json,
        text,
        verdict: Some(r.report.verdict),
    })
}
