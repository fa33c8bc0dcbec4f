use std::path::{Path, PathBuf};
use std::process::Command as Process;

use clap::CommandFactory;
use lpga_cli::{run, Cli, COMMANDS, COVERAGE};
use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn data(name: &str) -> String {
    root().join("data").join(name).display().to_string()
}

fn fixture(name: &str) -> String {
    root().join("tests/fixtures").join(name).display().to_string()
}

fn lpga(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["lpga"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn lpga_json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = lpga(args);
    let json = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: stdout {out:?} stderr {err:?}"));
    (code, json)
}

/// Compares with `tests/golden/<name>`; `UPDATE_GOLDEN=1` rewrites the file.
fn golden(name: &str, args: &[&str]) {
    let (code, out, err) = lpga(args);
    assert!(code <= 1, "{name}: exit {code}: {err}");
    let path = root().join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &out).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(out, expected, "{name} drifted from its golden file");
}

#[test]
fn decompose_a2_lists_one_block_m2() {
    let (code, json) = lpga_json(&["decompose", "--graph", &data("a2.json")]);
    assert_eq!(code, 0);
    let blocks = json["blocks"].as_array().unwrap();
    assert_eq!(blocks.len(), 1);
    assert_eq!(blocks[0]["source"], "v");
    assert_eq!(blocks[0]["n"], 2);
    assert_eq!(blocks[0]["block"], "M_2");
    assert_eq!(json["dimension"], 4);
    assert_eq!(json["vertices"][0]["class"], "source");
}

#[test]
fn verify_ck_single_loop_passes() {
    let (code, json) = lpga_json(&["verify-ck", "--graph", &data("loop.json"), "--p", "3", "--phase", "a=1"]);
    assert_eq!(code, 0);
    assert_eq!(json["verdict"], "pass");
    assert_eq!(json["report"]["verdict"], "pass");
    assert_eq!(json["atoms"], serde_json::json!(["v.0"]));
}

#[test]
fn injectivity_on_the_loop_fails_with_witness() {
    let (code, json) = lpga_json(&["injectivity", "--graph", &data("loop.json"), "--p", "3", "--level", "1"]);
    assert_eq!(code, 1);
    assert_eq!(json["verdict"], "fail");
    assert!(json["kernel_dimension"].as_u64().unwrap() >= 1);
    let labels: Vec<&str> = json["witness_labels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert!(labels.contains(&"-e_v + s_a"), "{labels:?}");
}

#[test]
fn injectivity_with_a_phase_moves_the_witness() {
    let (code, json) = lpga_json(&[
        "injectivity",
        "--graph",
        &data("loop.json"),
        "--level",
        "1",
        "--phase",
        "a=0,1",
    ]);
    assert_eq!(code, 1);
    let labels = json["witness_labels"].to_string();
    assert!(labels.contains("-i·e_v + s_a"), "{labels}");
}

#[test]
fn acyclic_verification_commands_pass() {
    for args in [
        vec!["injectivity", "--graph", &data("chain3.json")],
        vec!["isometry", "--graph", &data("chain3.json"), "--p", "1.5"],
        vec!["uniqueness", "--graph", &data("chain3.json"), "--level", "2"],
        vec!["fixed-point", "--graph", &data("o2.json"), "--level", "2"],
        vec!["gauge", "--graph", &data("a2.json"), "--z", "0,1"],
    ] {
        let (code, json) = lpga_json(&args);
        assert_eq!((code, json["verdict"].as_str()), (0, Some("pass")), "{args:?}");
    }
}

#[test]
fn uniqueness_without_an_atomic_family_runs_symbolically() {
    let (code, json) = lpga_json(&["uniqueness", "--graph", &data("loop-entry.json"), "--level", "2"]);
    assert_eq!(code, 0);
    assert_eq!(json["atomic_family"], false);
    let skipped = json["report"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "skipped")
        .count();
    assert!(skipped >= 1);
}

#[test]
fn usage_and_input_errors_exit_2() {
    let a2 = data("a2.json");
    let loop_graph = data("loop.json");
    let short = fixture("weights-short.json");
    for args in [
        vec!["bogus"],
        vec!["decompose"],
        vec!["decompose", "--graph", "/nonexistent/graph.json"],
        vec!["verify-ck", "--graph", &loop_graph, "--phase", "a=1.1"],
        vec!["verify-ck", "--graph", &loop_graph, "--phase", "b=1"],
        vec!["verify-ck", "--graph", &loop_graph, "--p", "0.5"],
        vec!["verify-ck", "--graph", &a2, "--weights", &short],
        vec!["isometry", "--graph", &loop_graph],
        vec!["uniqueness", "--graph", &loop_graph],
    ] {
        let (code, _, err) = lpga(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(!err.is_empty());
    }
}

#[test]
fn weights_and_policy_flags_are_honoured() {
    let (code, json) = lpga_json(&[
        "verify-ck",
        "--graph",
        &data("a2.json"),
        "--p",
        "2",
        "--weights",
        &fixture("weights.json"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(json["verdict"], "pass");

    let g = data("loop-entry.json");
    let (_, default) = lpga_json(&["normalize", "--graph", &g, "--element", &fixture("sc_tc.json")]);
    assert_eq!(default["normal_form"]["display"], "s_c t_c");
    let policy = fixture("policy-c.json");
    let (_, moved) = lpga_json(&[
        "normalize",
        "--graph",
        &g,
        "--element",
        &fixture("sc_tc.json"),
        "--policy",
        &policy,
    ]);
    assert_eq!(moved["normal_form"]["display"], "e_v - s_a t_a");
}

#[test]
fn algebra_commands() {
    let g = data("loop-entry.json");
    let (sa, ta) = (fixture("sa.json"), fixture("ta.json"));
    let (_, json) = lpga_json(&["mul", "--graph", &g, "--left", &ta, "--right", &sa]);
    assert_eq!(json["product"]["display"], "e_v");
    assert_eq!(json["inner_paths"]["relation"], "equal");
    let (_, json) = lpga_json(&["mul", "--graph", &g, "--left", &sa, "--right", &ta]);
    assert_eq!(json["product"]["display"], "e_v - s_c t_c");

    let (_, json) = lpga_json(&["phi", "--graph", &g, "--element", &sa, "--n", "1", "--shift"]);
    assert_eq!(json["result"]["display"], "s_a");
    assert_eq!(json["shift"]["identities_hold"], true);
    let (_, json) = lpga_json(&["phi", "--graph", &g, "--element", &sa, "--n", "-1"]);
    assert_eq!(json["result"]["display"], "0");

    let (_, json) = lpga_json(&["gauge", "--graph", &g, "--element", &sa, "--z", "0,1"]);
    assert_eq!(json["result"]["display"], "i·s_a");
    assert_eq!(json["result"]["exact"], true);
}

#[test]
fn surgery_commands() {
    let g = data("loop-entry.json");
    let sub = fixture("vertex-v.json");
    let (code, json) = lpga_json(&["ck-subgraph", "--graph", &g, "--subgraph", &sub]);
    assert_eq!((code, json["is_ck_subgraph"].as_bool()), (0, Some(true)));
    let (code, json) = lpga_json(&["complete-ck", "--graph", &g, "--subgraph", &sub]);
    assert_eq!((code, json["verdict"].as_str()), (0, Some("pass")));
    let (code, json) = lpga_json(&["desingularize", "--graph", &g, "--depth", "2"]);
    assert_eq!(code, 0);
    assert_eq!(json["graph"]["vertices"].as_array().unwrap().len(), 4);
    assert_eq!(json["vertex_map"]["w"], "w");
}

#[test]
fn represent_and_norm() {
    let g = data("chain3.json");
    let x = fixture("chain-x.json");
    let (code, json) = lpga_json(&["represent", "--graph", &g, "--element", &x, "--p", "3"]);
    assert_eq!(code, 0);
    assert_eq!(json["matrix"]["rows"], 3);
    assert_eq!(json["atoms"], serde_json::json!(["u.0", "v.0", "w.0"]));
    let (code, json) = lpga_json(&["norm", "--graph", &g, "--element", &x, "--p", "3"]);
    assert_eq!(code, 0);
    assert_eq!(json["norm"]["certified"], true);

    // -i·s_a on A2: a phased matrix unit from the v-atom to the w-atom
    let (_, json) = lpga_json(&[
        "represent",
        "--graph",
        &data("a2.json"),
        "--element",
        &fixture("a2-sa.json"),
    ]);
    assert_eq!(json["support"], Value::Null);
    assert_eq!(
        json["matrix"]["data"],
        serde_json::json!([[0.0, 0.0], [0.0, 0.0], [0.0, -1.0], [0.0, 0.0]])
    );
    assert_eq!(json["certificate"], serde_json::json!([["w.0", "v.0", 0.0, -1.0]]));
}

#[test]
fn outputs_are_byte_stable() {
    golden("decompose-a2.json", &["decompose", "--graph", &data("a2.json")]);
    golden(
        "verify-ck-loop.txt",
        &[
            "verify-ck",
            "--graph",
            &data("loop.json"),
            "--p",
            "3",
            "--phase",
            "a=1",
            "--format",
            "text",
        ],
    );
    golden(
        "injectivity-loop.json",
        &["injectivity", "--graph", &data("loop.json"), "--p", "3", "--level", "1"],
    );
    golden(
        "fixed-point-o2.txt",
        &[
            "fixed-point",
            "--graph",
            &data("o2.json"),
            "--level",
            "2",
            "--format",
            "text",
        ],
    );
    golden(
        "isometry-chain3.json",
        &["isometry", "--graph", &data("chain3.json"), "--p", "3", "--seed", "5"],
    );
    golden("demo.txt", &["demo", "--format", "text", "--seed", "0"]);
    let args = ["isometry", "--graph", &data("chain3.json"), "--p", "1.5", "--seed", "9"];
    assert_eq!(lpga(&args).1, lpga(&args).1);
}

#[test]
fn every_library_operation_is_reachable() {
    const OPERATIONS: &[&str] = &[
        "classify_vertex",
        "enumerate_paths",
        "compare_paths",
        "find_cycles",
        "find_nonreturning_path",
        "is_ck_subgraph",
        "ck_completion",
        "desingularize_truncated",
        "mul_monomials",
        "mul",
        "normalize",
        "expand_to_level",
        "gauge_apply",
        "phi_n",
        "acyclic_decomposition",
        "embedded_ck_family",
        "symbolic_ck_check",
        "v_operator",
        "spectral_shift_gadget",
        "spi_matrix",
        "spi_compose",
        "spi_reverse",
        "atomic_size_assignment",
        "atomic_ck_family",
        "represent",
        "support_of",
        "opnorm",
        "hermitian_idempotent_test",
        "check_ck_family",
        "injectivity_on_level",
        "isometry_on_level",
        "gauge_equivariance_check",
        "uniqueness_witness_suite",
        "fixed_point_algebra_report",
        "demo",
    ];
    for op in OPERATIONS {
        let command = COVERAGE.iter().find(|(o, _)| o == op).map(|(_, c)| *c);
        let command = command.unwrap_or_else(|| panic!("`{op}` is not reachable from any command"));
        assert!(
            COMMANDS.contains(&command),
            "`{op}` maps to unknown command `{command}`"
        );
    }
    let parsed: Vec<String> = Cli::command()
        .get_subcommands()
        .map(|c| c.get_name().to_string())
        .collect();
    assert_eq!(parsed, COMMANDS.iter().map(|s| s.to_string()).collect::<Vec<_>>());
    for command in COMMANDS {
        assert!(
            COVERAGE.iter().any(|(_, c)| c == command),
            "`{command}` exposes no library operation"
        );
    }
}

#[test]
fn demo_passes_and_formats_agree() {
    let (code, json) = lpga_json(&["demo"]);
    assert_eq!(code, 0);
    assert_eq!(json["verdict"], "pass");
    let (code, text, _) = lpga(&["demo", "--format", "text"]);
    assert_eq!(code, 0);
    let from_json: Vec<(String, String)> = json["items"]
        .as_array()
        .unwrap()
        .iter()
        .map(|i| {
            (
                i["name"].as_str().unwrap().to_string(),
                i["verdict"].as_str().unwrap().to_string(),
            )
        })
        .collect();
    let from_text: Vec<(String, String)> = text
        .lines()
        .filter_map(|l| {
            let (status, rest) = l.strip_prefix('[')?.split_once("] ")?;
            Some((rest.split(':').next()?.to_string(), status.to_string()))
        })
        .collect();
    assert_eq!(from_json.len(), 5);
    assert_eq!(from_json, from_text);
    assert!(text.ends_with("verdict: pass\n"));
}

fn copy_data(dir: &Path) {
    for entry in std::fs::read_dir(root().join("data")).unwrap() {
        let entry = entry.unwrap();
        std::fs::copy(entry.path(), dir.join(entry.file_name())).unwrap();
    }
}

#[test]
fn demo_reads_a_data_directory() {
    let dir = tempfile::tempdir().unwrap();
    copy_data(dir.path());
    let (code, _, _) = lpga(&["demo", "--data-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0);

    std::fs::write(
        dir.path().join("o2.json"),
        "{\"vertices\": [\"v\"], \"edges\": [{\"id\": \"a\"",
    )
    .unwrap();
    let (code, out, err) = lpga(&["demo", "--data-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("o2.json"), "{err}");
}

#[test]
fn binary_demo_exits_zero_and_honours_lpga_seed() {
    let bin = env!("CARGO_BIN_EXE_lpga");
    let status = Process::new(bin).arg("demo").output().unwrap();
    assert_eq!(status.status.code(), Some(0));

    let seeded = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Process::new(bin);
        cmd.args(["demo", "--format", "json"]);
        if let Some(f) = flag {
            cmd.args(["--seed", f]);
        }
        match env {
            Some(v) => cmd.env("LPGA_SEED", v),
            None => cmd.env_remove("LPGA_SEED"),
        };
        let out = cmd.output().unwrap();
        serde_json::from_slice::<Value>(&out.stdout).unwrap()["seed"].clone()
    };
    assert_eq!(seeded(None, None), 0);
    assert_eq!(seeded(Some("17"), None), 17);
    assert_eq!(seeded(Some("17"), Some("3")), 3);

    let bad = Process::new(bin).arg("demo").env("LPGA_SEED", "x").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
