//! `lpga`: command-line front end for `lpga-core`.
//!
//! [`run`] parses an argument list, executes one command and writes JSON (or
//! `--format text`) to the given writer. Exit status: 0 on success, 1 when a
//! verification verdict fails, 2 on usage, input or library errors.

mod args;
mod commands;
mod demo;
mod input;
mod render;

use std::io::Write;

use clap::Parser;

pub use args::{Cli, Command, Format};
pub use render::Output;

/// Library operation → command that reaches it.
pub const COVERAGE: &[(&str, &str)] = &[
    ("classify_vertex", "decompose"),
    ("enumerate_paths", "decompose"),
    ("compare_paths", "mul"),
    ("find_cycles", "decompose"),
    ("find_nonreturning_path", "uniqueness"),
    ("is_ck_subgraph", "ck-subgraph"),
    ("ck_completion", "complete-ck"),
    ("desingularize_truncated", "desingularize"),
    ("mul_monomials", "mul"),
    ("mul", "mul"),
    ("normalize", "normalize"),
    ("expand_to_level", "phi"),
    ("gauge_apply", "gauge"),
    ("phi_n", "phi"),
    ("acyclic_decomposition", "decompose"),
    ("embedded_ck_family", "complete-ck"),
    ("symbolic_ck_check", "complete-ck"),
    ("v_operator", "uniqueness"),
    ("spectral_shift_gadget", "phi"),
    ("spi_matrix", "verify-ck"),
    ("spi_compose", "represent"),
    ("spi_reverse", "verify-ck"),
    ("atomic_size_assignment", "verify-ck"),
    ("atomic_ck_family", "verify-ck"),
    ("represent", "represent"),
    ("support_of", "represent"),
    ("opnorm", "norm"),
    ("hermitian_idempotent_test", "norm"),
    ("check_ck_family", "verify-ck"),
    ("injectivity_on_level", "injectivity"),
    ("isometry_on_level", "isometry"),
    ("gauge_equivariance_check", "gauge"),
    ("uniqueness_witness_suite", "uniqueness"),
    ("fixed_point_algebra_report", "fixed-point"),
    ("demo", "demo"),
];

/// Command names as typed on the command line.
pub const COMMANDS: &[&str] = &[
    "normalize",
    "mul",
    "phi",
    "gauge",
    "decompose",
    "complete-ck",
    "desingularize",
    "ck-subgraph",
    "represent",
    "norm",
    "verify-ck",
    "injectivity",
    "isometry",
    "uniqueness",
    "fixed-point",
    "demo",
];

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match commands::execute(&cli) {
        Ok(output) => {
            let text = match cli.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&output.json).expect("json values serialize");
                    s.push('\n');
                    s
                }
                Format::Text => output.text.clone(),
            };
            let _ = out.write_all(text.as_bytes());
            if output.failed() {
                1
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
