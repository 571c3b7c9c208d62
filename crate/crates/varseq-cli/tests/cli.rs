//! End-to-end runs of the problem fixtures: exit codes, schema validity,
//! determinism and the physics values in the reports.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Instant;

use varseq_cli::schema::validate_report;
use varseq_core::parse::{parse_expr, parse_form};
use varseq_core::{Ctx, Expr, JetContext, MultiIndex};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_varseq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_fixture(name: &str) -> (serde_json::Value, Output) {
    let out = run_cli(&["run", fixture(name).to_str().unwrap()]);
    let doc: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("stdout is one JSON document");
    validate_report(&doc).expect("report validates against the schema");
    (doc, out)
}

fn mech() -> Ctx {
    JetContext::simple(1, 1, 1)
}

fn u(idx: &[usize]) -> Expr {
    Expr::fiber_var(0, MultiIndex::new(idx.to_vec()))
}

#[test]
fn harmonic_oscillator_report() {
    let (doc, out) = run_fixture("harmonic_oscillator.json");
    assert!(out.status.success());
    let ctx = mech();

    let coeff = doc["results"]["euler_lagrange"]["coefficients"][0]
        .as_str()
        .unwrap();
    let parsed = parse_expr(&ctx, coeff).unwrap();
    let expected = u(&[0, 0]).add(&u(&[])).neg();
    assert!(parsed.sub(&expected).is_zero(), "E = -(u_xx + u)");

    assert_eq!(doc["results"]["helmholtz"]["locally_variational"], true);
    assert_eq!(doc["results"]["symmetry"][0]["is_symmetry"], true);

    let current = doc["results"]["noether"][0]["current"].as_str().unwrap();
    let parsed = parse_form(&ctx, current).unwrap();
    let expected = varseq_core::DiffForm::scalar(
        ctx.clone(),
        1,
        u(&[0])
            .pow(2)
            .add(&u(&[]).pow(2))
            .div_constant(&Expr::int(-2))
            .unwrap(),
    );
    assert!(parsed.equiv(&expected), "ε = -(u_x² + u²)/2");

    assert_eq!(doc["results"]["nbh"][0]["conserved"], true);
    // with μ = 0 and an exact symmetry, the NBH current is a Noether current
    assert_eq!(doc["results"]["nbh"][0]["mu"]["is_noether_current"], true);
    assert_eq!(doc["verification"]["all_passed"], true);

    // human summary goes to stderr in json mode
    let summary = String::from_utf8_lossy(&out.stderr);
    assert!(summary.contains("euler_lagrange"));
}

#[test]
fn free_particle_boost_report() {
    let (doc, out) = run_fixture("free_particle_boost.json");
    assert!(out.status.success());
    let ctx = mech();
    let nbh = doc["results"]["nbh"][0]["nbh_current"].as_str().unwrap();
    let parsed = parse_form(&ctx, nbh).unwrap();
    let expected = varseq_core::DiffForm::scalar(
        ctx.clone(),
        1,
        Expr::base_var(0).mul(&u(&[0])).sub(&u(&[])),
    );
    assert!(parsed.equiv(&expected), "NBH current x·u_x − u");
    assert_eq!(doc["results"]["nbh"][0]["conserved"], true);
    assert_eq!(doc["results"]["on_shell"][0]["vanishes_on_shell"], true);
}

#[test]
fn wave_energy_report() {
    let (doc, out) = run_fixture("wave_energy.json");
    assert!(out.status.success());
    assert_eq!(doc["results"]["nbh"][0]["conserved"], true);
    let nbh = doc["results"]["nbh"][0]["nbh_current"].as_str().unwrap();
    assert_ne!(nbh, "0", "the wave energy current is nontrivial");
}

#[test]
fn negative_helmholtz_verdict_exits_zero() {
    let (doc, out) = run_fixture("damping_source.json");
    assert!(out.status.success(), "negative verdicts are not failures");
    assert_eq!(doc["results"]["helmholtz"]["locally_variational"], false);
}

#[test]
fn trivial_lagrangian_mu_branch() {
    let (doc, out) = run_fixture("trivial_lagrangian_mu.json");
    assert!(out.status.success());
    let mu = &doc["results"]["nbh"][0]["mu"];
    assert_eq!(mu["shifted_invariant"], true);
    assert_eq!(mu["exact_momentum_vanishes"], true);
    assert_eq!(mu["noether_hypothesis"], true);
    assert_eq!(mu["potential_residual"], "0");
}

#[test]
fn empty_tasks_is_an_input_error() {
    let out = run_cli(&["run", fixture("invalid_empty_tasks.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no tasks"));
}

#[test]
fn non_symmetry_is_a_verification_failure() {
    let out = run_cli(&["run", fixture("nbh_non_symmetry.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["verification"]["all_passed"], false);
}

#[test]
fn missing_file_and_parse_errors_exit_one() {
    let out = run_cli(&["run", "/nonexistent/problem.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn task_override_flag() {
    let out = run_cli(&[
        "run",
        fixture("harmonic_oscillator.json").to_str().unwrap(),
        "--tasks",
        "euler_lagrange",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["results"]["euler_lagrange"].is_object());
    assert!(doc["results"].get("noether").is_none());
}

#[test]
fn text_format_writes_summary_to_stdout() {
    let out = run_cli(&[
        "run",
        fixture("harmonic_oscillator.json").to_str().unwrap(),
        "--format",
        "text",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("euler_lagrange"));
    assert!(serde_json::from_str::<serde_json::Value>(&text).is_err());
}

#[test]
fn reports_are_deterministic() {
    let (a, _) = run_fixture("harmonic_oscillator.json");
    let (b, _) = run_fixture("harmonic_oscillator.json");
    assert_eq!(a["results"], b["results"]);
    assert_eq!(a["inputs"], b["inputs"]);
    // and re-running the echoed inputs reproduces the same results
    let tmp = std::env::temp_dir().join("varseq_echo_roundtrip.json");
    std::fs::write(&tmp, serde_json::to_string(&a["inputs"]).unwrap()).unwrap();
    let out = run_cli(&["run", tmp.to_str().unwrap()]);
    assert!(out.status.success());
    let c: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(a["results"], c["results"]);
}

#[test]
fn all_fixtures_complete_quickly_and_validate() {
    let started = Instant::now();
    for name in [
        "harmonic_oscillator.json",
        "free_particle_boost.json",
        "wave_energy.json",
        "damping_source.json",
        "trivial_lagrangian_mu.json",
    ] {
        let (_doc, out) = run_fixture(name);
        assert!(out.status.success(), "{name} should pass");
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 600.0, "full fixture run exceeded 10 minutes");
    println!("criterion 9: PASS — all fixtures run end-to-end with schema-valid reports in {elapsed:.1} s");
}

#[test]
fn order_cap_is_enforced() {
    let tmp = std::env::temp_dir().join("varseq_overcap.json");
    std::fs::write(
        &tmp,
        r#"{"context":{"n":1,"m":1,"r":9,"base":["x"],"fiber":["u"]},
            "lagrangian":"(u) dx1","tasks":["euler_lagrange"]}"#,
    )
    .unwrap();
    let out = run_cli(&["run", tmp.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("VARSEQ_MAX_ORDER"));
}

#[test]
fn second_order_beam_fixture() {
    let (doc, out) = run_fixture("beam_bending.json");
    assert!(out.status.success());
    let ctx = JetContext::simple(1, 1, 2);
    let coeff = doc["results"]["euler_lagrange"]["coefficients"][0]
        .as_str()
        .unwrap();
    let parsed = parse_expr(&ctx, coeff).unwrap();
    assert_eq!(parsed, u(&[0, 0, 0, 0]));
    assert_eq!(doc["results"]["on_shell"][0]["vanishes_on_shell"], true);
}

#[test]
fn coupled_fields_fixture() {
    let (doc, out) = run_fixture("coupled_oscillators.json");
    assert!(out.status.success());
    assert_eq!(doc["results"]["helmholtz"]["locally_variational"], true);
    assert_eq!(doc["results"]["nbh"][0]["conserved"], true);
    let coeffs = doc["results"]["euler_lagrange"]["coefficients"]
        .as_array()
        .unwrap();
    assert_eq!(coeffs.len(), 2);
}
