use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn bimod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bimod")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

const SMALL_SWAP: [&str; 12] = [
    "check",
    "--suite",
    "swap",
    "--trials",
    "6",
    "--headroom-cap",
    "10",
    "--sample-weight",
    "2",
    "--sample-level",
    "1",
    "--json",
];

#[test]
fn verify_reports_every_family() {
    let out = bimod(&["verify", "--json"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["tool"], "bimod");
    assert_eq!(r["command"], "verify");
    assert_eq!(r["passed"], true);
    assert_eq!(r["result"]["families"].as_array().unwrap().len(), 4);
}

#[test]
fn shift_suite_passes_on_a_small_grid() {
    let out = bimod(&["verify", "--suite", "shift", "--grid-weight", "2", "--max-level", "1"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).ends_with("verify: PASS\n"));
}

#[test]
fn seeded_reports_are_identical_apart_from_timings() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timings");
        v
    };
    let a = strip(json(&bimod(&SMALL_SWAP)));
    let b = strip(json(&bimod(&SMALL_SWAP)));
    assert_eq!(a, b);
    assert_eq!(a["seed"], 7);
    assert_eq!(a["passed"], true);
}

#[test]
fn config_values_apply_beneath_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# defaults\nvoa = virasoro:1/2\ntrials=3\nheadroom_cap=10\nprobe-weight=2\n").unwrap();
    let out = bimod(&[
        "check",
        "--suite",
        "swap",
        "--trials",
        "4",
        "--sample-weight",
        "2",
        "--sample-level",
        "1",
        "--json",
        "--config",
        cfg.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert_eq!(r["params"]["trials"], 4);
    assert_eq!(r["params"]["headroom"]["cap"], 10);
    assert!(r["algebra"].as_str().unwrap().starts_with("virasoro"));
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "trails=3\n").unwrap();
    let out = bimod(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn products_print_in_the_element_syntax() {
    let out = bimod(&["product", "--u", "a(-1)vac", "--v", "vac", "--m", "0", "--p", "0", "--n", "0"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().next(), Some("a(-1)vac"));
}

#[test]
fn exit_codes() {
    // Weight outside the requested build.
    let out =
        bimod(&["product", "--u", "a(-3)vac", "--v", "vac", "--m", "0", "--p", "0", "--n", "0", "--max-weight", "2"]);
    assert_eq!(code(&out), 3);
    // Generator the algebra does not have.
    let out = bimod(&["product", "--u", "L(-2)vac", "--v", "vac", "--m", "0", "--p", "0", "--n", "0"]);
    assert_eq!(code(&out), 2);
    // Syntax error.
    let out = bimod(&["product", "--u", "a(-1)", "--v", "vac", "--m", "0", "--p", "0", "--n", "0"]);
    assert_eq!(code(&out), 2);
    // Structure checks need a rational algebra with a module table.
    let out = bimod(&["structure", "--n", "0", "--m", "0"]);
    assert_eq!(code(&out), 2);
    // Bad flag.
    assert_eq!(code(&bimod(&["verify", "--bogus"])), 2);
}

#[test]
fn failed_checks_exit_one_and_still_write_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = bimod(&[
        "membership",
        "--n",
        "0",
        "--m",
        "0",
        "--cutoff",
        "6",
        "--element",
        "a(-1)vac",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    let r: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["passed"], false);
    assert_eq!(r["result"]["member"], false);
}

#[test]
fn shifted_element_is_a_relation() {
    // (L(-1) + L(0)) a(-1)vac = a(-2)vac + a(-1)vac.
    let out = bimod(&["membership", "--n", "0", "--m", "0", "--cutoff", "6", "--element", "a(-2)vac + a(-1)vac"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn quotient_dimension_of_the_ising_zhu_algebra() {
    let out = bimod(&["--voa", "ising", "quotient-dim", "--n", "0", "--m", "0", "--cutoff", "8", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["result"]["dim"], 3);
}

#[test]
fn level_products_on_a_fock_module() {
    let out = bimod(&[
        "rep-check",
        "--module",
        "fock:1/2",
        "--suite",
        "level-product",
        "--grid-weight",
        "1",
        "--max-level",
        "1",
        "--levels",
        "2",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let out = bimod(&["rep-check", "--module", "fock:1", "--suite", "omega", "--m", "1", "--levels", "3"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn induced_heisenberg_module() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("u.json");
    fs::write(&spec, r#"{"dimension": 1, "generators": [{"element": "a(-1)vac", "matrix": [[1]]}]}"#).unwrap();
    let out = bimod(&[
        "verma",
        "--levels",
        "2",
        "--cutoff",
        "8",
        "--rep-weight",
        "4",
        "--probe-weight",
        "1",
        "--range",
        "2",
        "--u-spec",
        spec.to_str().unwrap(),
        "--target",
        "fock:1",
        "--json",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    let dims: Vec<u64> = r["result"]["levels"].as_array().unwrap().iter().map(|l| l["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![1, 1, 2]);
    assert_eq!(r["result"]["grids"].as_array().unwrap().len(), 4);
}
