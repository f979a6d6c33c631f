use std::io::Write;
use std::path::{Path, PathBuf};

use k3lat_cli::{run, EXIT_INPUT, EXIT_OK, EXIT_REPORTED};
use serde_json::Value;

fn data(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(rel).to_string_lossy().into_owned()
}

fn k3lat(args: &[&str]) -> k3lat_cli::Output {
    run(std::iter::once("k3lat").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = k3lat(&all);
    assert!(out.stderr.is_empty(), "{}", out.stderr);
    (out.code, serde_json::from_str(&out.stdout).unwrap())
}

fn temp(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::File::create(&p).unwrap().write_all(body.as_bytes()).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn classify_shipped_configs() {
    let (code, v) = json(&["classify", &data("configs/example-D6tilde.json")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["kind"], "Hyperbolic");
    assert_eq!(v["signature"], serde_json::json!([1, 9, 0]));
    let (_, v) = json(&["classify", &data("configs/fermat-I4-cycle.json")]);
    assert_eq!(v["kind"], "Parabolic");
}

#[test]
fn classify_reports_violations() {
    let dir = tempfile::tempdir().unwrap();
    // two genus two curves meeting once span a positive definite plane
    let f = temp(
        dir.path(),
        "bad.json",
        r#"{"name":"bad","vertices":[{"id":"A","square":2},{"id":"B","square":2}],"edges":[{"a":"A","b":"B","mult":1}]}"#,
    );
    let (code, v) = json(&["classify", &f]);
    assert_eq!(code, EXIT_REPORTED);
    assert_eq!(v["kind"], "Invalid");
    assert!(!v["violations"].as_array().unwrap().is_empty());
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let broken = temp(dir.path(), "broken.json", "{\"name\": \"x\", \"vertices\": [");
    let out = k3lat(&["classify", &broken]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("line"), "{}", out.stderr);

    let odd = temp(dir.path(), "odd.json", r#"{"name":"x","vertices":[{"id":"C","square":-3}]}"#);
    assert_eq!(k3lat(&["classify", &odd]).code, EXIT_INPUT);
    assert_eq!(k3lat(&["classify", "/no/such/file.json"]).code, EXIT_INPUT);
    assert_eq!(k3lat(&["no-such-command"]).code, EXIT_INPUT);
    assert_eq!(k3lat(&["bound", &data("configs/example-D6tilde.json")]).code, EXIT_INPUT);
    assert_eq!(k3lat(&["catalog", "show", "nothing"]).code, EXIT_INPUT);
}

#[test]
fn help_is_not_an_error() {
    let out = k3lat(&["--help"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("exclude"));
}

#[test]
fn bound_on_degenerate_lattice_is_input_error() {
    let out = k3lat(&["bound", &data("configs/fermat-I4-cycle.json"), "--d", "1"]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("degenerate"));
}

#[test]
fn bound_methods() {
    let f = data("configs/example-D6tilde.json");
    let (_, rough) = json(&["bound", &f, "--d", "1", "--method", "rough"]);
    let (_, boxed) = json(&["bound", &f, "--d", "1", "--method", "box"]);
    let (_, auto) = json(&["bound", &f, "--d", "1"]);
    assert_eq!(rough["bound_on_2h"], "1640/21");
    assert_eq!(boxed["bound_on_2h"], "530/7");
    assert_eq!(auto, boxed);
    assert_eq!(boxed["verified"], true);
    assert!(boxed["witness"]["g0"].is_array());
}

#[test]
fn exclude_text_and_codes() {
    let f = data("configs/char3-I3star-4sections.json");
    let out = k3lat(&["exclude", &f, "--d", "1", "--h", "44"]);
    assert_eq!(out.code, EXIT_REPORTED);
    assert!(out.stdout.starts_with("HyperbolicExcluded, bound 86 < 88"), "{}", out.stdout);
    let out = k3lat(&["exclude", &f, "--d", "1", "--h", "43"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.starts_with("HyperbolicUndecided"));
    let (_, v) = json(&["exclude", &f, "--d", "1", "--h", "43"]);
    assert_eq!(v["status"], "HyperbolicUndecided");
    assert_eq!(v["two_h"], "86");
}

#[test]
fn exclude_rejects_degree_above_d() {
    let dir = tempfile::tempdir().unwrap();
    let f = temp(
        dir.path(),
        "deg2.json",
        r#"{"name":"x","vertices":[{"id":"A","square":0,"degree":2},{"id":"B","square":-2}],"edges":[{"a":"A","b":"B","mult":1}]}"#,
    );
    let out = k3lat(&["exclude", &f, "--d", "1", "--h", "200"]);
    assert_eq!(out.code, EXIT_INPUT, "{}", out.stdout);
}

#[test]
fn polarize_and_kodaira() {
    let f = data("configs/example-D6tilde.json");
    let (_, p) = json(&["polarize", &f]);
    assert_eq!(p["exists"], true);
    assert_eq!(p["square"], "530/7");
    assert_eq!(p["h_max"], "37");
    let (_, k) = json(&["kodaira", &f]);
    let types: Vec<&str> = k["divisors"].as_array().unwrap().iter().map(|d| d["type"].as_str().unwrap()).collect();
    assert!(types.contains(&"I*2"), "{types:?}");
    let (_, small) = json(&["kodaira", &f, "--max-weight", "6"]);
    assert!(small["divisors"].as_array().unwrap().iter().all(|d| d["weight"].as_u64().unwrap() <= 6));
}

#[test]
fn decompose_parabolic() {
    let (code, v) = json(&["decompose", &data("configs/fermat-I4-cycle.json")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["components"][0]["kind"], "AffineA(3)");
    assert_eq!(v["components"][0]["kernel"], serde_json::json!([1, 1, 1, 1]));
    let (code, _) = json(&["decompose", &data("configs/example-D6tilde.json")]);
    assert_eq!(code, EXIT_REPORTED);
}

#[test]
fn budget_and_enumeration() {
    let (code, v) = json(&["budget", &data("profiles/qe3-10xIV.json")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["rational_component_bound"], 30);
    let (_, v) = json(&["budget", &data("profiles/extremal-I7-I7-IIstar.json")]);
    assert_eq!(v["shioda_tate_rank"], 22);
    assert_eq!(v["extremal"][0]["name"], "extremal-I7-I7-IIstar");
    let (_, v) = json(&["enum-uniform", "--rho-max", "20"]);
    assert_eq!(v["profiles"].as_array().unwrap().len(), 3);

    let dir = tempfile::tempdir().unwrap();
    let short = temp(dir.path(), "short.json", r#"{"quasi_elliptic":false,"characteristic":0,"fibers":[{"type":"I2","count":3}]}"#);
    let (code, v) = json(&["budget", &short]);
    assert_eq!(code, EXIT_REPORTED);
    assert_eq!(v["ok"], false);
    assert_eq!(v["euler_total"], 6);
}

#[test]
fn sd_bound_regimes() {
    let (_, v) = json(&["sd-bound", "--char", "0"]);
    assert_eq!(v["bound"], 24);
    assert_eq!(v["h_threshold_over_d2"], "42");
    let (_, v) = json(&["sd-bound", "--char", "2", "--restricted"]);
    assert_eq!(v["h_threshold_over_d2"], "185/4");
    assert_eq!(v["lines_bound"], 25);
    assert_eq!(k3lat(&["sd-bound", "--char", "3", "--unirational", "--non-unirational"]).code, EXIT_INPUT);
}

#[test]
fn very_ample_models() {
    let dir = tempfile::tempdir().unwrap();
    let bad = temp(dir.path(), "m.json", r#"{"H_square":2,"H_two_divisible":false,"curves":[{"label":"E","pa":1,"H_dot":2}]}"#);
    let (code, v) = json(&["very-ample", &bad]);
    assert_eq!(code, EXIT_REPORTED);
    let failed: Vec<u64> = v["failed"].as_array().unwrap().iter().map(|f| f["condition"].as_u64().unwrap()).collect();
    assert_eq!(failed, [2, 3]);
    let good = temp(dir.path(), "g.json", r#"{"H_square":8,"H_two_divisible":false,"curves":[{"label":"E","pa":1,"H_dot":4}]}"#);
    assert_eq!(json(&["very-ample", &good]).0, EXIT_OK);
    let odd = temp(dir.path(), "o.json", r#"{"H_square":7,"H_two_divisible":false,"curves":[]}"#);
    assert_eq!(k3lat(&["very-ample", &odd]).code, EXIT_INPUT);
}

#[test]
fn catalog_commands() {
    let (_, list) = json(&["catalog", "list"]);
    assert!(list["entries"].as_array().unwrap().len() >= 12);
    let (_, show) = json(&["catalog", "show", "example-D6tilde"]);
    assert_eq!(show["config"]["vertices"].as_array().unwrap().len(), 10);
    let (code, v) = json(&["catalog", "verify"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["all_ok"], true);
}
