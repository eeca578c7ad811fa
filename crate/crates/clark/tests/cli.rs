use std::path::{Path, PathBuf};

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = clark::cli::main_with(std::iter::once("clark").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, json: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, json).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const EXAMPLE36: &str = r#"{"p1": [[4, 0], [-3, 0], [1, 0]], "p2": [[-1, 0], [-1, 0]], "n": 2}"#;
const EXP: &str = r#"{"singular_atoms": [{"angle": 0, "mass": 1}]}"#;

#[test]
fn measure1d_monomial() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "monomial1.json", r#"{"monomial": 1}"#);
    let (code, out, _) = run(&["measure1d", "--input", s(&f), "--alpha", "0"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["atoms"].as_array().unwrap().len(), 1);
    assert_eq!(v["atoms"][0]["angle"], 0.0);
    assert!((v["atoms"][0]["weight"].as_f64().unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn eval_rif_at_origin() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "example36.json", EXAMPLE36);
    let (code, out, _) = run(&["eval", "--rif", s(&f), "--z", "0,0", "--z", "0,0"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["value"][0], 0.0);
}

#[test]
fn plot_rif_alpha_list() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "example36.json", EXAMPLE36);
    let prefix = dir.path().join("fig");
    let (code, _, err) = run(&[
        "plot",
        "--rif",
        s(&f),
        "--alpha-list",
        "0,0.785398,1.570796,3.141593",
        "--output",
        s(&prefix),
    ]);
    assert_eq!(code, 0, "{err}");
    let csv = std::fs::read_to_string(prefix.with_extension("csv")).unwrap();
    assert!(csv.starts_with("component_id,theta1,theta2,weight\n"));
    let families: std::collections::BTreeSet<&str> =
        csv.lines().skip(1).map(|l| l.split(':').next().unwrap()).collect();
    assert_eq!(families.len(), 4);
    assert!(csv.lines().any(|l| l.starts_with("3:line0,0.0000000000000000e0,")));
    let svg = std::fs::read_to_string(prefix.with_extension("svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn csv_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for i in 0..2 {
        let prefix = dir.path().join(format!("run{i}"));
        assert_eq!(run(&["plot", "--figure", "4", "--output", s(&prefix)]).0, 0);
        outputs.push(std::fs::read(prefix.with_extension("csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn verify_exp_embedding() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "exp.json", EXP);
    let (code, out, err) = run(&["verify", "--embed", s(&f), "--alpha", "0", "--N", "4096", "--K", "10000"]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["seed"], 20240601);
}

#[test]
fn verify_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "example36.json", EXAMPLE36);
    let (code, _, err) = run(&["verify", "--rif", s(&f), "--alpha", "1", "--points", "5", "--tolerance", "1e-300"]);
    assert_eq!(code, 3);
    let v: Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(v["exit_code"], 3);
}

#[test]
fn schema_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.json", r#"{"monomial": 1, "colour": "red"}"#);
    let (code, _, err) = run(&["measure1d", "--input", s(&f)]);
    assert_eq!(code, 1);
    assert!(err.contains("\"exit_code\":1"));
    let g = write(dir.path(), "m.json", r#"{"monomial": 1}"#);
    assert_eq!(run(&["measure1d", "--input", s(&g), "--N", "1000"]).0, 1);
    assert_eq!(run(&["measure1d", "--input", s(&g), "--K", "0"]).0, 1);
    assert_eq!(run(&["measure1d", "--input", "/nonexistent/x.json"]).0, 1);
}

#[test]
fn unsupported_function_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "two.json",
        r#"{"singular_atoms": [{"angle": 0, "mass": 1}, {"angle": 1, "mass": 1}]}"#,
    );
    let (code, _, err) = run(&["measure1d", "--input", s(&f)]);
    assert_eq!(code, 2, "{err}");
}
