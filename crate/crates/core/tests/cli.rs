use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn schema(name: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas").join(name);
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn stackyfan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stackyfan")).args(args).stdin(Stdio::null()).output().unwrap()
}

fn on_file(cmd: &str, file: &str) -> Output {
    stackyfan(&[cmd, "--in", data(file).to_str().unwrap()])
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_stackyfan"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn assert_valid(schema_name: &str, instance: &Value) {
    let s = schema(schema_name);
    let v = jsonschema::validator_for(&s).unwrap();
    let errors: Vec<String> = v.iter_errors(instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema_name}: {errors:?}\n{instance}");
}

const SAMPLES: &[(&str, &str, i32)] = &[
    ("g-beta", "p1.json", 0),
    ("stacky-validate", "p1.json", 0),
    ("fantastack", "trivial-fantastack.json", 0),
    ("fan-validate", "p2.json", 0),
    ("orbit", "p2-ray.json", 0),
    ("star", "p2-ray.json", 0),
    ("dual-cone", "cone-a2.json", 0),
    ("hilbert-basis", "cone-a2.json", 0),
    ("faces", "cone-a2.json", 0),
    ("smooth", "cone-a2.json", 0),
    ("distinguished-point", "cone-a2.json", 0),
    ("mass", "three-groups.json", 0),
    ("groupoid-cohomology", "three-groups.json", 0),
    ("decompose", "s3-on-three.json", 0),
    ("coarse-compare", "s3-on-three.json", 0),
    ("group-homology", "s3.json", 0),
    ("weight-filtration", "jordan2.json", 0),
    ("hodge-validate", "upper-half-plane.json", 0),
    ("endo-decompose", "weight3.json", 0),
    ("ipr", "weight3.json", 0),
    ("cone-validate", "jordan-pair.json", 0),
    ("orbit-check", "orbit-sl2.json", 0),
    ("orbit-check", "orbit-isotropic.json", 3),
    ("gamma-monoid", "jordan-pair.json", 0),
    ("compat-check", "compat-sl2.json", 3),
    ("centralizer", "sl2-cone.json", 0),
    ("ku-triple", "ku-rank1.json", 0),
    ("ku-triple", "ku-sl2.json", 3),
];

#[test]
fn sample_exit_codes() {
    for (cmd, file, code) in SAMPLES {
        let o = on_file(cmd, file);
        assert_eq!(o.status.code(), Some(*code), "{cmd} {file}: {}", String::from_utf8_lossy(&o.stderr));
        json_out(&o);
    }
}

#[test]
fn g_beta_of_two_rays() {
    let o = on_file("g-beta", "p1.json");
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "{\"free_rank\":1,\"torsion\":[]}\n");
}

#[test]
fn mass_of_three_groups() {
    let o = on_file("mass", "three-groups.json");
    assert_eq!(json_out(&o), serde_json::json!({ "mass": "11/6" }));
}

#[test]
fn weight_filtration_of_jordan_block() {
    let o = on_file("weight-filtration", "jordan2.json");
    let v = json_out(&o);
    assert_eq!(v["passed"], Value::Bool(true));
    let steps = v["filtration"]["steps"].as_array().unwrap();
    let w = |k: i64| steps.iter().find(|s| s["k"] == k).unwrap();
    // ker [[0,1],[0,0]] = span(e1)
    assert_eq!(w(-1)["basis"], serde_json::json!([["1", "0"]]));
    assert_eq!(w(-2)["dim"], 0);
    assert_eq!(w(1)["dim"], 2);
}

#[test]
fn standard_input() {
    let o = with_stdin(&["mass", "--in", "-"], r#"{"groups": [{"order": 2, "table": [[0, 1], [1, 0]]}]}"#);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_out(&o)["mass"], "1/2");
    let o = with_stdin(&["mass"], r#"{"groups": []}"#);
    assert_eq!(json_out(&o)["mass"], "0");
}

#[test]
fn unknown_subcommand_prints_usage() {
    let o = stackyfan(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert!(o.stdout.is_empty());
}

#[test]
fn malformed_json_has_position() {
    let o = with_stdin(&["fan-validate"], "{\"lattice_rank\": 2,\n \"maximal_cones\": [[[1, 0]],]}");
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2") && err.contains("column"), "{err}");
    assert_valid("error.schema.json", &json_out(&o));
}

#[test]
fn missing_file_is_invalid_input() {
    let o = stackyfan(&["mass", "--in", "/nonexistent/x.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn structural_error_exits_two() {
    let o = with_stdin(&["g-beta"], r#"{"lattice_rank": 2, "maximal_cones": [[[1, 0, 0]]], "beta": [[1, 1]]}"#);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn infinite_cokernel_exits_three() {
    let o = with_stdin(&["stacky-validate"], r#"{"lattice_rank": 1, "maximal_cones": [[[1]]], "beta": [[1], [0]]}"#);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json_out(&o)["valid"], false);
}

#[test]
fn help_and_version() {
    let o = stackyfan(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    for cmd in ["dual-cone", "ku-triple", "weight-filtration", "coarse-compare"] {
        assert!(text.contains(cmd), "{cmd}");
    }
    let o = stackyfan(&["--version"]);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("stackyfan "));
}

#[test]
fn pretty_summary_goes_to_stderr() {
    let plain = on_file("weight-filtration", "jordan2.json");
    let pretty = stackyfan(&["weight-filtration", "--pretty", "--in", data("jordan2.json").to_str().unwrap()]);
    assert_eq!(plain.stdout, pretty.stdout);
    let err = String::from_utf8_lossy(&pretty.stderr);
    assert!(err.contains("[ok] exhaustive"), "{err}");
}

#[test]
fn max_degree_flag() {
    let o = stackyfan(&["group-homology", "--max-degree", "1", "--in", data("s3.json").to_str().unwrap()]);
    let h = json_out(&o)["homology"].as_array().unwrap().clone();
    assert_eq!(h.len(), 2);
    assert_eq!(h[1]["torsion"], serde_json::json!([2]));
}

#[test]
fn y_samples_flag_overrides_input() {
    let path = data("orbit-sl2.json");
    let o = stackyfan(&["orbit-check", "--y-samples", "1/3,5", "--in", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let names: Vec<String> =
        json_out(&o)["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap().to_string()).collect();
    assert!(names.contains(&"y = (1/3)".to_string()) && names.contains(&"y = (5)".to_string()), "{names:?}");
    let o = stackyfan(&["orbit-check", "--y-samples", "0", "--in", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn convention_flag() {
    let path = data("upper-half-plane.json");
    let o = stackyfan(&["hodge-validate", "--convention", "conjugate-second", "--in", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn output_is_deterministic() {
    for (cmd, file, _) in SAMPLES {
        let a = on_file(cmd, file);
        let b = on_file(cmd, file);
        assert_eq!(a.stdout, b.stdout, "{cmd} {file}");
    }
}

#[test]
fn reports_match_schema() {
    for (cmd, file, _) in SAMPLES {
        let v = json_out(&on_file(cmd, file));
        if v.get("checks").is_some() {
            assert_valid("report.schema.json", &v);
        }
    }
    assert_valid("abelian-group.schema.json", &json_out(&on_file("g-beta", "p1.json")));
    let wf = json_out(&on_file("weight-filtration", "jordan2.json"));
    assert_valid("weight-filtration.schema.json", &wf["filtration"]);
}

#[test]
fn inputs_match_schema() {
    let cases = [
        ("fan.schema.json", "p2.json"),
        ("stacky-fan.schema.json", "p1.json"),
        ("stacky-fan.schema.json", "trivial-fantastack.json"),
        ("cone.schema.json", "cone-a2.json"),
        ("groupoid.schema.json", "three-groups.json"),
        ("groupoid.schema.json", "s3-on-three.json"),
        ("group.schema.json", "s3.json"),
        ("hodge.schema.json", "upper-half-plane.json"),
        ("hodge.schema.json", "weight3.json"),
        ("nilpotent-cone.schema.json", "sl2-cone.json"),
        ("nilpotent-cone.schema.json", "jordan-pair.json"),
    ];
    for (s, f) in cases {
        let v: Value = serde_json::from_str(&std::fs::read_to_string(data(f)).unwrap()).unwrap();
        assert_valid(s, &v);
    }
}

#[test]
fn emitted_fans_round_trip() {
    let star = json_out(&on_file("star", "p2-ray.json"));
    assert_valid("fan.schema.json", &star["fan"]);
    let o = with_stdin(&["fan-validate"], &star["fan"].to_string());
    assert_eq!(o.status.code(), Some(0));
    let hat = json_out(&on_file("fantastack", "trivial-fantastack.json"))["hat_fan"].clone();
    assert_eq!(hat, serde_json::json!({"lattice_rank": 3, "maximal_cones": [[[0, 0, 1], [0, 1, 0], [1, 0, 0]]]}));
}
