use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_polyreduct"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"))
}

/// Compares stdout with the stored file; `UPDATE_GOLDEN=1` rewrites it.
fn check_golden(name: &str, out: &Output) {
    assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    let got = String::from_utf8(out.stdout.clone()).unwrap();
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &got).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert_eq!(got, want, "{name} differs from golden output");
}

fn file_with(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn golden_reports() {
    let dir = tempfile::tempdir().unwrap();
    let showcase = file_with(&dir, "a", "x^17 + x^6*y^8 - y^3\n");
    check_golden("classify_showcase", &run(&["classify", &showcase]));
    let two = file_with(&dir, "b", "x*y\n(x-1)*(y-1)+1\n");
    check_golden("classify_two_centers", &run(&["classify", &two]));
    check_golden("decompose_sum_of_squares", &run(&["decompose", "x^2+y^2"]));
    check_golden("decompose_product", &run(&["decompose", "x*y"]));
    let sq = file_with(&dir, "c", "x^2\n");
    let neg = file_with(&dir, "d", "-1*x^2\n");
    check_golden("interdef_reflection", &run(&["interdef", &sq, &neg]));
    check_golden("unary_quadratic", &run(&["unary", "x^2+1", "--bound", "5"]));
    check_golden("expansion_ap", &run(&["expansion", "x+y", "--family", "ap", "--sizes", "16,64,256"]));
}

#[test]
fn payloads_carry_expected_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let sum = file_with(&dir, "a", "x+y\n");
    let out = json(&run(&["classify", &sum]));
    assert_eq!(out["result"]["case"], "II_vector_space");
    assert_eq!(out["result"]["witnesses"]["generators"], serde_json::json!(["1", "1"]));
    let prod = file_with(&dir, "b", "x*y\n");
    assert_eq!(json(&run(&["interdef", &sum, &prod]))["result"]["verdict"], "no");
    let lin = file_with(&dir, "c", "2*x+1\n");
    let inv = file_with(&dir, "d", "1/2*x - 1/2\n");
    let out = json(&run(&["interdef", &lin, &inv]));
    assert_eq!(out["result"]["verdict"], "yes");
    assert_eq!(out["diagnostics"], serde_json::json!([]));
    assert_eq!(json(&run(&["decompose", "x^17 + x^6*y^8 - y^3"]))["result"]["tag"], "neither");
    let out = json(&run(&["unary", "x^3", "--bound", "9"]));
    assert_eq!(out["result"]["members"], serde_json::json!(["x", "x^3", "x^9"]));
    let gp = json(&run(&["expansion", "x*y", "--family", "gp", "--sizes", "16,64,256"]));
    let ap = json(&run(&["expansion", "x+y", "--family", "ap", "--sizes", "16,64,256"]));
    assert_eq!(gp["result"]["rows"], ap["result"]["rows"]);
}

#[test]
fn expansion_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rows.csv");
    let out = run(&["expansion", "x^2+y^3", "--sizes", "64,256,512", "--csv", csv.to_str().unwrap()]);
    let summary = json(&out);
    let exponent: f64 = summary["result"]["final_exponent"].as_str().unwrap().parse().unwrap();
    assert!(exponent >= 1.25);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("N,image_size,exponent"));
    assert_eq!(text.lines().last(), Some("512,258775,1.998"));
}

#[test]
fn output_is_deterministic() {
    let a = run(&["decompose", "((x+1)^2+2*(y+1)^2+3)^2"]);
    let b = run(&["decompose", "((x+1)^2+2*(y+1)^2+3)^2"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = file_with(&dir, "bad", "x + y\nx^^2\n");
    let out = run(&["classify", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(run(&["decompose", "x*"]).status.code(), Some(2));
    let empty = file_with(&dir, "empty", "# nothing\n\n");
    assert_eq!(run(&["classify", &empty]).status.code(), Some(3));
    assert_eq!(run(&["decompose", "x^2 + z"]).status.code(), Some(0));
    assert_eq!(run(&["decompose", "x^2 + 1"]).status.code(), Some(4));
    assert_eq!(run(&["decompose", "x + y + z"]).status.code(), Some(4));
    assert_eq!(run(&["unary", "x+y"]).status.code(), Some(4));
    assert_eq!(run(&["expansion", "x+y", "--sizes", "20000"]).status.code(), Some(5));
    assert_eq!(run(&["expansion", "x+y", "--sizes", "64,16"]).status.code(), Some(6));
    let missing = dir.path().join("missing.txt");
    assert_eq!(run(&["classify", missing.to_str().unwrap()]).status.code(), Some(1));
}
