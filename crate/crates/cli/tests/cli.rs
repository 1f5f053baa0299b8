use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn repo() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn system_file(name: &str) -> String {
    repo().join("systems").join(format!("{name}.json")).to_string_lossy().into_owned()
}

/// Runs the binary; returns exit code, raw stdout and parsed document.
fn run(args: &[&str]) -> (i32, String, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_coxeter")).args(args).env_remove("COX_BUDGET_SCALE").output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let doc: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    assert_valid(&doc);
    (out.status.code().unwrap(), text, doc)
}

fn assert_valid(doc: &Value) {
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(repo().join("docs/report.schema.json")).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| format!("{e} at {}", e.instance_path)).collect();
    assert!(errors.is_empty(), "{errors:?}\n{doc}");
}

#[test]
fn classify_affine_triangle() {
    let (code, _, doc) = run(&["classify", "--system", &system_file("atilde2")]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["type"], "Affine(Ã₂)");
}

#[test]
fn reduce_braid() {
    let (code, _, doc) = run(&["reduce", "--system", &system_file("a2"), "--word", "t s t"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["normal_form"], "s t s");
    assert_eq!(doc["result"]["length"], 3);
}

#[test]
fn verify_product_closure_on_the_line() {
    let dinf = system_file("dinf");
    let (code, _, doc) =
        run(&["verify", "thm-product-closure", "--system", &dinf, "--g", "s t s t s t", "--h", "s t s t s t"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["verdict"]["status"], "verified");
    assert_eq!(doc["result"]["constants"][0]["name"], "K");
    // `s t s t` is not in the torsion-free subgroup.
    let (code, _, doc) = run(&["verify", "thm-product-closure", "--system", &dinf, "--g", "s t s t", "--h", "s t s t"]);
    assert_eq!(code, 3);
    assert_eq!(doc["error"]["kind"], "precondition");
}

#[test]
fn every_query_command_validates() {
    let cases: [&[&str]; 8] = [
        &["order", "--system", "atilde2", "--word", "a b c"],
        &["order", "--system", "a2", "--word", "s t"],
        &["pc", "--system", "dinf_a1", "--word", "s t"],
        &["pc", "--system", "a1x3", "--word", "s t", "--word", "t u"],
        &["essential-walls", "--system", "dinf", "--word", "s t", "--budget", "root_depth=4"],
        &["normalizer", "--system", "dinf_a1", "--j", "s,t"],
        &["shells", "--system", "dinf_a1", "--pretty"],
        &["verify", "thm-few-open-subgroups", "--system", "t334"],
    ];
    for args in cases {
        let (code, _, doc) = run(args);
        assert_eq!(code, 0, "{args:?}: {doc}");
    }
}

#[test]
fn verify_commands_on_explicit_inputs() {
    let cases: [&[&str]; 5] = [
        &["verify", "thm-two-wall-generation", "--system", "dinf", "--word", "s t"],
        &["verify", "thm-fundamental", "--system", "a1x3", "--gen", "s t", "--gen", "t u"],
        &["verify", "thm-wall-residue", "--system", "dinf_a1", "--subset", "s,t", "--depth", "6"],
        &["verify", "thm-three-parallels", "--system", "dinf", "--depth", "6"],
        &["verify", "thm-factor-essential", "--system", "dinf_dinf", "--gen", "s1 t1", "--gen", "s2 t2"],
    ];
    for args in cases {
        let (code, _, doc) = run(args);
        assert_eq!(code, 0, "{args:?}: {doc}");
        assert_eq!(doc["result"]["verdict"]["status"], "verified", "{args:?}");
    }
}

#[test]
fn usage_and_input_errors_exit_3() {
    let (code, _, doc) = run(&["verify", "thm-nonexistent", "--system", "dinf"]);
    assert_eq!(code, 3);
    assert_eq!(doc["error"]["kind"], "usage");
    let (code, _, doc) = run(&["reduce", "--system", "a2", "--word", "s x"]);
    assert_eq!(code, 3);
    assert_eq!(doc["error"]["kind"], "input");
    let (code, _, _) = run(&["classify", "--system", "/nonexistent.json"]);
    assert_eq!(code, 3);
}

const SMALL_BUDGET: &str = "samples=2,window_depth=5,root_depth=5,grid=4";

#[test]
fn zero_budget_suite_is_inconclusive() {
    let (code, _, doc) = run(&["suite", "--systems", "dinf", "--budget", "zero"]);
    assert_eq!(code, 2);
    assert_eq!(doc["result"]["worst"], "inconclusive");
}

#[test]
fn fault_injection_exits_1() {
    let (code, _, doc) = run(&["suite", "--systems", "dinf", "--budget", SMALL_BUDGET, "--fault-injection"]);
    assert_eq!(code, 1);
    assert_eq!(doc["result"]["worst"], "refuted");
}

#[test]
fn suite_output_is_byte_identical() {
    let args = ["suite", "--systems", "dinf,atilde2", "--seed", "3", "--budget", SMALL_BUDGET];
    let (code, a, doc) = run(&args);
    let (_, b, _) = run(&args);
    assert_eq!(code, 0, "{doc}");
    assert_eq!(a, b);
}

#[test]
fn out_flag_writes_the_report() {
    let path = std::env::temp_dir().join(format!("coxeter-cli-test-{}.json", std::process::id()));
    let status = Command::new(env!("CARGO_BIN_EXE_coxeter"))
        .args(["classify", "--system", "t334", "--out", path.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_valid(&doc);
    assert_eq!(doc["result"]["type"], "CompactHyperbolic");
}
