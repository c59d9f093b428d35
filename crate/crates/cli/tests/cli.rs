use std::fs;
use std::process::Command;

use serde_json::Value;

fn w2p(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_w2p"))
        .args(args)
        .env_remove("W2P_CACHE_DIR")
        .env_remove("SOURCE_DATE_EPOCH")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn schema() -> Value {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/schema/report.schema.json");
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn report_p2_json() {
    let (code, out, _) = w2p(&["report", "--p", "2", "--format", "json"]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["central_charge"], "-2");
    assert_eq!(doc["C_p"], "128/9");
    assert_eq!(doc["g"], serde_json::json!(["0", "0", "16/9", "128/9"]));
    assert_eq!(doc["metadata"]["timestamp"], Value::Null);
    let order = ["p", "central_charge", "C_p", "P", "u", "v", "g", "parameterization", "samples", "metadata"];
    let offsets: Vec<usize> = order
        .iter()
        .map(|k| out.find(&format!("\n  \"{k}\":")).expect("top-level key"))
        .collect();
    assert!(offsets.windows(2).all(|w| w[0] < w[1]), "{offsets:?}");
    assert_eq!(doc.as_object().unwrap().len(), order.len());
}

#[test]
fn reports_validate_against_schema() {
    let validator = jsonschema::validator_for(&schema()).unwrap();
    for p in ["2", "3", "4"] {
        let (code, out, _) = w2p(&["report", "--p", p]);
        assert_eq!(code, 0);
        let doc: Value = serde_json::from_str(&out).unwrap();
        let errors: Vec<String> = validator.iter_errors(&doc).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "p={p}: {errors:?}");
    }
    let bad = serde_json::json!({"p": "2"});
    assert!(!validator.is_valid(&bad));
}

#[test]
fn report_p3_and_text_format() {
    let (code, out, _) = w2p(&["report", "--p", "3"]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["C_p"], "432/25");
    let (code, text, _) = w2p(&["report", "--p", "2", "--format", "text"]);
    assert_eq!(code, 0);
    assert!(text.contains("central_charge: -2\n"));
    assert!(text.contains("sample: t=3 u=3/8 v=1\n"));
}

#[test]
fn report_writes_file_and_honors_source_date_epoch() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = Command::new(env!("CARGO_BIN_EXE_w2p"))
        .args(["report", "--p", "2", "--out", path.to_str().unwrap()])
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["metadata"]["timestamp"], "1700000000");
}

#[test]
fn exit_codes() {
    let (code, _, err) = w2p(&["report", "--p", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("at least 2"));
    assert_eq!(w2p(&["verify", "--p", "0"]).0, 2);
    assert_eq!(w2p(&["verify", "--p", "2", "--suite", "nosuch"]).0, 2);
    assert_eq!(w2p(&["verify", "--p", "2", "--max-level", "-1"]).0, 2);
    assert_eq!(w2p(&["report"]).0, 2);
    assert_eq!(w2p(&["report", "--p", "2", "--format", "yaml"]).0, 2);
    assert_eq!(w2p(&["report", "--p", "2", "--jobs", "0"]).0, 2);
    let (code, _, err) = w2p(&["report", "--p", "2", "--out", "/nonexistent-dir/r.json"]);
    assert_eq!(code, 3);
    assert!(err.contains("cannot write report"));
    assert_eq!(w2p(&["--help"]).0, 0);
}

#[test]
fn verify_single_suites() {
    let (code, out, _) = w2p(&["verify", "--p", "2", "--max-level", "8", "--suite", "pomoc1"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("PASS pomoc1.q_cubed_f"));
    assert!(out.ends_with("total: 7 passed, 0 failed\n"));
    let (_, out, _) = w2p(&["verify", "--p", "2", "--suite", "zhu"]);
    assert!(out.contains("zhu.hminus1_h_relation"));
    let (code, out, _) = w2p(&["verify", "--p", "3", "--suite", "curve", "--suite", "heisenberg"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("verify p=3 max_level=12 suites=heisenberg,curve\n"));
}

#[test]
fn verify_uses_cache_dir() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let args = ["verify", "--p", "2", "--max-level", "6", "--suite", "kernels", "--cache-dir", cache.to_str().unwrap()];
    let (code, first, err) = w2p(&args);
    assert_eq!(code, 0);
    assert!(err.is_empty());
    let file = cache.join("kernel-p2-Qtilde-6.txt");
    let text = fs::read_to_string(&file).unwrap();
    assert!(text.starts_with("format: w2p-kernel/1\np: 2\noperator: Qtilde\nlevel: 6\n"));

    let (code, second, _) = w2p(&args);
    assert_eq!((code, &second), (0, &first));

    fs::write(&file, &text[..text.len() / 2]).unwrap();
    let (code, third, err) = w2p(&args);
    assert_eq!((code, &third), (0, &first));
    assert!(err.contains("warning: ignoring corrupt cache file"));
    assert_eq!(fs::read_to_string(&file).unwrap(), text);

    let out = Command::new(env!("CARGO_BIN_EXE_w2p"))
        .args(&args[..args.len() - 2])
        .env("W2P_CACHE_DIR", dir.path().join("env"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("env/kernel-p2-Q-6.txt").exists());
}
