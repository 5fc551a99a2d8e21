use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hnmod"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// Runs the tool with `--no-timing`, returning the exit code and the parsed report.
fn run(dir: &Path, args: &[&str]) -> (i32, Value) {
    let out = bin().current_dir(dir).args(args).arg("--no-timing").output().unwrap();
    let code = out.status.code().unwrap();
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, report)
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    std::fs::write(dir.join(name), text).unwrap();
    name.to_string()
}

/// The window module of `O(1) ⊕ O(−1)` on `[p, q]`, filtered by `O(1)`.
fn split_module(dir: &Path, p: i64, q: i64) -> String {
    write(dir, "split.json", r#"{"schema_version": 1, "blocks": [[1, 1], [-1, 1]]}"#);
    let name = format!("m{p}{q}.json");
    let (code, _) = run(dir, &["gamma", "split.json", "--window", &format!("{p},{q}"), "--emit", &name]);
    assert_eq!(code, 0);
    name
}

#[test]
fn report_envelope() {
    let dir = scratch("envelope");
    let m = split_module(&dir, 0, 2);
    let (code, r) = run(&dir, &["hn", &m]);
    assert_eq!(code, 0);
    assert_eq!(r["tool"], "hnmod");
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["command"]["name"], "hn");
    assert_eq!(r["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert!(r.get("timing").is_none());
    let out = bin().current_dir(&dir).args(["hn", &m]).output().unwrap();
    let timed: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(timed["timing"]["elapsed_ms"].is_number());
}

#[test]
fn golden_hn_and_ext() {
    let dir = scratch("golden");
    let m = split_module(&dir, 0, 2);
    let (_, r) = run(&dir, &["hn", &m]);
    let res = &r["results"][0];
    assert_eq!(res["slopes"], serde_json::json!(["2/3", "-2"]));
    assert_eq!(res["hn_type"], serde_json::json!([[2, 3, 4], [0, 1, 2]]));
    let (code, r) = run(&dir, &["ext", &m]);
    assert_eq!(code, 0);
    assert_eq!(r["results"][0]["ext"]["dims"], serde_json::json!([5, 0, 0]));
    let (_, r) = run(&dir, &["tangent", &m]);
    assert_eq!(r["results"][0]["h0"], 5);
    assert_eq!(r["results"][0]["tangent_h1"], 0);
}

#[test]
fn window_predicates() {
    let dir = scratch("predicates");
    let m = split_module(&dir, 1, 4);
    assert_eq!(run(&dir, &["hn-member", &m, "--pprime", "2"]).0, 0);
    assert_eq!(run(&dir, &["roundtrip", &m, "--pprime", "2"]).0, 0);
    // Below the regularity bound O(−1) is not generated in the bottom degree.
    let low = split_module(&dir, 0, 2);
    let (code, r) = run(&dir, &["roundtrip", &low, "--pprime", "1"]);
    assert_eq!(code, 1);
    assert_eq!(r["results"][0]["roundtrip"], false);
}

#[test]
fn exit_codes() {
    let dir = scratch("exit");
    let m = split_module(&dir, 0, 2);
    assert_eq!(run(&dir, &["hn", "missing.json"]).0, 2);
    write(&dir, "bad.json", "{ not json");
    assert_eq!(run(&dir, &["hn", "bad.json"]).0, 2);
    write(&dir, "v2.json", r#"{"schema_version": 2, "blocks": [[0, 1]]}"#);
    assert_eq!(run(&dir, &["gamma", "v2.json", "--window", "0,2"]).0, 2);
    assert_eq!(run(&dir, &["hn", &m, "--mode", "exhaustive"]).0, 3);
    assert_eq!(run(&dir, &["ce-verify", &m, "--max-dim", "1"]).0, 3);
    assert_eq!(run(&dir, &["semistable", &m]).0, 1);
    // The worst status wins across inputs.
    let (code, r) = run(&dir, &["hn", &m, "missing.json"]);
    assert_eq!(code, 2);
    assert_eq!(r["status"], "schema_error");
    assert_eq!(r["results"][0]["status"], "ok");
}

#[test]
fn exhaustive_over_finite_field() {
    let dir = scratch("exhaustive");
    let m = split_module(&dir, 0, 2);
    let (code, r) = run(&dir, &["hn", &m, "--field", "Fp:2", "--mode", "exhaustive"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"][0]["slopes"], serde_json::json!(["2/3", "-2"]));
}

#[test]
fn mc_check_on_generated_corpora() {
    let dir = scratch("mc");
    for (kind, want) in [("genuine-module", 0), ("perturbed-module", 1)] {
        let out = dir.join(kind);
        let (code, _) = run(&dir, &["corpus-gen", "--kind", kind, "--count", "4", "--out", out.to_str().unwrap()]);
        assert_eq!(code, 0);
        let mut files: Vec<String> =
            std::fs::read_dir(&out).unwrap().map(|e| e.unwrap().path().to_string_lossy().into_owned()).collect();
        files.sort();
        for f in &files {
            let (code, r) = run(&dir, &["mc-check", f]);
            assert_eq!(code, want, "{f}");
            assert_eq!(r["results"][0]["residual_zero"], want == 0);
        }
    }
}

#[test]
fn ce_verify_on_abelian_dgla() {
    let dir = scratch("ce");
    let l = write(&dir, "abelian.json", r#"{"schema_version": 1, "field": "Q", "degrees": [1, 1, 2]}"#);
    let (code, r) = run(&dir, &["ce-verify", &l]);
    assert_eq!(code, 0);
    assert_eq!(r["results"][0]["q_squared_zero"], true);
}

#[test]
fn split_bundle_corpus_is_seeded() {
    let dir = scratch("corpus");
    let (code, r) = run(&dir, &["corpus-gen", "--kind", "split-bundle", "--seed", "0", "--out", "out"]);
    assert_eq!(code, 0);
    let files = r["results"][0]["files"].as_array().unwrap();
    let blocks: Vec<Value> = files.iter().map(|f| f["meta"]["blocks"].clone()).collect();
    let expect = serde_json::json!([
        [[0, 2], [-1, 1], [-3, 2]],
        [[2, 2], [-3, 1]],
        [[3, 2], [0, 2]],
        [[1, 1], [0, 1], [-1, 2]],
        [[2, 2], [0, 2], [-1, 1]],
        [[-3, 2]],
        [[3, 2], [2, 1], [-1, 2]],
        [[1, 1], [-2, 1], [-3, 2]],
        [[1, 2], [-1, 2], [-2, 1]],
        [[2, 1], [1, 2]]
    ]);
    assert_eq!(Value::Array(blocks), expect);
    for f in files {
        let text = std::fs::read(dir.join("out").join(f["file"].as_str().unwrap())).unwrap();
        let on_disk: Value = serde_json::from_slice(&text).unwrap();
        assert_eq!(on_disk["blocks"], f["meta"]["blocks"]);
    }
}

#[test]
fn reports_are_deterministic() {
    let dir = scratch("determinism");
    let m = split_module(&dir, 0, 2);
    let args = ["ss-pages", m.as_str(), "--no-timing"];
    let a = bin().current_dir(&dir).args(args).output().unwrap().stdout;
    let b = bin().current_dir(&dir).args(args).output().unwrap().stdout;
    assert_eq!(a, b);

    let gen = |jobs: &str, out: &str| {
        bin().current_dir(&dir)
            .args(["corpus-gen", "--kind", "genuine-module", "--count", "3", "--seed", "5", "--out", out, "--no-timing"])
            .output()
            .unwrap();
        let files = ["module-000.json", "module-001.json", "module-002.json"].map(|f| format!("{out}/{f}"));
        let mut args = vec!["hn".to_string(), "--jobs".into(), jobs.into(), "--no-timing".into()];
        args.extend(files);
        bin().current_dir(&dir).args(&args).output().unwrap().stdout
    };
    let serial = gen("1", "c1");
    let parallel = gen("4", "c1");
    assert_eq!(serial, parallel);
    assert_eq!(gen("1", "c2").len(), serial.len());

    let (code, _) = run(&dir, &["hn", &m, "--out", "report.json"]);
    assert_eq!(code, 0);
    let direct = bin().current_dir(&dir).args(["hn", &m, "--no-timing"]).output().unwrap().stdout;
    assert_eq!(std::fs::read(dir.join("report.json")).unwrap(), direct);
}

#[test]
fn sheaf_commands() {
    let dir = scratch("sheaf");
    let m = split_module(&dir, 1, 4);
    let (code, _) = run(&dir, &["sheafify", &m, "--emit", "pres.json"]);
    assert_eq!(code, 0);
    let (code, r) = run(&dir, &["hilbert", "pres.json", "--window", "1,8"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"][0]["hilbert_polynomial"], "2*t + 2");
    write(&dir, "o1.json", r#"{"schema_version": 1, "blocks": [[1, 1]]}"#);
    write(&dir, "om1.json", r#"{"schema_version": 1, "blocks": [[-1, 1]]}"#);
    let (code, r) = run(&dir, &["step2-check", "o1.json", "om1.json", "--window", "1,3"]);
    assert_eq!(code, 0, "{r}");
}
