use std::fs;
use std::process::Command;

fn lipgraph(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lipgraph")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn exit_codes() {
    assert_eq!(lipgraph(&["count", "--graph", "cycle:4"]).0, 0);
    assert_eq!(lipgraph(&["--budget", "2", "count", "--graph", "complete:6"]).0, 3);
    assert_eq!(lipgraph(&["count", "--graph", "nonsense"]).0, 2);
    assert_eq!(lipgraph(&["no-such-command"]).0, 2);
    // C8 with a tiny asserted λ has no ground state for a steep function
    let f = r#"{"M":1,"values":[0,1,2,3,4,3,2,1]}"#;
    assert_eq!(lipgraph(&["flaws", "--graph", "cycle:8", "--lambda-source", "0.1", "--function", f]).0, 1);
}

#[test]
fn experiment_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"schema_version":1,"graph":{"family":"complete","n":6},"M":1,"mode":{"ground-state":{"k":0}},"t_values":[2,3]}"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let args = ["--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "experiment"];
    for kind in ["tail", "covering", "range"] {
        let mut a = args.to_vec();
        a.push(kind);
        assert_eq!(lipgraph(&a).0, 0, "{kind}");
        let csv = fs::read_to_string(out.join("results.csv")).unwrap();
        let summary: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
        assert!(csv.lines().count() >= 2);
        assert_eq!(summary["provenance"]["config_sha256"].as_str().unwrap().len(), 64);
        assert!(summary["metadata"]["written_at_unix"].is_u64());
    }
}

#[test]
fn verify_and_generation() {
    let (code, text) = lipgraph(&["verify", "--graph", "petersen"]);
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("ground-state-existence"));
    let (code, text) = lipgraph(&["gen-graph", "--graph", "hypercube:3"]);
    assert_eq!(code, 0);
    assert!(text.contains("8 12"));
    let (code, text) = lipgraph(&["enumerate", "--graph", "path:3"]);
    assert_eq!(code, 0);
    assert_eq!(text.lines().count(), 9);
}

#[test]
fn shipped_configs_parse_and_verify_default_passes() {
    let root = env!("CARGO_MANIFEST_DIR");
    for name in ["range_c4_exact", "range_rr50_glauber", "tail_k6"] {
        let text = fs::read_to_string(format!("{root}/configs/{name}.json")).unwrap();
        lipgraph::experiment::ExperimentConfig::from_json(&text).unwrap();
    }
    let (code, text) = lipgraph(&["--config", &format!("{root}/configs/verify_default.json"), "verify"]);
    assert_eq!(code, 0, "{text}");
    assert!(!text.contains("FAIL"));
}
