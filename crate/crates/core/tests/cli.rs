use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fusion-torsion")).args(args).output().expect("binary runs")
}

#[test]
fn fusion_prints_the_decomposition() {
    let out = run(&["fusion", "SUq2", "u1", "u1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "u2 + u0");
}

#[test]
fn verify_emits_versioned_json() {
    let out = run(&["--json", "verify", "Z/3", "--bound", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "verify");
    assert_eq!(v["report"]["passed"], true);
}

#[test]
fn ktheory_json_reports_groups() {
    let out = run(&["--json", "ktheory", "wreath(O+(3))", "--radii", "2,3,4"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["k1"]["rank"], 2);
    assert_eq!(v["report"]["k0"]["rank"], 1);
    assert_eq!(v["report"]["stable"], true);
}

#[test]
fn bad_input_exits_with_one() {
    let out = run(&["verify", "Q/3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position 0"));
    assert_eq!(run(&["fusion", "SUq2", "u1"]).status.code(), Some(1));
}

#[test]
fn out_flag_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("fusion-torsion-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = run(&["--json", "--out", path.to_str().unwrap(), "fusion", "Z/4", "g", "g"]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"command\": \"fusion\""), "{text}");
    std::fs::remove_dir_all(&dir).ok();
}
