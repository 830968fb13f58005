use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectral-groups"))
        .args(args)
        .output()
        .unwrap()
}

fn json_stdout(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn ball_examples() {
    let z2 = json_stdout(&["ball", "--group", "Z2", "--radius", "3"]);
    assert_eq!(z2["sphere_sizes"], serde_json::json!([1, 4, 8, 12]));
    let free = json_stdout(&["ball", "--group", "<a,b | >", "--radius", "2"]);
    assert_eq!(free["elements"].as_array().unwrap().len(), 17);
    let e = json_stdout(&["ball", "--group", "F2", "--radius", "0"]);
    assert_eq!(e["elements"].as_array().unwrap().len(), 1);
    assert_eq!(e["elements"][0]["p"], "1");
}

#[test]
fn triple_passes_on_z2_and_f2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "triple",
        "--group",
        "Z2",
        "--radius",
        "4",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let diag = read_json(&dir.path().join("diagnostics.json"));
    assert_eq!(diag["N"], 4);
    let checks = diag["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["status"] == "pass"));
    let index = checks.iter().find(|c| c["name"] == "index_zero").unwrap();
    assert_eq!(index["detail"], "ker+ 8 ker- 8 index 0");
    let phase = checks.iter().find(|c| c["name"] == "phase").unwrap();
    assert_eq!(phase["detail"], "nontrivial");
    let csv = std::fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    assert!(csv.starts_with("g_index,length,r_squared_num,r_squared_den,eigenvalue,multiplicity\n"));

    assert_eq!(
        run(&["triple", "--group", "F2", "--radius", "3"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["triple", "--group", "Z2", "--t", "-1"]).status.code(),
        Some(64)
    );
    assert_eq!(run(&["triple"]).status.code(), Some(64));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(
        run(&["homogenize", "--group", "C6", "--f", "zero"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(run(&["classify", "--group", "C6"]).status.code(), Some(3));
    assert_eq!(
        run(&[
            "ball",
            "--group",
            "F2",
            "--radius",
            "8",
            "--budget-elements",
            "1000"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&["homogenize", "--group", "Z2", "--f", "cubic"])
            .status
            .code(),
        Some(64)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn classc_reports() {
    let z2 = json_stdout(&["classc", "--group", "Z2", "--radius", "6"]);
    for sample in z2["samples"].as_array().unwrap() {
        assert_eq!(sample["verdict"]["kind"], "BoundedEvidence");
    }
    let bs = json_stdout(&["classc", "--group", "B(2,1)", "--radius", "9", "--g", "a"]);
    assert_eq!(bs["samples"][0]["verdict"]["kind"], "GrowthEvidence");
    let rows = bs["witness"]["rows"].as_array().unwrap();
    let n4 = rows.iter().find(|r| r["n"] == 4).unwrap();
    assert_eq!(n4["length_h"], 8);
    assert_eq!(n4["scaled_delta"], "4/1");
    let e = json_stdout(&["classc", "--group", "Z2", "--radius", "4", "--g", "e"]);
    assert!(e["samples"][0]["M"]
        .as_array()
        .unwrap()
        .iter()
        .all(|m| m == "0/1"));
}

#[test]
fn homogenize_reports() {
    let zero = json_stdout(&[
        "homogenize",
        "--group",
        "Z2",
        "--f",
        "zero",
        "--radius",
        "3",
    ]);
    let checks = zero["checks"].as_array().unwrap();
    let plain = checks.iter().find(|c| c["name"] == "equals_plain").unwrap();
    assert_eq!(plain["status"], "pass");
    assert_eq!(plain["detail"], "D~ = D bit-exact");
    let default = json_stdout(&[
        "homogenize",
        "--group",
        "Z2",
        "--f",
        "default",
        "--radius",
        "3",
    ]);
    assert_eq!(default["ball_radius"], 8);
    assert!(default["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["status"] == "pass"));
}

#[test]
fn classify_labels_z2() {
    let report = json_stdout(&[
        "classify", "--group", "Z2", "--radius", "4", "--f", "zero", "--f", "default",
    ]);
    assert_eq!(report["estimate"], "A0 evidence");
    assert_eq!(report["candidates"][0]["f_name"], "zero");
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.conf");
    std::fs::write(&config, "# ball run\ngroup = F2\nradius = 1\n").unwrap();
    let from_file = json_stdout(&["ball", "--config", config.to_str().unwrap()]);
    assert_eq!(from_file["sphere_sizes"], serde_json::json!([1, 4]));
    let overridden = json_stdout(&[
        "ball",
        "--config",
        config.to_str().unwrap(),
        "--radius",
        "2",
    ]);
    assert_eq!(overridden["sphere_sizes"], serde_json::json!([1, 4, 12]));
    std::fs::write(&config, "colour = blue\n").unwrap();
    assert_eq!(
        run(&["ball", "--config", config.to_str().unwrap()])
            .status
            .code(),
        Some(64)
    );
}
