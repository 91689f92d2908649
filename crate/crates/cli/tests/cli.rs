use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_assocfold"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn build_a3_writes_off_with_14_vertices() {
    let dir = tempfile::tempdir().unwrap();
    let off = dir.path().join("a3.off");
    let o = run(&["build", "--type", "A3", "--c", "1", "--off", off.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&off).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("OFF"));
    assert_eq!(lines.next(), Some("14 9 0"));
    assert_eq!(stdout_json(&o)["f_vector"], serde_json::json!([14, 21, 9]));
}

#[test]
fn build_a1_is_a_segment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a1.json");
    let o = run(&["build", "--type", "A1", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let j: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(j["vertices"].as_array().unwrap().len(), 2);
    assert_eq!(j["type"], "A1");
}

#[test]
fn fold_a3_c2_verifies_to_a_hexagon() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c2.json");
    let o = run(&["fold", "--source", "A3", "--target", "C2", "--verify", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout_json(&o);
    assert_eq!(out["passed"], true);
    assert_eq!(out["summary"]["section_f_vector"], serde_json::json!([6, 6]));
    let j: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(j["section"]["vertices"].as_array().unwrap().len(), 6);
    assert_eq!(j["fan"]["rays"].as_array().unwrap().len(), 6);
}

#[test]
fn verify_type_passes() {
    let o = run(&["verify", "--type", "D4", "--samples", "200"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["passed"], true);
}

#[test]
fn knit_prints_the_six_a3_equations() {
    let o = run(&["knit", "--type", "A3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.contains("t11 + t21 = t12 + c11"));
}

#[test]
fn invalid_input_exits_2_with_json_error() {
    for args in [
        vec!["build", "--type", "Z9"],
        vec!["build", "--type", "A3", "--c", "-1"],
        vec!["build", "--type", "B3"],
        vec!["fold", "--source", "D5", "--target", "H3"],
        vec!["fold", "--target", "I2"],
        vec!["build", "--type", "E8"],
        vec!["export", "--type", "A3"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err: serde_json::Value = serde_json::from_slice(&o.stderr).expect("stderr is JSON");
        assert_eq!(err["exit_code"], 2);
    }
}

#[test]
fn failed_export_leaves_no_partial_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let o = run(&["export", "--type", "Q7", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!path.exists());
}

#[test]
fn orientation_files() {
    let dir = tempfile::tempdir().unwrap();
    let linear = dir.path().join("linear.json");
    fs::write(&linear, "[[1,2],[2,3]]").unwrap();
    let o = run(&["build", "--type", "A3", "--orientation", linear.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["f_vector"], serde_json::json!([14, 21, 9]));
    // a linear orientation is not block-compatible for A3 -> C2
    let o = run(&["fold", "--target", "C2", "--orientation", linear.to_str().unwrap(), "--allow-mutations"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["fold", "--target", "C2", "--orientation", linear.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for k in 0..2 {
        let j = dir.path().join(format!("h3-{k}.json"));
        let off = dir.path().join(format!("h3-{k}.off"));
        let o = run(&["fold", "--target", "I2(5)", "--json", j.to_str().unwrap(), "--off", off.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        texts.push((fs::read(&j).unwrap(), fs::read(&off).unwrap(), o.stdout));
    }
    assert_eq!(texts[0], texts[1]);
}

#[test]
fn list_commands() {
    let o = run(&["list-types"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8(o.stdout).unwrap().contains("E8"));
    let o = run(&["fold", "--list"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("D6") && text.contains("H3"));
}
