use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn causet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_causet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_owned()
}

fn json(path: &str) -> Value {
    serde_json::from_slice(&fs::read(path).unwrap()).unwrap()
}

fn scenario(dir: &Path, name: &str) -> String {
    let out_dir = path(dir, name);
    let out = causet(&["scenario", "--scenario", name, "--output", &out_dir]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    out_dir
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (path(dir.path(), "a.json"), path(dir.path(), "b.json"));
    for target in [&a, &b] {
        let out = causet(&[
            "gen",
            "--box",
            "0,0,12,8",
            "--density",
            "2",
            "--seed",
            "11",
            "--output",
            target,
        ]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let doc = json(&a);
    assert_eq!(
        doc["embedding"].as_array().unwrap().len(),
        doc["event_count"].as_u64().unwrap() as usize
    );
}

#[test]
fn gen_three_dimensional_box() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = path(dir.path(), "c.json");
    let out = causet(&[
        "gen",
        "--dim",
        "3",
        "--box",
        "0,0,0,4,4,4",
        "--density",
        "1",
        "--seed",
        "1",
        "--output",
        &out_file,
    ]);
    assert_eq!(code(&out), 0);
    let doc = json(&out_file);
    assert!(doc["embedding"]
        .as_array()
        .unwrap()
        .iter()
        .all(|p| p.as_array().unwrap().len() == 3));
}

#[test]
fn gen_rejects_invalid_input() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = path(dir.path(), "x.json");
    let zero = causet(&[
        "gen",
        "--box",
        "0,0,1,1",
        "--density",
        "0",
        "--seed",
        "1",
        "--output",
        &out_file,
    ]);
    assert_eq!(code(&zero), 2);
    let mismatch = causet(&[
        "gen",
        "--dim",
        "3",
        "--box",
        "0,0,1,1",
        "--density",
        "1",
        "--seed",
        "1",
        "--output",
        &out_file,
    ]);
    assert_eq!(code(&mismatch), 2);
    assert!(!Path::new(&out_file).exists());
}

#[test]
fn missing_input_is_an_io_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = causet(&[
        "quantify",
        "--input",
        &path(dir.path(), "absent.json"),
        "--chains",
        "P,Q",
        "--output",
        &path(dir.path(), "q.csv"),
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn quantify_fig3_panels() {
    let dir = tempfile::tempdir().unwrap();
    let sc = scenario(dir.path(), "fig3");
    let csv = path(dir.path(), "q.csv");
    let events = "top-left,top-right,bottom-left,bottom-center,bottom-right";
    let out = causet(&[
        "quantify",
        "--input",
        &format!("{sc}/causet.json"),
        "--frame",
        &format!("{sc}/frame_PQ.json"),
        "--origin",
        "origin",
        "--events",
        events,
        "--output",
        &csv,
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let classes: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap())
        .collect();
    assert_eq!(
        classes,
        [
            "spacelike",
            "timelike",
            "timelike",
            "lightlike",
            "spacelike"
        ]
    );
    assert_eq!(
        json(&format!("{csv}.unquantified.json")),
        serde_json::json!([])
    );
}

#[test]
fn quantify_rejects_unsynchronized_frame() {
    let dir = tempfile::tempdir().unwrap();
    let sc = scenario(dir.path(), "fig6");
    // The inner moving chain against the outer rest chain ticks at a
    // different rate, so the pair cannot form a frame.
    let out = causet(&[
        "quantify",
        "--input",
        &format!("{sc}/causet.json"),
        "--chains",
        "P0,Q1",
        "--output",
        &path(dir.path(), "q.csv"),
    ]);
    assert_eq!(code(&out), 4, "{}", String::from_utf8_lossy(&out.stderr));
}

fn relation(sc: &str, frame: &str, frame2: &str) -> Value {
    let out = causet(&[
        "frames",
        "--input",
        &format!("{sc}/causet.json"),
        "--frame",
        &format!("{sc}/frame_{frame}.json"),
        "--frame2",
        &format!("{sc}/frame_{frame2}.json"),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn frames_identical_and_moving() {
    let dir = tempfile::tempdir().unwrap();
    let sc = scenario(dir.path(), "fig6");
    let same = relation(&sc, "rest", "rest");
    assert_eq!(same["beta"].as_f64(), Some(0.0));
    let moving = relation(&sc, "rest", "moving");
    assert!(
        (moving["beta"].as_f64().unwrap() - 0.6).abs() <= 0.05,
        "{moving}"
    );
}

#[test]
fn frames_swapped_chains_negate_beta() {
    let dir = tempfile::tempdir().unwrap();
    let sc = scenario(dir.path(), "fig6");
    let names: Vec<String> = {
        let doc = json(&format!("{sc}/causet.json"));
        doc["chains"].as_object().unwrap().keys().cloned().collect()
    };
    assert!(
        names.iter().any(|n| n == "P0") && names.iter().any(|n| n == "P1"),
        "{names:?}"
    );
    let measure = |chains: &str| -> f64 {
        let out = causet(&[
            "frames",
            "--input",
            &format!("{sc}/causet.json"),
            "--chains",
            chains,
            "--chains2",
            "P1,Q1",
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        v["beta"].as_f64().unwrap()
    };
    let forward = measure("P0,Q0");
    let swapped = measure("Q0,P0");
    assert!((forward + swapped).abs() < 1e-12, "{forward} {swapped}");
}

#[test]
fn transform_pair_and_table() {
    let out = causet(&["transform", "--pair", "4,4", "--beta", "0.6"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!((v["p"].as_f64(), v["q"].as_f64()), (Some(2.0), Some(8.0)));
    assert_eq!(v["scalar"].as_f64(), Some(16.0));

    let dir = tempfile::tempdir().unwrap();
    let sc = scenario(dir.path(), "fig3");
    let csv = path(dir.path(), "q.csv");
    let moved = path(dir.path(), "moved.csv");
    let q = causet(&[
        "quantify",
        "--input",
        &format!("{sc}/causet.json"),
        "--chains",
        "P,Q",
        "--origin",
        "origin",
        "--output",
        &csv,
    ]);
    assert_eq!(code(&q), 0);
    let t = causet(&[
        "transform",
        "--input",
        &csv,
        "--rho",
        "2",
        "--output",
        &moved,
    ]);
    assert_eq!(code(&t), 0, "{}", String::from_utf8_lossy(&t.stderr));
    let scalars = |file: &str| -> Vec<String> {
        let text = fs::read_to_string(file).unwrap();
        text.lines()
            .skip(1)
            .map(|l| l.split(',').nth(5).unwrap().to_owned())
            .collect()
    };
    assert_eq!(scalars(&csv), scalars(&moved));
}

#[test]
fn transform_needs_a_change_of_frame() {
    assert_eq!(code(&causet(&["transform", "--pair", "1,2"])), 2);
    assert_eq!(
        code(&causet(&["transform", "--pair", "1,2", "--beta", "1.5"])),
        2
    );
}

#[test]
fn pythagoras_fig7() {
    let dir = tempfile::tempdir().unwrap();
    let sc = scenario(dir.path(), "fig7");
    let config = path(dir.path(), "config.json");
    fs::write(
        &config,
        r#"{"d_frame":["D1","D2"],"x_frame":["X1","X2"],"y_frame":["Y1","Y2"],"events":[18,19,20]}"#,
    )
    .unwrap();
    let input = format!("{sc}/causet.json");
    let out = causet(&["pythagoras", "--input", &input, "--config", &config]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ok"], Value::Bool(true));

    // Event 0 lies at an earlier time, so the X leg is not at equal time.
    fs::write(
        &config,
        r#"{"d_frame":["D1","D2"],"x_frame":["X1","X2"],"y_frame":["Y1","Y2"],"events":[0,19,20]}"#,
    )
    .unwrap();
    let out = causet(&["pythagoras", "--input", &input, "--config", &config]);
    assert_eq!(code(&out), 6);
}

#[test]
fn validate_selected_suite() {
    let dir = tempfile::tempdir().unwrap();
    let report = path(dir.path(), "report.json");
    let out = causet(&["validate", "--only", "pythagoras", "--output", &report]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&report);
    assert_eq!(v["passed"], Value::Bool(true));
    let suites: Vec<&str> = v["suites"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["name"].as_str().unwrap())
        .collect();
    assert_eq!(suites, ["pythagoras"]);
    assert_eq!(code(&causet(&["validate", "--only", "nonsense"])), 2);
}

#[test]
fn unknown_scenario_is_invalid() {
    let dir = tempfile::tempdir().unwrap();
    let out = causet(&[
        "scenario",
        "--scenario",
        "fig99",
        "--output",
        &path(dir.path(), "s"),
    ]);
    assert_eq!(code(&out), 2);
}
