use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_halfpipe"))
}

fn config_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("config.json");
    fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str], config: &Path, out: &Path) -> Output {
    bin()
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

const SMALL: &str = r#"{
  "traces": [3.0, 3.0, 3.0],
  "multicurves": {"lambda": [{"word": "A", "weight": 1.0}]},
  "words": ["B"],
  "samples": 9
}"#;

#[test]
fn empty_word_list_gives_an_empty_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &SMALL
            .replace("[\"B\"]", "[]")
            .replace(",\n  \"samples\": 9", ""),
    );
    let out = dir.path().join("out");
    let o = run(&["transition"], &cfg, &out);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("transition_summary.json")).unwrap())
            .unwrap();
    assert_eq!(v["reports"].as_array().unwrap().len(), 0);
    assert_eq!(v["passed"], true);
}

#[test]
fn malformed_traces_exit_with_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &SMALL.replace("[3.0, 3.0, 3.0]", "[3.0, 3.0, 2.5]"),
    );
    let o = run(&["transition"], &cfg, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("trace"));
}

#[test]
fn syntax_errors_report_their_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "{\n  \"traces\": [3.0, 3.0, 3.0],\n  \"multicurves\": \n}",
    );
    let o = run(&["double"], &cfg, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(2));
    assert!(
        String::from_utf8_lossy(&o.stderr).contains("line 4"),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn kerckhoff_requires_the_second_multicurve() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let o = run(&["kerckhoff"], &cfg, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missed_threshold_exits_with_code_four() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &SMALL.replace("[\"B\"]", "[\"ABab\"]"));
    let o = run(
        &["transition", "--tol", "1e-12"],
        &cfg,
        &dir.path().join("out"),
    );
    assert_eq!(
        o.status.code(),
        Some(4),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn cone_angle_table_contains_the_closed_form_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config_dir().join("punctured_torus.json");
    let out = dir.path().join("out");
    let o = run(&["double", "--grid=0.1,-0.1"], &cfg, &out);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let mut r = csv::Reader::from_path(out.join("cone_angles.csv")).unwrap();
    let rows: Vec<csv::StringRecord> = r.records().map(|r| r.unwrap()).collect();
    let hyp = rows
        .iter()
        .find(|r| &r[0] == "hyp" && &r[4] == "0.1")
        .unwrap();
    let angle: f64 = hyp[5].parse().unwrap();
    assert!((angle - 6.083185307179586).abs() < 1e-9);
    assert_eq!(rows.len(), 3);
}

#[test]
fn runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    for cmd in ["transition", "export-surface"] {
        let (a, b) = (
            dir.path().join(format!("{cmd}-a")),
            dir.path().join(format!("{cmd}-b")),
        );
        for out in [&a, &b] {
            let o = run(
                &[
                    cmd,
                    "--seed",
                    "11",
                    "--grid=0.1,0.01,0.001,-0.1,-0.01,-0.001",
                ],
                &cfg,
                out,
            );
            assert_eq!(
                o.status.code(),
                Some(0),
                "{}",
                String::from_utf8_lossy(&o.stderr)
            );
        }
        let mut names: Vec<_> = fs::read_dir(&a)
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        names.sort();
        assert!(!names.is_empty());
        for n in names {
            assert_eq!(
                fs::read(a.join(&n)).unwrap(),
                fs::read(b.join(&n)).unwrap(),
                "{cmd} {n:?}"
            );
        }
    }
}

#[test]
fn half_pipe_export_is_flat_on_the_base_face() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("out");
    let o = run(
        &["export-surface", "--grid=0.1,0.01,0.001,-0.1,-0.01,-0.001"],
        &cfg,
        &out,
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("surface_006.json")).unwrap()).unwrap();
    assert_eq!(v["metadata"]["geometry"], "hp");
    let heights: Vec<f64> = v["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p[2].as_f64().unwrap())
        .collect();
    assert!(heights.iter().any(|h| *h == 0.0));
    assert!(
        heights.iter().all(|h| *h <= 1e-12),
        "the half-pipe surface is the graph of a nonpositive function"
    );
}
