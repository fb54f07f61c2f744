use std::path::Path;
use std::process::{Command, Output};

use nagumo::config::{parse_config, to_text};
use nagumo::experiments::{figure1_config, Panel};
use nagumo::export::read_csv;

fn nagumo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nagumo"))
        .args(args)
        .env("NAGUMO_THREADS", "2")
        .output()
        .expect("binary runs")
}

const SMALL: &str = "\
p = 5
alpha = 0.7
gamma = 1
beta = 0.2
m = 2
pd_terms = 0.5:0.1
initial = ball:0
j_min = -6
j_max = 6
dt = 0.0005
t_end = 0.05
save_every = 10
method = euler-spectral
";

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn simulate_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.cfg", SMALL);
    let out_dir = dir.path().join("out");
    let out = nagumo(&["simulate", &cfg, "--out-dir", out_dir.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let map = read_csv(&out_dir.join("heatmap.csv")).unwrap();
    assert_eq!(map.rows(), 13);
    assert_eq!(map.cols(), 10);
    assert!(out_dir.join("heatmap.png").exists());
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["times"].as_array().unwrap().len(), 11);
    assert!(summary["G_value"].is_array());
    assert_eq!(summary["comparison_ode"].as_array().unwrap().len(), 2);
}

#[test]
fn reproduce_left_panel() {
    let dir = tempfile::tempdir().unwrap();
    let out = nagumo(&[
        "reproduce-fig1",
        "left",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let map = read_csv(&dir.path().join("heatmap.csv")).unwrap();
    assert_eq!((map.rows(), map.cols()), (41, 300));
    let img = image::open(dir.path().join("heatmap.png")).unwrap();
    assert_eq!(img.width() % 300, 0);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    assert!(summary.get("blowup").is_none());
    assert_eq!(summary["sup_norm_monotone"], serde_json::Value::Bool(true));
}

#[test]
fn bad_config_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.cfg",
        "p = 4\nalpha = 1\ngamma = 1\ninitial = ball:0\n",
    );
    let out = nagumo(&["simulate", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    let missing = nagumo(&["simulate", dir.path().join("nope.cfg").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn estimate_existence_prints_horizon() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.cfg", SMALL);
    let out = nagumo(&["estimate-existence", &cfg, "--radius", "1.5"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let t: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("T = "))
        .and_then(|v| v.parse().ok())
        .expect("T line");
    assert!(t > 0.0 && t.is_finite());
}

#[test]
fn check_invariants_passes_with_default_seed() {
    let seven = nagumo(&["check-invariants", "--seed", "7"]);
    assert_eq!(seven.status.code(), Some(0));
    let out = nagumo(&["check-invariants"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("ok")).count(), 11);
}

#[test]
fn builtin_configs_round_trip() {
    for panel in [Panel::Left, Panel::Right] {
        let cfg = figure1_config(panel);
        assert_eq!(parse_config(&to_text(&cfg)).unwrap(), cfg);
    }
}
