//! End-to-end tests of the `pqfront` binary: exit codes, output formats,
//! configuration handling and reproducibility.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pqfront"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

#[test]
fn bounds_outputs_are_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "bounds", "--p", "4", "--q", "3", "--l0", "6", "--lplus", "6", "--out", "a",
    ];
    let out1 = run(&args, dir.path());
    assert!(out1.status.success(), "stderr: {}", String::from_utf8_lossy(&out1.stderr));
    let mut args2 = args;
    args2[10] = "b";
    let out2 = run(&args2, dir.path());
    assert!(out2.status.success());
    let a = std::fs::read(dir.path().join("a/bounds.json")).unwrap();
    let b = std::fs::read(dir.path().join("b/bounds.json")).unwrap();
    assert_eq!(a, b, "identical configuration must produce identical bytes");

    // The JSON record embeds the resolved configuration and the case tag.
    let record: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(record["config"]["operator"]["p"], 4.0);
    assert_eq!(record["result"]["l0"], 6.0);
    assert_eq!(record["result"]["bounds"]["upper_case"], "case_ii");
    assert_eq!(record["result"]["bounds"]["upper_analytic"], 10.0);
}

#[test]
fn competitive_bounds_report_window() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["bounds", "--mode", "competitive", "--p", "4", "--q", "2", "--out", "o"],
        dir.path(),
    );
    assert!(out.status.success());
    let record: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("o/bounds.json")).unwrap()).unwrap();
    let cb = &record["result"]["bounds"]["competitive"];
    assert!((cb["c_lower"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!((cb["c_upper_for_cstar"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!((cb["c_max"].as_f64().unwrap() - 1.1547).abs() < 1e-4);
    assert_eq!(cb["window_empty"], true);
}

#[test]
fn tabulated_reaction_from_csv_config() {
    let dir = tempfile::tempdir().unwrap();
    let mut table = String::from("u,f\n");
    for i in 0..=400 {
        let u = i as f64 / 400.0;
        table.push_str(&format!("{},{}\n", u, u * (1.0 - u)));
    }
    std::fs::write(dir.path().join("reaction.csv"), table).unwrap();
    let out = run(
        &[
            "bounds", "--family", "tabulated", "--reaction-csv", "reaction.csv", "--p", "4",
            "--q", "2", "--out", "o",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let record: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("o/bounds.json")).unwrap()).unwrap();
    // Tabulated u(1-u) reproduces the L0 = L+ = 1 constants to probe accuracy.
    assert!((record["result"]["l0"].as_f64().unwrap() - 1.0).abs() < 0.02);
    assert!((record["result"]["bounds"]["lower"].as_f64().unwrap() - 2.0).abs() < 0.02);
}

#[test]
fn csv_format_echoes_config_in_comments() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["bounds", "--format", "csv", "--l0", "1", "--lplus", "1", "--out", "o"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("o/bounds.csv")).unwrap();
    assert!(text.starts_with('#'), "config echo comments expected");
    assert!(text.contains("# [operator]"));
    assert!(text.lines().any(|l| l.starts_with("l0,lplus,lower")));
}

#[test]
fn classify_reports_breach_with_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "classify", "--c", "4", "--mode", "competitive", "--p", "4", "--q", "2", "--h", "4",
            "--out", "o",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3), "domain breach must exit 3");
    let shoot = std::fs::read_to_string(dir.path().join("o/shoot.csv")).unwrap();
    assert!(shoot.lines().any(|l| l == "v,y,phi"), "shoot CSV with spec header");
}

#[test]
fn classify_admissible_speed_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["classify", "--c", "2.5", "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("admissible"), "stdout: {stdout}");
}

#[test]
fn usage_and_config_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    // Unknown flag.
    let out = run(&["bounds", "--not-a-flag"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    // Config file with an unknown key is rejected.
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[operator]\nq = 2.0\ntypo_key = 1\n").unwrap();
    let out = run(&["--config", "bad.toml", "bounds"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    // Cooperative mode without p.
    std::fs::write(&cfg, "[operator]\nmode = \"cooperative\"\nq = 2.0\n").unwrap();
    let out = run(&["--config", "bad.toml", "bounds"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    // simulate without a [grid] section.
    let out = run(&["simulate", "--c", "2.5"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn critical_speed_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "[operator]\nmode = \"single_q\"\nq = 2.0\n\n[reaction]\nfamily = \"classical_logistic\"\n",
    )
    .unwrap();
    let out = run(&["--config", "run.toml", "critical-speed", "--out", "o"], dir.path());
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let record: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("o/critical_speed.json")).unwrap())
            .unwrap();
    let c_star = record["result"]["c_star"].as_f64().unwrap();
    assert!((c_star - 2.0).abs() <= 1e-3, "classical Fisher c* from CLI: {c_star}");
}

#[test]
fn figures_regenerate_reference_data() {
    let dir = tempfile::tempdir().unwrap();
    for id in 1..=5u8 {
        let out = run(&["figure", "--id", &id.to_string(), "--out", "figs"], dir.path());
        assert!(
            out.status.success(),
            "figure {id} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(dir.path().join(format!("figs/figure_{id}.csv")).exists());
        assert!(dir.path().join(format!("figs/figure_{id}.json")).exists());
    }
    let meta: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("figs/figure_1.json")).unwrap())
            .unwrap();
    assert!(meta["g_min_value"].as_f64().unwrap() > 0.0);
    let meta: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("figs/figure_4.json")).unwrap())
            .unwrap();
    assert_eq!(meta["classification"], "admissible");
    assert!(meta["max_y"].as_f64().unwrap() < meta["y_max"].as_f64().unwrap());
    let meta: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("figs/figure_5.json")).unwrap())
            .unwrap();
    assert_eq!(meta["classification"], "domain_breach");
    assert!(meta["window_interval"].is_null());
}

#[test]
fn sweep_isolates_invalid_cells() {
    let dir = tempfile::tempdir().unwrap();
    // p = 1.5 is an invalid cooperative operator; p = 4 classifies fine.
    let out = run(
        &[
            "sweep", "--p-list", "1.5,4", "--q-list", "2", "--c-list", "2.5", "--out", "o",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "exit 0 when any row succeeded");
    let text = std::fs::read_to_string(dir.path().join("o/sweep.csv")).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 3, "header + 2 rows: {text}");
    let bad = rows.iter().find(|r| r.starts_with("1.5,")).unwrap();
    assert!(bad.contains("cooperative"), "error recorded per row: {bad}");
    let good = rows.iter().find(|r| r.starts_with("4,")).unwrap();
    assert!(good.contains("admissible"), "valid row classified: {good}");

    // An empty grid is a valid sweep: just the header, exit 0.
    let out = run(&["sweep", "--out", "o2"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("o2/sweep.csv")).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1);
}

#[test]
fn profile_command_writes_mandatory_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["profile", "--c", "2.5", "--out", "o"], dir.path());
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("o/profile.csv")).unwrap();
    assert!(text.lines().any(|l| l == "z,u,du_dz"), "profile header is mandatory");
    // Inadmissible speed refuses with a numerical-failure exit.
    let out = run(&["profile", "--c", "1.0", "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_step_front_small_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sim.toml");
    std::fs::write(
        &cfg,
        r#"
[operator]
mode = "single_q"
q = 2.0

[reaction]
family = "classical_logistic"

[grid]
x_min = -30.0
x_max = 30.0
nx = 600
dt = 1.0
t_end = 6.0
snapshot_stride = 500

[simulate]
initial = "step"
"#,
    )
    .unwrap();
    let out = run(&["--config", "sim.toml", "simulate", "--out", "o"], dir.path());
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let record: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("o/run_manifest.json")).unwrap())
            .unwrap();
    assert_eq!(record["result"]["status"], "completed");
    assert!(dir.path().join("o/front_track.csv").exists());
    assert!(dir.path().join("o/snapshot_0000.csv").exists());
}
