//! Binary-level checks: exit codes, CSV file format, config handling.

use std::path::PathBuf;
use std::process::{Command, Output};

fn triosc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_triosc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("triosc-test-{}-{}", std::process::id(), name));
    p
}

#[test]
fn presets_lists_all_six() {
    let out = triosc(&["presets"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let names: Vec<&str> = text.lines().filter_map(|l| l.split_whitespace().next()).collect();
    assert_eq!(names, ["fig1a", "fig1b", "fig1c", "fig2a", "fig2b", "fig2c"]);
}

#[test]
fn run_writes_csv_with_exact_header_and_lf() {
    let csv = tmp_path("run.csv");
    let out = triosc(&[
        "run",
        "--preset",
        "fig1a",
        "--steps",
        "12",
        "--t-max",
        "3",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("t,n1,n2,n3,engine\n"));
    assert!(!text.contains('\r'));
    // engines sorted: all analytic rows precede all coherent rows
    let engines: Vec<&str> =
        text.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(engines.len(), 24);
    assert!(engines[..12].iter().all(|e| *e == "analytic"));
    assert!(engines[12..].iter().all(|e| *e == "coherent"));
    // times ascending within each engine block
    let times: Vec<f64> = text
        .lines()
        .skip(1)
        .take(12)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(times.windows(2).all(|w| w[0] < w[1]));
    std::fs::remove_file(&csv).ok();
}

#[test]
fn run_stdout_matches_file_output() {
    let out = triosc(&["run", "--preset", "fig1b", "--steps", "8", "--t-max", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("t,n1,n2,n3,engine\n"));
    assert_eq!(text.lines().count(), 17);
}

#[test]
fn gnuplot_script_emitted_on_request() {
    let csv = tmp_path("plot.csv");
    let gp = tmp_path("plot.gp");
    let out = triosc(&[
        "run",
        "--preset",
        "fig1a",
        "--steps",
        "8",
        "--t-max",
        "2",
        "--out",
        csv.to_str().unwrap(),
        "--gnuplot",
        gp.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let script = std::fs::read_to_string(&gp).unwrap();
    assert!(script.contains("set datafile separator"));
    assert!(script.contains(csv.to_str().unwrap()));
    assert!(script.contains("analytic"));
    std::fs::remove_file(&csv).ok();
    std::fs::remove_file(&gp).ok();
}

#[test]
fn config_file_drives_run_and_flags_override() {
    let cfg = tmp_path("scenario.cfg");
    std::fs::write(
        &cfg,
        "# test scenario\npreset = fig1c\nsteps = 6\nt_max = 1.0\nengines = analytic\n",
    )
    .unwrap();
    let out = triosc(&["run", "--config", cfg.to_str().unwrap(), "--steps", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 5, "flag must override file steps");
    std::fs::remove_file(&cfg).ok();
}

#[test]
fn config_parse_error_exits_2_with_line_number() {
    let cfg = tmp_path("broken.cfg");
    std::fs::write(&cfg, "omega = 4\nnonsense_key = 1\n").unwrap();
    let out = triosc(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains(":2:"), "missing line number: {stderr}");
    assert!(stderr.contains("nonsense_key"));
    std::fs::remove_file(&cfg).ok();
}

#[test]
fn unknown_preset_exits_2() {
    let out = triosc(&["run", "--preset", "fig7q"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_scenario_exits_2() {
    let out = triosc(&["run", "--steps", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = triosc(&["run", "--engines", "fock"]);
    assert_eq!(out.status.code(), Some(2), "fock without dims is a config error");
}

#[test]
fn truncation_budget_breach_exits_4() {
    // alpha = 4 in an 8-level mode blows the default leakage budget
    let out = triosc(&[
        "run",
        "--preset",
        "fig1b",
        "--engines",
        "fock",
        "--dims",
        "8,8,8",
        "--steps",
        "4",
        "--t-max",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("tail mass"), "stderr: {stderr}");
}

#[test]
fn validate_passes_on_preset_and_fails_under_fault() {
    let out = triosc(&["validate", "--preset", "fig1b", "--steps", "120"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS  conservation (analytic)"));

    let out = triosc(&[
        "validate",
        "--preset",
        "fig1b",
        "--steps",
        "120",
        "--inject-fault",
        "omega-skew",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL  conservation (analytic)"));
}

#[test]
fn emitted_csv_round_trips_bit_exactly() {
    let csv = tmp_path("roundtrip.csv");
    let out = triosc(&[
        "run",
        "--preset",
        "fig2b",
        "--steps",
        "40",
        "--t-max",
        "7",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let rows = triosc_cli::csv::parse_csv(&text).unwrap();
    // re-emitting the parsed values must reproduce the file byte for byte
    let mut regenerated = String::from("t,n1,n2,n3,engine\n");
    for row in &rows {
        regenerated.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{}\n",
            row.t,
            row.n1,
            row.n2,
            row.n3,
            row.engine.label()
        ));
    }
    assert_eq!(text, regenerated);
    std::fs::remove_file(&csv).ok();
}
