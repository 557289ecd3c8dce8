//! End-to-end checks of the command-line interface: flag parsing, file
//! formats, determinism under fixed seeds, exit codes, the probe
//! configuration file, and the output-directory environment variable.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pelastica"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn special_prints_17_digit_value() {
    let out = run(&["special", "--p", "4", "--fn", "k1p", "--q", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let value: f64 = text.trim().parse().unwrap();
    assert!((value - 2.622057554292120).abs() < 1e-9, "{text}");
    assert!(text.trim().len() >= 18, "not enough digits: {text}");
}

#[test]
fn special_json_format() {
    let out = run(&[
        "special", "--p", "3", "--fn", "qp", "--q", "0.5", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["p"], 3.0);
    assert_eq!(v["q"], 0.5);
    assert!(v["value"].is_number());
}

#[test]
fn exit_codes_distinguish_domain_and_numerical_failures() {
    // q = 1 with p <= 2 is a domain error -> exit 1
    let out = run(&["special", "--p", "2", "--fn", "k1p", "--q", "1"]);
    assert_eq!(out.status.code(), Some(1));
    // unknown flags -> clap usage error (exit 2)
    let out = run(&["special", "--p", "2", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    // success -> 0
    let out = run(&["special", "--p", "2", "--fn", "k1p", "--q", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn curve_csv_has_header_and_end_tangent_rows() {
    let out = run(&[
        "curve", "--flatcore", "--p", "4", "--N", "2", "--signs", "+-", "--uniform", "--r",
        "0.5", "--samples", "100",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "s,x,y,theta,kappa");
    let last = text.lines().last().unwrap();
    let fields: Vec<f64> = last.split(',').map(|f| f.parse().unwrap()).collect();
    // end tangent -e1: cos(theta) = -1, and zero end curvature
    assert!((fields[3].cos() + 1.0).abs() < 1e-9);
    assert!(fields[4].abs() < 1e-12);
}

#[test]
fn svg_has_one_path_per_piece_and_markers() {
    let out = run(&[
        "curve", "--flatcore", "--p", "4", "--N", "2", "--signs", "+-", "--uniform", "--r",
        "0.5", "--samples", "64", "--format", "svg",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    // N = 2 with three positive flat lengths: 5 pieces
    assert_eq!(text.matches("<path").count(), 5);
    assert_eq!(text.matches("<circle").count(), 2);
    assert!(text.contains("viewBox=\"0 0 "));
}

#[test]
fn identical_seeds_give_byte_identical_probe_reports() {
    let args = [
        "probe", "--p", "4", "--N", "1", "--signs", "+", "--uniform", "--r", "0.5", "--eps",
        "0.02", "--seeds", "2", "--M", "100", "--max-iter", "150", "--gtol", "1e-6", "--seed",
        "11",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    let v: serde_json::Value = serde_json::from_str(stdout(&a).trim()).unwrap();
    assert!(v["e_ref"].is_number());
    assert_eq!(v["seeds"].as_array().unwrap().len(), 2);
}

#[test]
fn probe_config_file_with_flag_override() {
    let dir = std::env::temp_dir().join(format!("pelastica-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg_path = dir.join("probe.cfg");
    std::fs::write(
        &cfg_path,
        "p = 4.0\nN = 1\nsigns = +\nuniform = true\nr = 0.5\neps = 0.02\nseeds = 1\nM = 100\nmax_iter = 100\ngtol = 1e-6\n",
    )
    .unwrap();
    let out_path = dir.join("report.json");
    let out = bin()
        .args([
            "probe",
            "--config",
            cfg_path.to_str().unwrap(),
            "--seeds",
            "2",
            "--out",
            out_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    // the --seeds flag overrides the config file's 1
    assert_eq!(report["seeds"].as_array().unwrap().len(), 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn out_dir_env_var_resolves_relative_paths() {
    let dir = std::env::temp_dir().join(format!("pelastica-outdir-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = bin()
        .env("PELASTICA_OUT_DIR", &dir)
        .args([
            "special", "--p", "4", "--fn", "e1p", "--q", "1", "--out", "value.txt",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let written = std::fs::read_to_string(dir.join("value.txt")).unwrap();
    let value: f64 = written.trim().parse().unwrap();
    assert!((value - 0.874019184764040).abs() < 1e-9);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn probe_dumps_trajectories_when_asked() {
    let dir = std::env::temp_dir().join(format!("pelastica-traj-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = bin()
        .args([
            "probe", "--p", "4", "--N", "1", "--signs", "+", "--uniform", "--r", "0.5",
            "--eps", "0.02", "--seeds", "1", "--M", "100", "--max-iter", "60", "--gtol",
            "1e-9", "--seed", "5", "--dump-trajectories",
        ])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(PathBuf::from(&dir).join("seed_5.csv")).unwrap();
    assert!(csv.starts_with("iteration,energy\n"));
    assert!(csv.lines().count() > 2);
    std::fs::remove_dir_all(&dir).ok();
}
