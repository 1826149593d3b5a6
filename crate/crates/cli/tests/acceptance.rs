//! End-to-end contract tests for the `ulk` binary: exit codes, file
//! formats, and the shapes of every artifact it writes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BENCH_CONFIG: &str = "\
# benchmark economy
beta = 0.25
gamma = 1.05
delta = 0.05
pi = 0.01
rho = 0.04
sigma = 1.5
k0 = 80
h0 = 10
";

fn ulk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ulk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

fn bench_dir() -> (tempfile::TempDir, PathBuf, String) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, BENCH_CONFIG).unwrap();
    let out = dir.path().join("art");
    let cfg_s = cfg.to_str().unwrap().to_string();
    (dir, out, cfg_s)
}

fn verdict(number: u32, label: &str, ok: bool, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    println!("acceptance {number} [{label}]: {status} ({detail})");
    assert!(ok, "acceptance {number} [{label}] failed: {detail}");
}

fn read_rows(path: &Path) -> (String, Vec<Vec<f64>>) {
    let body = fs::read_to_string(path).unwrap();
    let mut lines = body.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines
        .filter(|l| !l.is_empty())
        .map(|l| l.split(',').map(|c| c.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn criterion_8_cli_exit_codes() {
    let (_dir, out, cfg) = bench_dir();
    let out_s = out.to_str().unwrap();

    let calibrate = ulk(&["calibrate", "--config", &cfg, "--out", out_s]);
    let stdout = text(&calibrate.stdout);
    let pipeline_start = code(&calibrate) == 0
        && stdout.contains("u0 = 7.4208424791")
        && out.join("calibration.txt").is_file();

    let snapshot = out.join("calibration.txt");
    let solve = ulk(&[
        "solve",
        "--config",
        &cfg,
        "--calibration",
        snapshot.to_str().unwrap(),
        "--out",
        out_s,
    ]);
    let solved = code(&solve) == 0 && out.join("trajectory.csv").is_file();

    let verify = ulk(&["verify", "--config", &cfg, "--seed", "42", "--out", out_s]);
    let verified = code(&verify) == 0
        && text(&verify.stdout).contains("ALL PASS")
        && out.join("report.json").is_file();

    let degenerate = ulk(&["calibrate", "--config", &cfg, "--sigma", "0.25", "--out", out_s]);
    let divergent = ulk(&[
        "calibrate", "--beta", "0.25", "--gamma", "1.05", "--delta", "0.08", "--pi", "0.01",
        "--rho", "0.01", "--sigma", "0.5", "--k0", "80", "--h0", "10", "--out", out_s,
    ]);
    let injected = ulk(&[
        "verify", "--config", &cfg, "--seed", "42", "--n-draws", "5", "--inject-chi-error",
        "--out", out_s,
    ]);

    let ok = pipeline_start
        && solved
        && verified
        && code(&degenerate) == 2
        && code(&divergent) == 3
        && code(&injected) == 4;
    verdict(
        8,
        "cli exit codes",
        ok,
        &format!(
            "calibrate/solve/verify = {}/{}/{}, degenerate = {}, divergent regime = {}, injected defect = {}",
            code(&calibrate),
            code(&solve),
            code(&verify),
            code(&degenerate),
            code(&divergent),
            code(&injected)
        ),
    );
}

#[test]
fn trajectory_csv_honors_the_grid_and_format() {
    let (_dir, out, cfg) = bench_dir();
    let out_s = out.to_str().unwrap();
    let solve = ulk(&["solve", "--config", &cfg, "--out", out_s]);
    assert_eq!(code(&solve), 0, "stderr: {}", text(&solve.stderr));

    let path = out.join("trajectory.csv");
    let body = fs::read_to_string(&path).unwrap();
    assert!(body.ends_with('\n'));
    assert!(!body.contains('\r'));

    let (header, rows) = read_rows(&path);
    assert_eq!(header, "t,z,k,h,c,u,c_over_k,u_alt,h_alt,lambda_rel,mu_rel");
    assert_eq!(rows.len(), 501);

    let first = &rows[0];
    assert_eq!(first[0], 0.0);
    assert!((first[2] - 80.0).abs() < 1e-9, "k(0) = {}", first[2]);
    assert!((first[3] - 10.0).abs() < 1e-9, "h(0) = {}", first[3]);
    assert_eq!(rows[500][0], 50.0);

    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), 11);
        let t_expect = 0.1 * i as f64;
        assert!((row[0] - t_expect).abs() <= 1e-12 * (1.0 + t_expect));
        assert!(row[5] > 0.0 && row[5] < 1.0, "u out of range at row {i}");
        assert!(row[1..].iter().all(|v| v.is_finite() && *v > 0.0));
    }

    // full round-trip precision in every cell
    let sample_row = body.lines().nth(1).unwrap();
    for cell in sample_row.split(',') {
        assert!(cell.contains('e'), "cell {cell:?} not in scientific form");
        let mantissa = cell.split('e').next().unwrap();
        let digits = mantissa.chars().filter(|c| c.is_ascii_digit()).count();
        assert_eq!(digits, 17, "cell {cell:?} lacks f64 round-trip precision");
    }
}

#[test]
fn two_point_grid_emits_exactly_the_endpoints() {
    let (_dir, out, cfg) = bench_dir();
    let solve = ulk(&[
        "solve", "--config", &cfg, "--n-points", "2", "--t-max", "50",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&solve), 0);
    let (_, rows) = read_rows(&out.join("trajectory.csv"));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0], 0.0);
    assert_eq!(rows[1][0], 50.0);
}

#[test]
fn calibrate_prints_a_residual_at_solver_precision() {
    let (_dir, out, cfg) = bench_dir();
    let calibrate = ulk(&["calibrate", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&calibrate), 0);
    let stdout = text(&calibrate.stdout);
    let line = stdout
        .lines()
        .find(|l| l.starts_with("residual = "))
        .expect("residual line");
    let value: f64 = line.trim_start_matches("residual = ").parse().unwrap();
    assert!(value.abs() <= 1e-10, "residual {value}");
}

#[test]
fn snapshot_reuse_rejects_mismatched_parameters() {
    let (_dir, out, cfg) = bench_dir();
    let out_s = out.to_str().unwrap();
    assert_eq!(code(&ulk(&["calibrate", "--config", &cfg, "--out", out_s])), 0);
    let snapshot = out.join("calibration.txt");
    let solve = ulk(&[
        "solve", "--config", &cfg, "--sigma", "2.0",
        "--calibration", snapshot.to_str().unwrap(), "--out", out_s,
    ]);
    assert_eq!(code(&solve), 2);
    assert!(text(&solve.stderr).contains("sigma"));
}

#[test]
fn verify_requires_at_least_one_draw() {
    let (_dir, out, cfg) = bench_dir();
    let verify = ulk(&[
        "verify", "--config", &cfg, "--n-draws", "0", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&verify), 2);
}

#[test]
fn sweep_recalibrates_across_sigma() {
    let (_dir, out, cfg) = bench_dir();
    let sweep = ulk(&[
        "sweep", "--config", &cfg, "--param", "sigma", "--from", "1", "--to", "3",
        "--steps", "5", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&sweep), 0, "stderr: {}", text(&sweep.stderr));

    let body = fs::read_to_string(out.join("sweep.csv")).unwrap();
    let mut lines = body.lines();
    assert_eq!(
        lines.next().unwrap(),
        "sigma,u0,u_star,g_bgp,A_star,residual,sigma_restricted,status"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 5);
    for row in &rows {
        assert_eq!(*row.last().unwrap(), "ok");
        let u0: f64 = row[1].parse().unwrap();
        let residual: f64 = row[5].parse().unwrap();
        assert!(u0 > 0.0 && u0 < 1.0);
        assert!(residual.abs() <= 1e-10);
        assert!(!row[6].is_empty());
    }
    let sigma_1_u0: f64 = rows[0][1].parse().unwrap();
    assert!((sigma_1_u0 - 0.6701408616).abs() < 1e-9);
}

#[test]
fn sweep_marks_the_degenerate_point_and_continues() {
    let (_dir, out, cfg) = bench_dir();
    let sweep = ulk(&[
        "sweep", "--config", &cfg, "--param", "sigma", "--from", "0.15", "--to", "0.35",
        "--steps", "3", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&sweep), 0);
    let body = fs::read_to_string(out.join("sweep.csv")).unwrap();
    let rows: Vec<&str> = body.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    let middle: Vec<&str> = rows[1].split(',').collect();
    assert_eq!(*middle.last().unwrap(), "inadmissible");
    assert!(middle[1].is_empty(), "no root is reported for sigma = beta");
}

#[test]
fn sweep_reports_the_restricted_sigma_knife_edge() {
    let (_dir, out, cfg) = bench_dir();
    let sweep = ulk(&[
        "sweep", "--config", &cfg, "--pi", "0.05", "--delta", "0.06", "--rho", "0.04",
        "--param", "beta", "--from", "0.7", "--to", "0.9", "--steps", "3",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&sweep), 0, "stderr: {}", text(&sweep.stderr));
    let body = fs::read_to_string(out.join("sweep.csv")).unwrap();
    let row: Vec<&str> = body.lines().nth(2).unwrap().split(',').collect();
    let value: f64 = row[0].parse().unwrap();
    assert_eq!(value, 0.8);
    let restricted: f64 = row[6].parse().unwrap();
    assert!((restricted - 4.0).abs() <= 1e-9, "restricted sigma {restricted}");
}

#[test]
fn unknown_sweep_parameter_is_invalid_input() {
    let (_dir, out, cfg) = bench_dir();
    let sweep = ulk(&[
        "sweep", "--config", &cfg, "--param", "xi", "--from", "0", "--to", "1",
        "--steps", "2", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&sweep), 2);
    assert!(text(&sweep.stderr).contains("beta"));
}

#[test]
fn charts_overlay_both_formulations() {
    let (_dir, out, cfg) = bench_dir();
    let plot = ulk(&[
        "plot", "--config", &cfg, "--t-max", "10", "--n-points", "51",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&plot), 0, "stderr: {}", text(&plot.stderr));
    for name in ["chart_k.svg", "chart_h.svg", "chart_c.svg", "chart_u.svg"] {
        let body = fs::read_to_string(out.join(name)).unwrap();
        assert!(body.starts_with("<svg"));
        assert!(body.contains("viewBox=\"0 0 800 600\""));
        let polylines = body.matches("<polyline").count();
        let expect = if name == "chart_u.svg" || name == "chart_h.svg" { 2 } else { 1 };
        assert_eq!(polylines, expect, "{name}");
    }
}

#[test]
fn reports_are_deterministic_for_a_fixed_seed() {
    let (_dir, out, cfg) = bench_dir();
    let out_a = out.join("a");
    let out_b = out.join("b");
    for dir in [&out_a, &out_b] {
        let verify = ulk(&[
            "verify", "--config", &cfg, "--seed", "7", "--n-draws", "3",
            "--out", dir.to_str().unwrap(),
        ]);
        assert_eq!(code(&verify), 0, "stderr: {}", text(&verify.stderr));
    }
    let json_a = fs::read(out_a.join("report.json")).unwrap();
    let json_b = fs::read(out_b.join("report.json")).unwrap();
    assert_eq!(json_a, json_b);
}
