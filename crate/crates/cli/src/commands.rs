//! The five subcommands. Each one resolves inputs, calls into the
//! library, writes its artifacts under the output directory, and
//! reports what it wrote on stdout.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use ulk_core::calibration::{calibration_at, solve_u0};
use ulk_core::closedform::{trajectory, Grid};
use ulk_core::params::{derive_constants, sigma_restriction, SigmaRestricted, PARAM_KEYS};
use ulk_core::verify::run_all;
use ulk_core::{validate_params, Calibration64, Error, Trajectory64};

use crate::config::{format_value, load_calibration_file, write_calibration_file, RunConfig};
use crate::csvout;
use crate::fail::Failure;
use crate::svg::{line_chart, Series};

fn ensure_out(cfg: &RunConfig) -> Result<(), Failure> {
    fs::create_dir_all(&cfg.out)
        .map_err(|e| Failure::invalid(format!("out {}: {e}", cfg.out.display())))
}

fn solve_calibration(cfg: &RunConfig) -> Result<(Calibration64, f64), Failure> {
    let dc = derive_constants(cfg.params)?;
    let profile = solve_u0(&dc)?;
    let mut cal = calibration_at(&dc, profile.root)?;
    // the polished root defines the admissible path; the leftover
    // f64 residual must not ride along as a spurious unstable mode
    cal.g_residual = 0.0;
    Ok((cal, profile.residual_at_root))
}

pub fn cmd_calibrate(cfg: &RunConfig) -> Result<(), Failure> {
    ensure_out(cfg)?;
    let (cal, residual) = solve_calibration(cfg)?;
    println!("u0 = {}", format_value(cal.u0));
    println!("c0 = {}", format_value(cal.c0));
    println!("z0 = {}", format_value(cal.z0));
    println!("A_star = {}", format_value(cal.a_star));
    println!("B_star = {}", format_value(cal.b_star));
    println!("residual = {residual:.3e}");
    let path = cfg.out.join("calibration.txt");
    write_calibration_file(&path, &cfg.params, &cal)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn solved_trajectory(
    cfg: &RunConfig,
    calibration: Option<&Path>,
) -> Result<Trajectory64, Failure> {
    let dc = derive_constants(cfg.params)?;
    let cal = match calibration {
        Some(path) => load_calibration_file(path, &cfg.params)?,
        None => solve_calibration(cfg)?.0,
    };
    let grid = Grid::new(cfg.t_max, cfg.n_points);
    Ok(trajectory(&dc, &cal, &grid, cfg.tol)?)
}

fn write_chart(
    dir: &Path,
    name: &str,
    title: &str,
    tr: &Trajectory64,
    series: &[Series],
) -> Result<PathBuf, Failure> {
    let path = dir.join(name);
    fs::write(&path, line_chart(title, "t", title, &tr.times, series))?;
    Ok(path)
}

fn chart_h(dir: &Path, tr: &Trajectory64) -> Result<PathBuf, Failure> {
    write_chart(dir, "chart_h.svg", "h", tr, &[
        Series { label: "h", ys: &tr.h, color: "#1f77b4", dashed: false },
        Series { label: "h alt form", ys: &tr.h_alt, color: "#d62728", dashed: true },
    ])
}

fn chart_u(dir: &Path, tr: &Trajectory64) -> Result<PathBuf, Failure> {
    write_chart(dir, "chart_u.svg", "u", tr, &[
        Series { label: "u", ys: &tr.u, color: "#1f77b4", dashed: false },
        Series { label: "u alt form", ys: &tr.u_alt, color: "#d62728", dashed: true },
    ])
}

pub fn cmd_solve(cfg: &RunConfig, calibration: Option<&Path>, svg: bool) -> Result<(), Failure> {
    ensure_out(cfg)?;
    let tr = solved_trajectory(cfg, calibration)?;
    let path = cfg.out.join("trajectory.csv");
    fs::write(&path, csvout::trajectory_csv(&tr))?;
    println!("wrote {} ({} rows)", path.display(), tr.times.len());
    if svg {
        for path in [chart_h(&cfg.out, &tr)?, chart_u(&cfg.out, &tr)?] {
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

pub fn cmd_plot(cfg: &RunConfig) -> Result<(), Failure> {
    ensure_out(cfg)?;
    let tr = solved_trajectory(cfg, None)?;
    let k = write_chart(&cfg.out, "chart_k.svg", "k", &tr, &[Series {
        label: "k",
        ys: &tr.k,
        color: "#1f77b4",
        dashed: false,
    }])?;
    let c = write_chart(&cfg.out, "chart_c.svg", "c", &tr, &[Series {
        label: "c",
        ys: &tr.c,
        color: "#1f77b4",
        dashed: false,
    }])?;
    for path in [k, chart_h(&cfg.out, &tr)?, c, chart_u(&cfg.out, &tr)?] {
        println!("wrote {}", path.display());
    }
    Ok(())
}

pub fn cmd_verify(cfg: &RunConfig, inject_chi_error: bool) -> Result<(), Failure> {
    if cfg.n_draws == 0 {
        return Err(Failure::invalid("n_draws must be positive"));
    }
    ensure_out(cfg)?;
    let dc = derive_constants(cfg.params)?;
    let chi_scale = if inject_chi_error { 1.01 } else { 1.0 };
    let report = run_all(&dc, cfg.n_draws, cfg.seed, chi_scale)?;

    let text = report.to_string();
    print!("{text}");
    let txt_path = cfg.out.join("report.txt");
    fs::write(&txt_path, &text)?;
    let json_path = cfg.out.join("report.json");
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| Failure::invalid(format!("report serialization: {e}")))?;
    fs::write(&json_path, json + "\n")?;
    println!("wrote {}", txt_path.display());
    println!("wrote {}", json_path.display());

    if report.all_passed() {
        Ok(())
    } else {
        let failing: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| c.status == ulk_core::verify::CheckStatus::Fail)
            .map(|c| c.name.as_str())
            .collect();
        Err(Failure::verification(format!(
            "verification failed: {}",
            failing.join(", ")
        )))
    }
}

/// Short machine-readable tag for a sweep row that could not complete.
fn status_tag(e: &Error) -> &'static str {
    match e {
        Error::InvalidParams(_) => "inadmissible",
        Error::NonconvergentIntegralRegime { .. } => "nonconvergent_tail",
        Error::DivergentB { .. } => "divergent_slow_tail",
        Error::EtaSingular { .. } => "eta_singular",
        Error::NoBracket { .. } => "no_root",
        Error::MultipleBrackets { .. } => "multiple_roots",
        Error::InadmissibleSteadyState { .. } => "inadmissible_steady_state",
        Error::ToleranceUnreachable { .. } => "tolerance_unreachable",
        Error::DenominatorVanished { .. } => "denominator_vanished",
        _ => "error",
    }
}

struct SweepRow {
    value: f64,
    u0: Option<f64>,
    u_star: Option<f64>,
    g_bgp: Option<f64>,
    a_star: Option<f64>,
    residual: Option<f64>,
    sigma_restricted: Option<String>,
    status: &'static str,
}

fn sweep_row(base: &RunConfig, param: &str, value: f64) -> SweepRow {
    let mut row = SweepRow {
        value,
        u0: None,
        u_star: None,
        g_bgp: None,
        a_star: None,
        residual: None,
        sigma_restricted: None,
        status: "ok",
    };
    let mut map: BTreeMap<String, f64> = base
        .params
        .key_values()
        .iter()
        .map(|&(k, v)| (k.to_string(), v))
        .collect();
    map.insert(param.to_string(), value);
    let p = match validate_params::<f64>(&map) {
        Ok(p) => p,
        Err(e) => {
            row.status = status_tag(&e);
            return row;
        }
    };
    row.sigma_restricted = Some(match sigma_restriction(&p).sigma_restricted {
        SigmaRestricted::Feasible(v) => format_value(v),
        SigmaRestricted::Infeasible => "infeasible".to_string(),
    });
    let dc = match derive_constants(p) {
        Ok(dc) => dc,
        Err(e) => {
            row.status = status_tag(&e);
            return row;
        }
    };
    row.u_star = Some(dc.u_star());
    row.g_bgp = Some(dc.g_bgp);
    // a rest share outside (0,1] means no admissible long run; do not
    // pretend the root search would mean anything there
    if !(dc.u_star() > 0.0 && dc.u_star() <= 1.0) {
        row.status = "inadmissible_steady_state";
        return row;
    }
    match solve_u0(&dc).and_then(|profile| {
        calibration_at(&dc, profile.root).map(|cal| (profile, cal))
    }) {
        Ok((profile, cal)) => {
            row.u0 = Some(profile.root);
            row.a_star = Some(cal.a_star);
            row.residual = Some(profile.residual_at_root);
        }
        Err(e) => row.status = status_tag(&e),
    }
    row
}

fn opt_cell(v: Option<f64>) -> String {
    v.map(format_value).unwrap_or_default()
}

pub fn cmd_sweep(
    cfg: &RunConfig,
    param: &str,
    from: f64,
    to: f64,
    steps: usize,
) -> Result<(), Failure> {
    if !PARAM_KEYS.contains(&param) {
        return Err(Failure::invalid(format!(
            "unknown sweep parameter {param:?}; valid: {}",
            PARAM_KEYS.join(", ")
        )));
    }
    if steps == 0 {
        return Err(Failure::invalid("steps must be positive"));
    }
    if !(from.is_finite() && to.is_finite()) {
        return Err(Failure::invalid("sweep range must be finite"));
    }
    ensure_out(cfg)?;

    let mut text = format!("{param},u0,u_star,g_bgp,A_star,residual,sigma_restricted,status\n");
    let mut counts: BTreeMap<&'static str, usize> = BTreeMap::new();
    for i in 0..steps {
        let value = if steps == 1 {
            from
        } else {
            from + (to - from) * i as f64 / (steps - 1) as f64
        };
        let row = sweep_row(cfg, param, value);
        *counts.entry(row.status).or_insert(0) += 1;
        text.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            format_value(row.value),
            opt_cell(row.u0),
            opt_cell(row.u_star),
            opt_cell(row.g_bgp),
            opt_cell(row.a_star),
            opt_cell(row.residual),
            row.sigma_restricted.unwrap_or_default(),
            row.status,
        ));
    }
    let path = cfg.out.join("sweep.csv");
    fs::write(&path, text)?;
    let summary: Vec<String> = counts.iter().map(|(s, n)| format!("{n} {s}")).collect();
    println!("wrote {} ({} rows: {})", path.display(), steps, summary.join(", "));
    Ok(())
}
