//! Run configuration: a flat key=value file, command-line overrides,
//! and the calibration snapshot file.
//!
//! Precedence is file < flags. Every run option has a default, so a
//! bare benchmark invocation needs nothing but the eight parameters.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use ulk_core::params::PARAM_KEYS;
use ulk_core::{validate_params, Calibration64, ModelParams64};

use crate::fail::Failure;

/// Options shared by every subcommand. Parameter flags mirror the
/// config-file keys one to one.
#[derive(Args, Debug, Default)]
pub struct CommonArgs {
    /// Key=value config file; flags override its entries
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub pi: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub k0: Option<f64>,
    #[arg(long)]
    pub h0: Option<f64>,

    /// Horizon of the output grid
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Number of grid points including both endpoints
    #[arg(long)]
    pub n_points: Option<usize>,
    /// Quadrature tolerance for path evaluation
    #[arg(long)]
    pub tol: Option<f64>,
    /// Seed for the verification draw stream
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of random parameter draws in verification
    #[arg(long)]
    pub n_draws: Option<usize>,
    /// Output directory for generated files
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Fully resolved options for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: ModelParams64,
    pub t_max: f64,
    pub n_points: usize,
    pub tol: f64,
    pub seed: u64,
    pub n_draws: usize,
    pub out: PathBuf,
}

const DEFAULT_T_MAX: f64 = 50.0;
const DEFAULT_N_POINTS: usize = 501;
const DEFAULT_TOL: f64 = 1e-12;
const DEFAULT_SEED: u64 = 0;
const DEFAULT_N_DRAWS: usize = 100;

/// Parse flat key=value text. Blank lines and `#` comments are
/// ignored; keys may not repeat.
pub fn parse_kv(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("line {}: expected key=value, got {raw:?}", idx + 1));
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if key.is_empty() || value.is_empty() {
            return Err(format!("line {}: empty key or value", idx + 1));
        }
        if pairs.iter().any(|(k, _)| *k == key) {
            return Err(format!("line {}: duplicate key {key:?}", idx + 1));
        }
        pairs.push((key, value));
    }
    Ok(pairs)
}

fn parse_typed<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, Failure> {
    value
        .parse::<T>()
        .map_err(|_| Failure::invalid(format!("config: cannot parse {key} = {value:?}")))
}

/// Merge the config file (if any) with flag overrides and produce the
/// resolved run options. Unknown file keys and out-of-range grid
/// settings are invalid input.
pub fn resolve(args: &CommonArgs) -> Result<RunConfig, Failure> {
    let mut param_map: BTreeMap<String, f64> = BTreeMap::new();
    let mut t_max = DEFAULT_T_MAX;
    let mut n_points = DEFAULT_N_POINTS;
    let mut tol = DEFAULT_TOL;
    let mut seed = DEFAULT_SEED;
    let mut n_draws = DEFAULT_N_DRAWS;
    let mut out = PathBuf::from(".");

    if let Some(path) = &args.config {
        let text = fs::read_to_string(path).map_err(|e| {
            Failure::invalid(format!("config {}: {e}", path.display()))
        })?;
        let pairs = parse_kv(&text)
            .map_err(|e| Failure::invalid(format!("config {}: {e}", path.display())))?;
        for (key, value) in pairs {
            if PARAM_KEYS.contains(&key.as_str()) {
                param_map.insert(key.clone(), parse_typed::<f64>(&key, &value)?);
                continue;
            }
            match key.as_str() {
                "t_max" => t_max = parse_typed(&key, &value)?,
                "n_points" => n_points = parse_typed(&key, &value)?,
                "tol" => tol = parse_typed(&key, &value)?,
                "seed" => seed = parse_typed(&key, &value)?,
                "n_draws" => n_draws = parse_typed(&key, &value)?,
                "out" => out = PathBuf::from(value),
                _ => {
                    return Err(Failure::invalid(format!(
                        "config {}: unknown key {key:?}",
                        path.display()
                    )))
                }
            }
        }
    }

    let flag_params = [
        ("beta", args.beta),
        ("gamma", args.gamma),
        ("delta", args.delta),
        ("pi", args.pi),
        ("rho", args.rho),
        ("sigma", args.sigma),
        ("k0", args.k0),
        ("h0", args.h0),
    ];
    for (key, slot) in flag_params {
        if let Some(v) = slot {
            param_map.insert(key.to_string(), v);
        }
    }
    if let Some(v) = args.t_max {
        t_max = v;
    }
    if let Some(v) = args.n_points {
        n_points = v;
    }
    if let Some(v) = args.tol {
        tol = v;
    }
    if let Some(v) = args.seed {
        seed = v;
    }
    if let Some(v) = args.n_draws {
        n_draws = v;
    }
    if let Some(v) = &args.out {
        out = v.clone();
    }

    let params: ModelParams64 = validate_params(&param_map)?;
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Failure::invalid(format!("t_max must be positive, got {t_max}")));
    }
    if n_points < 2 {
        return Err(Failure::invalid(format!("n_points must be at least 2, got {n_points}")));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Failure::invalid(format!("tol must be positive, got {tol}")));
    }

    Ok(RunConfig {
        params,
        t_max,
        n_points,
        tol,
        seed,
        n_draws,
        out,
    })
}

/// One value, full f64 round-trip precision.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write a calibration snapshot next to an echo of the parameters it
/// was solved under.
pub fn write_calibration_file(
    path: &Path,
    p: &ModelParams64,
    cal: &Calibration64,
) -> std::io::Result<()> {
    let mut text = String::from("# calibration snapshot\n");
    text.push_str(&format!("u0 = {}\n", format_value(cal.u0)));
    text.push_str(&format!("c0 = {}\n", format_value(cal.c0)));
    text.push_str(&format!("z0 = {}\n", format_value(cal.z0)));
    text.push_str(&format!("A_star = {}\n", format_value(cal.a_star)));
    text.push_str(&format!("B_star = {}\n", format_value(cal.b_star)));
    for (key, value) in p.key_values() {
        text.push_str(&format!("{key} = {}\n", format_value(value)));
    }
    fs::write(path, text)
}

/// Load a calibration snapshot and check its parameter echo against
/// the parameters of the current run. Values written by
/// `write_calibration_file` round-trip exactly, so the check is
/// bitwise.
pub fn load_calibration_file(
    path: &Path,
    expect: &ModelParams64,
) -> Result<Calibration64, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("calibration {}: {e}", path.display())))?;
    let pairs = parse_kv(&text)
        .map_err(|e| Failure::invalid(format!("calibration {}: {e}", path.display())))?;
    let mut map: BTreeMap<String, f64> = BTreeMap::new();
    for (key, value) in pairs {
        map.insert(key.clone(), parse_typed::<f64>(&key, &value)?);
    }
    let mut take = |key: &str| -> Result<f64, Failure> {
        map.remove(key).ok_or_else(|| {
            Failure::invalid(format!("calibration {}: missing key {key:?}", path.display()))
        })
    };
    let cal = Calibration64 {
        u0: take("u0")?,
        c0: take("c0")?,
        z0: take("z0")?,
        a_star: take("A_star")?,
        b_star: take("B_star")?,
        // a stored snapshot is only valid on the root, where the
        // residual is imposed to vanish
        g_residual: 0.0,
    };
    for (key, value) in expect.key_values() {
        let got = take(key)?;
        if got != value {
            return Err(Failure::invalid(format!(
                "calibration {}: parameter {key} = {got:e} does not match the run's {value:e}",
                path.display()
            )));
        }
    }
    if let Some((key, _)) = map.iter().next() {
        return Err(Failure::invalid(format!(
            "calibration {}: unknown key {key:?}",
            path.display()
        )));
    }
    Ok(cal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bench_args() -> CommonArgs {
        CommonArgs {
            beta: Some(0.25),
            gamma: Some(1.05),
            delta: Some(0.05),
            pi: Some(0.01),
            rho: Some(0.04),
            sigma: Some(1.5),
            k0: Some(80.0),
            h0: Some(10.0),
            ..CommonArgs::default()
        }
    }

    #[test]
    fn kv_parsing_skips_comments_and_trims() {
        let pairs = parse_kv("# note\n  beta = 0.25 \n\nsigma=1.5\n").unwrap();
        assert_eq!(
            pairs,
            vec![
                ("beta".to_string(), "0.25".to_string()),
                ("sigma".to_string(), "1.5".to_string()),
            ]
        );
        assert!(parse_kv("beta 0.25").is_err());
        assert!(parse_kv("beta = 1\nbeta = 2").is_err());
    }

    #[test]
    fn flags_override_file_entries() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(
            &path,
            "beta = 0.25\ngamma = 1.05\ndelta = 0.05\npi = 0.01\nrho = 0.04\n\
             sigma = 9.0\nk0 = 80\nh0 = 10\nt_max = 10\n",
        )
        .unwrap();
        let args = CommonArgs {
            config: Some(path),
            sigma: Some(1.5),
            ..CommonArgs::default()
        };
        let cfg = resolve(&args).unwrap();
        assert_eq!(cfg.params.sigma, 1.5);
        assert_eq!(cfg.t_max, 10.0);
        assert_eq!(cfg.n_points, 501);
        assert_eq!(cfg.n_draws, 100);
    }

    #[test]
    fn unknown_config_key_is_invalid_input() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "betta = 0.25\n").unwrap();
        let args = CommonArgs {
            config: Some(path),
            ..CommonArgs::default()
        };
        let err = resolve(&args).unwrap_err();
        assert_eq!(err.code, 2);
        assert!(err.message.contains("betta"));
    }

    #[test]
    fn grid_bounds_are_validated_before_use() {
        let mut args = bench_args();
        args.n_points = Some(1);
        assert_eq!(resolve(&args).unwrap_err().code, 2);
        let mut args = bench_args();
        args.t_max = Some(0.0);
        assert_eq!(resolve(&args).unwrap_err().code, 2);
        let mut args = bench_args();
        args.tol = Some(-1.0);
        assert_eq!(resolve(&args).unwrap_err().code, 2);
    }

    #[test]
    fn calibration_file_round_trips_bitwise() {
        let cfg = resolve(&bench_args()).unwrap();
        let cal = Calibration64 {
            u0: 0.742084247913074,
            c0: 15.410172431696754,
            z0: 0.09276053098913425,
            a_star: 0.7157343220824788,
            b_star: 4.18790553005932,
            g_residual: 0.0,
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("calibration.txt");
        write_calibration_file(&path, &cfg.params, &cal).unwrap();
        let loaded = load_calibration_file(&path, &cfg.params).unwrap();
        assert_eq!(loaded.u0, cal.u0);
        assert_eq!(loaded.c0, cal.c0);
        assert_eq!(loaded.z0, cal.z0);
        assert_eq!(loaded.a_star, cal.a_star);
        assert_eq!(loaded.b_star, cal.b_star);
        assert_eq!(loaded.g_residual, 0.0);

        let mut other = resolve(&bench_args()).unwrap();
        other.params.sigma = 2.0;
        let err = load_calibration_file(&path, &other.params).unwrap_err();
        assert_eq!(err.code, 2);
        assert!(err.message.contains("sigma"));
    }
}
