//! Trajectory CSV: one header line, one row per grid point, every
//! value at full f64 round-trip precision, `\n` line endings.

use ulk_core::Trajectory64;

pub const HEADER: &str = "t,z,k,h,c,u,c_over_k,u_alt,h_alt,lambda_rel,mu_rel";

fn row_of(tr: &Trajectory64, i: usize) -> [f64; 11] {
    [
        tr.times[i],
        tr.z[i],
        tr.k[i],
        tr.h[i],
        tr.c[i],
        tr.u[i],
        tr.c_over_k[i],
        tr.u_alt[i],
        tr.h_alt[i],
        tr.lambda_rel[i],
        tr.mu_rel[i],
    ]
}

pub fn trajectory_csv(tr: &Trajectory64) -> String {
    let mut text = String::with_capacity(80 + tr.times.len() * 26 * 11);
    text.push_str(HEADER);
    text.push('\n');
    for i in 0..tr.times.len() {
        let cells: Vec<String> = row_of(tr, i).iter().map(|v| format!("{v:.16e}")).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    text
}

/// Inverse of `trajectory_csv`; the round trip is bitwise.
#[cfg(test)]
pub fn parse_trajectory_csv(text: &str) -> Result<Trajectory64, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == HEADER => {}
        other => return Err(format!("bad header: {other:?}")),
    }
    let mut tr = Trajectory64 {
        times: vec![],
        z: vec![],
        k: vec![],
        h: vec![],
        c: vec![],
        u: vec![],
        c_over_k: vec![],
        u_alt: vec![],
        h_alt: vec![],
        lambda_rel: vec![],
        mu_rel: vec![],
    };
    for (idx, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 11 {
            return Err(format!("row {}: expected 11 fields, got {}", idx + 1, cells.len()));
        }
        let mut vals = [0.0f64; 11];
        for (v, cell) in vals.iter_mut().zip(&cells) {
            *v = cell
                .parse::<f64>()
                .map_err(|_| format!("row {}: bad number {cell:?}", idx + 1))?;
        }
        let [t, z, k, h, c, u, ck, ua, ha, lr, mr] = vals;
        tr.times.push(t);
        tr.z.push(z);
        tr.k.push(k);
        tr.h.push(h);
        tr.c.push(c);
        tr.u.push(u);
        tr.c_over_k.push(ck);
        tr.u_alt.push(ua);
        tr.h_alt.push(ha);
        tr.lambda_rel.push(lr);
        tr.mu_rel.push(mr);
    }
    Ok(tr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ulk_core::closedform::{trajectory, Grid};
    use ulk_core::params::{derive_constants, ModelParams};
    use ulk_core::calibration::build_calibration;

    #[test]
    fn csv_round_trip_is_bitwise() {
        let p = ModelParams::new(0.25, 1.05, 0.05, 0.01, 0.04, 1.5, 80.0, 10.0).unwrap();
        let dc = derive_constants(p).unwrap();
        let cal = build_calibration(&dc).unwrap();
        let grid = Grid::new(5.0, 11);
        let tr = trajectory(&dc, &cal, &grid, 1e-12).unwrap();

        let text = trajectory_csv(&tr);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(HEADER));
        assert_eq!(text.lines().count(), 12);
        assert!(text.ends_with('\n'));

        let back = parse_trajectory_csv(&text).unwrap();
        assert_eq!(back.times, tr.times);
        assert_eq!(back.u, tr.u);
        assert_eq!(back.mu_rel, tr.mu_rel);
        assert_eq!(trajectory_csv(&back), text);
    }

    #[test]
    fn malformed_input_is_rejected() {
        assert!(parse_trajectory_csv("t,z\n").is_err());
        let short = format!("{HEADER}\n1.0,2.0\n");
        assert!(parse_trajectory_csv(&short).is_err());
        let bad = format!("{HEADER}\n{}\n", vec!["x"; 11].join(","));
        assert!(parse_trajectory_csv(&bad).is_err());
    }
}
