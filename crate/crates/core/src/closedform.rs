//! The closed-form solution paths and the integrals they are built
//! from.
//!
//! Everything is evaluated through the tail integral
//! `J(t) = integral_0^inf z(t+s)^p e^{-r s} ds` rather than through
//! differences like `A* - A(t)`: the difference form loses all
//! significant digits once `e^{-xi t}` reaches round-off scale
//! (t around 170 at benchmark rates), while the tail form is a purely
//! positive accumulation and stays accurate for t in the thousands.
//! The two forms are algebraically identical,
//! `A* - A(t) = e^{-xi t} J_A(t)`.

use crate::calibration::Calibration;
use crate::error::{Error, Result};
use crate::params::DerivedConstants;
use crate::quad::{self, QuadratureResult};
use crate::scalar::Real;

/// Absolute quadrature tolerance used inside pointwise path
/// evaluation. Two orders below every comparison tolerance in the
/// test suite.
pub const PATH_TOL: f64 = 1e-12;

/// Upper limit of the running integrals: a finite time or the full
/// improper integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Horizon<T> {
    Finite(T),
    Infinite,
}

fn w_star<T: Real>(dc: &DerivedConstants<T>) -> T {
    dc.z_star.powf(T::one() - dc.params.beta)
}

/// Denominator of the logistic transition in w = z^{1-beta}:
/// D(t) = (w* - w0) e^{-varphi t} + w0. Computed with the decaying
/// exponential only, so it never overflows and tends to w0.
fn w_decay<T: Real>(dc: &DerivedConstants<T>, w0: T, t: T) -> T {
    let ws = w_star(dc);
    (ws - w0) * (-dc.varphi * t).exp() + w0
}

/// Technology ratio z(t) from initial value z0: logistic in
/// w = z^{1-beta}, monotone toward z*. The boundary value and the
/// rest point are returned without the power round trip, so both are
/// bit-exact.
pub fn z_path<T: Real>(dc: &DerivedConstants<T>, z0: T, t: T) -> T {
    let one = T::one();
    let beta = dc.params.beta;
    let w0 = z0.powf(one - beta);
    let ws = w_star(dc);
    if t == T::zero() || w0 == ws {
        return z0;
    }
    let w = ws * w0 / w_decay(dc, w0, t);
    w.powf(one / (one - beta))
}

/// Elementary closed form of `integral_0^t z(s)^{1-beta} ds`,
/// cross-checked against quadrature in the tests.
pub fn z_pow_integral<T: Real>(dc: &DerivedConstants<T>, z0: T, t: T) -> T {
    let w0 = z0.powf(T::one() - dc.params.beta);
    let ws = w_star(dc);
    ws / dc.varphi * (dc.varphi * t + (w_decay(dc, w0, t) / ws).ln())
}

/// Largest value of z(s)^p along the path from z0; since z is
/// monotone, it is attained at an endpoint whichever sign p has.
fn power_envelope<T: Real>(dc: &DerivedConstants<T>, z0: T) -> T {
    let p = dc.tail_exponent();
    z0.powf(p).max(dc.z_star.powf(p))
}

/// Running integral A(t) = integral_0^t z(s)^p e^{-xi s} ds with
/// p = (sigma-beta)/sigma; `Horizon::Infinite` gives A*.
pub fn integral_a<T: Real>(
    dc: &DerivedConstants<T>,
    z0: T,
    horizon: Horizon<T>,
    tol: T,
) -> Result<QuadratureResult<T>> {
    let p = dc.tail_exponent();
    let xi = dc.xi;
    let f = |s: T| z_path(dc, z0, s).powf(p) * (-xi * s).exp();
    match horizon {
        Horizon::Finite(t) => quad::integrate(f, T::zero(), t, tol),
        Horizon::Infinite => quad::integrate_tail(f, xi, power_envelope(dc, z0), tol),
    }
}

/// Running integral B(t) = integral_0^t z(s)^p e^{-(xi-varphi) s} ds;
/// the improper limit B* exists only when xi > varphi.
pub fn integral_b<T: Real>(
    dc: &DerivedConstants<T>,
    z0: T,
    horizon: Horizon<T>,
    tol: T,
) -> Result<QuadratureResult<T>> {
    let p = dc.tail_exponent();
    let rate = dc.xi - dc.varphi;
    let f = |s: T| z_path(dc, z0, s).powf(p) * (-rate * s).exp();
    match horizon {
        Horizon::Finite(t) => quad::integrate(f, T::zero(), t, tol),
        Horizon::Infinite => {
            if !(rate > T::zero()) {
                return Err(Error::DivergentB {
                    xi: dc.xi.as_f64(),
                    varphi: dc.varphi.as_f64(),
                });
            }
            quad::integrate_tail(f, rate, power_envelope(dc, z0), tol)
        }
    }
}

/// Shifted tail J_A(t) = integral_0^inf z(t+s)^p e^{-xi s} ds
/// = e^{xi t} (A* - A(t)), evaluated without the difference.
pub fn tail_a<T: Real>(
    dc: &DerivedConstants<T>,
    z0: T,
    t: T,
    tol: T,
) -> Result<QuadratureResult<T>> {
    let p = dc.tail_exponent();
    let xi = dc.xi;
    let zt = z_path(dc, z0, t);
    let f = |s: T| z_path(dc, zt, s).powf(p) * (-xi * s).exp();
    quad::integrate_tail(f, xi, power_envelope(dc, zt), tol)
}

/// Shifted tail J_B(t) = integral_0^inf z(t+s)^p e^{-(xi-varphi) s} ds
/// = e^{(xi-varphi) t} (B* - B(t)); requires xi > varphi.
pub fn tail_b<T: Real>(
    dc: &DerivedConstants<T>,
    z0: T,
    t: T,
    tol: T,
) -> Result<QuadratureResult<T>> {
    let p = dc.tail_exponent();
    let rate = dc.xi - dc.varphi;
    if !(rate > T::zero()) {
        return Err(Error::DivergentB {
            xi: dc.xi.as_f64(),
            varphi: dc.varphi.as_f64(),
        });
    }
    let zt = z_path(dc, z0, t);
    let f = |s: T| z_path(dc, zt, s).powf(p) * (-rate * s).exp();
    quad::integrate_tail(f, rate, power_envelope(dc, zt), tol)
}

/// Consumption c(t) = (h0 u0 / A*) z(t)^{-beta/sigma} e^{g t}.
pub fn consumption_path<T: Real>(dc: &DerivedConstants<T>, cal: &Calibration<T>, t: T) -> T {
    let p = dc.params;
    let z = z_path(dc, cal.z0, t);
    p.h0 * cal.u0 / cal.a_star * z.powf(-p.beta / p.sigma) * (dc.g_bgp * t).exp()
}

/// Physical capital k(t) = (h0 u0 / A*) J_A(t) z(t)^{-1} e^{g t}.
pub fn capital_path<T: Real>(dc: &DerivedConstants<T>, cal: &Calibration<T>, t: T) -> Result<T> {
    let p = dc.params;
    let ja = tail_a(dc, cal.z0, t, T::of(PATH_TOL))?.value;
    let z = z_path(dc, cal.z0, t);
    Ok(p.h0 * cal.u0 / cal.a_star * ja / z * (dc.g_bgp * t).exp())
}

/// Consumption-capital ratio c(t)/k(t) = z(t)^p / J_A(t); tends to xi.
pub fn ck_ratio<T: Real>(dc: &DerivedConstants<T>, cal: &Calibration<T>, t: T) -> Result<T> {
    let ja = tail_a(dc, cal.z0, t, T::of(PATH_TOL))?.value;
    let z = z_path(dc, cal.z0, t);
    Ok(z.powf(dc.tail_exponent()) / ja)
}

fn u_from_tails<T: Real>(dc: &DerivedConstants<T>, cal: &Calibration<T>, t: T, ja: T, jb: T) -> Result<T> {
    let delta = dc.params.delta;
    let grow = ((dc.xi - dc.varphi) * t).exp();
    let denom = cal.g_residual * grow + delta * cal.u0 * (jb - ja);
    let u = dc.varphi * cal.u0 * ja / denom;
    if u > T::zero() && u < T::one() {
        Ok(u)
    } else {
        Err(Error::DenominatorVanished { t: t.as_f64() })
    }
}

/// Goods-sector labor share u(t); stays in (0,1) exactly when u0 is
/// the calibrated root.
pub fn u_path<T: Real>(dc: &DerivedConstants<T>, cal: &Calibration<T>, t: T) -> Result<T> {
    let tol = T::of(PATH_TOL);
    let ja = tail_a(dc, cal.z0, t, tol)?.value;
    let jb = tail_b(dc, cal.z0, t, tol)?.value;
    u_from_tails(dc, cal, t, ja, jb)
}

/// Human capital h(t) = z(t) k(t) / u(t).
pub fn h_path<T: Real>(dc: &DerivedConstants<T>, cal: &Calibration<T>, t: T) -> Result<T> {
    let z = z_path(dc, cal.z0, t);
    let k = capital_path(dc, cal, t)?;
    let u = u_path(dc, cal, t)?;
    Ok(z * k / u)
}

/// Shared denominator of the alternate u and h forms, expressed in
/// the stored coefficients so a corrupted constant propagates here:
/// J_A(t) (mu_c - chi_c z^{beta-1}) + omega_c z^{beta - beta/sigma}.
fn alt_denominator<T: Real>(dc: &DerivedConstants<T>, z: T, ja: T) -> T {
    let beta = dc.params.beta;
    let m = beta - beta / dc.params.sigma;
    ja * (dc.mu_c - dc.chi_c * z.powf(beta - T::one())) + dc.omega_c * z.powf(m)
}

fn u_alt_from_tails<T: Real>(dc: &DerivedConstants<T>, cal: &Calibration<T>, t: T, ja: T) -> T {
    let z = z_path(dc, cal.z0, t);
    dc.varphi / dc.params.delta * ja / alt_denominator(dc, z, ja)
}

fn h_alt_from_tails<T: Real>(dc: &DerivedConstants<T>, cal: &Calibration<T>, t: T, ja: T) -> T {
    let p = dc.params;
    let z = z_path(dc, cal.z0, t);
    let lead = p.delta * cal.c0 * cal.z0.powf(p.beta / p.sigma) / dc.varphi;
    lead * alt_denominator(dc, z, ja) * (dc.g_bgp * t).exp()
}

/// Alternate labor-share formula; agrees with [`u_path`] for every
/// admissible parameter set.
pub fn u_path_alt<T: Real>(dc: &DerivedConstants<T>, cal: &Calibration<T>, t: T) -> Result<T> {
    let ja = tail_a(dc, cal.z0, t, T::of(PATH_TOL))?.value;
    Ok(u_alt_from_tails(dc, cal, t, ja))
}

/// Alternate human-capital formula; agrees with [`h_path`].
pub fn h_path_alt<T: Real>(dc: &DerivedConstants<T>, cal: &Calibration<T>, t: T) -> Result<T> {
    let ja = tail_a(dc, cal.z0, t, T::of(PATH_TOL))?.value;
    Ok(h_alt_from_tails(dc, cal, t, ja))
}

/// Reconstruct B(t) from A-side quantities alone:
/// (varphi + delta u0)/(delta u0) A* - e^{-(xi-varphi)t} *
/// (J_A(t) [1 + mu_c - chi_c z^{beta-1}] + omega_c z^{beta-beta/sigma}).
/// Must agree with the quadrature B(t) for the calibrated u0.
pub fn b_from_a_identity<T: Real>(dc: &DerivedConstants<T>, cal: &Calibration<T>, t: T) -> Result<T> {
    let p = dc.params;
    let beta = p.beta;
    let z = z_path(dc, cal.z0, t);
    let ja = tail_a(dc, cal.z0, t, T::of(PATH_TOL))?.value;
    let b_star_implied = (dc.varphi + p.delta * cal.u0) * cal.a_star / (p.delta * cal.u0);
    let m = beta - beta / p.sigma;
    let jb_from_a = ja * (T::one() + dc.mu_c - dc.chi_c * z.powf(beta - T::one()))
        + dc.omega_c * z.powf(m);
    Ok(b_star_implied - (-(dc.xi - dc.varphi) * t).exp() * jb_from_a)
}

/// Normalized costates (lambda(t)/lambda0, mu(t)/mu0). Both equal
/// e^{(rho-delta)t} times, for lambda, the closed-form factor
/// (D(t)/w*)^{-beta/(1-beta)} coming from the integral of z^{1-beta}.
pub fn costate_paths<T: Real>(dc: &DerivedConstants<T>, z0: T, t: T) -> (T, T) {
    let p = dc.params;
    let one = T::one();
    let growth = ((p.rho - p.delta) * t).exp();
    let w0 = z0.powf(one - p.beta);
    let ws = w_star(dc);
    let lambda = growth * (w_decay(dc, w0, t) / ws).powf(-p.beta / (one - p.beta));
    (lambda, growth)
}

/// Uniform evaluation grid: `n_points` times from 0 to `t_max`
/// inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid<T> {
    pub t_max: T,
    pub n_points: usize,
}

impl<T: Real> Grid<T> {
    pub fn new(t_max: T, n_points: usize) -> Self {
        assert!(n_points >= 2, "grid needs at least the two endpoints");
        assert!(t_max > T::zero(), "grid horizon must be positive");
        Grid { t_max, n_points }
    }

    /// The grid times; first is exactly 0, last exactly `t_max`.
    pub fn times(&self) -> Vec<T> {
        let n = self.n_points;
        let den = T::of((n - 1) as f64);
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    self.t_max
                } else {
                    self.t_max * T::of(i as f64) / den
                }
            })
            .collect()
    }
}

/// A trajectory table: one row per grid time, one vector per column.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub times: Vec<T>,
    pub z: Vec<T>,
    pub k: Vec<T>,
    pub h: Vec<T>,
    pub c: Vec<T>,
    pub u: Vec<T>,
    pub c_over_k: Vec<T>,
    pub u_alt: Vec<T>,
    pub h_alt: Vec<T>,
    pub lambda_rel: Vec<T>,
    pub mu_rel: Vec<T>,
}

impl<T: Real> Trajectory<T> {
    /// Column accessor by CSV name.
    pub fn column(&self, name: &str) -> Option<&[T]> {
        Some(match name {
            "z" => &self.z,
            "k" => &self.k,
            "h" => &self.h,
            "c" => &self.c,
            "u" => &self.u,
            "c_over_k" => &self.c_over_k,
            "u_alt" => &self.u_alt,
            "h_alt" => &self.h_alt,
            "lambda_rel" => &self.lambda_rel,
            "mu_rel" => &self.mu_rel,
            _ => return None,
        })
    }

    /// Names in emission order.
    pub const COLUMN_NAMES: [&'static str; 10] = [
        "z",
        "k",
        "h",
        "c",
        "u",
        "c_over_k",
        "u_alt",
        "h_alt",
        "lambda_rel",
        "mu_rel",
    ];
}

/// Evaluate every closed-form column on a grid.
///
/// The tail integrals are built once per grid by backward recurrence
/// J(t_i) = q_i + e^{-r dt} J(t_{i+1}) with
/// q_i = integral_0^dt z(t_i+s)^p e^{-r s} ds, so an n-point grid
/// costs one improper integral plus n-1 short finite ones, and every
/// term is positive (no cancellation). `tol` is the absolute
/// quadrature budget for the whole column.
pub fn trajectory<T: Real>(
    dc: &DerivedConstants<T>,
    cal: &Calibration<T>,
    grid: &Grid<T>,
    tol: T,
) -> Result<Trajectory<T>> {
    let times = grid.times();
    let n = times.len();
    let p = dc.params;
    let pe = dc.tail_exponent();
    let rate_b = dc.xi - dc.varphi;
    if !(rate_b > T::zero()) {
        return Err(Error::DivergentB {
            xi: dc.xi.as_f64(),
            varphi: dc.varphi.as_f64(),
        });
    }

    let half = T::of(0.5);
    let inc_tol = (tol * half / T::of(n as f64)).max(T::of(1e-16));
    let tail_tol = tol * half;

    let z: Vec<T> = times.iter().map(|&t| z_path(dc, cal.z0, t)).collect();

    let mut ja = vec![T::zero(); n];
    let mut jb = vec![T::zero(); n];
    ja[n - 1] = tail_a(dc, cal.z0, times[n - 1], tail_tol)?.value;
    jb[n - 1] = tail_b(dc, cal.z0, times[n - 1], tail_tol)?.value;
    for i in (0..n - 1).rev() {
        let dt = times[i + 1] - times[i];
        let zi = z[i];
        let qa = quad::integrate(
            |s: T| z_path(dc, zi, s).powf(pe) * (-dc.xi * s).exp(),
            T::zero(),
            dt,
            inc_tol,
        )?;
        let qb = quad::integrate(
            |s: T| z_path(dc, zi, s).powf(pe) * (-rate_b * s).exp(),
            T::zero(),
            dt,
            inc_tol,
        )?;
        ja[i] = qa.value + (-dc.xi * dt).exp() * ja[i + 1];
        jb[i] = qb.value + (-rate_b * dt).exp() * jb[i + 1];
    }

    let scale = p.h0 * cal.u0 / cal.a_star;
    let mut out = Trajectory {
        times: times.clone(),
        z: z.clone(),
        k: Vec::with_capacity(n),
        h: Vec::with_capacity(n),
        c: Vec::with_capacity(n),
        u: Vec::with_capacity(n),
        c_over_k: Vec::with_capacity(n),
        u_alt: Vec::with_capacity(n),
        h_alt: Vec::with_capacity(n),
        lambda_rel: Vec::with_capacity(n),
        mu_rel: Vec::with_capacity(n),
    };
    for i in 0..n {
        let t = times[i];
        let zi = z[i];
        let growth = (dc.g_bgp * t).exp();
        let k = scale * ja[i] / zi * growth;
        let c = scale * zi.powf(-p.beta / p.sigma) * growth;
        let ck = zi.powf(pe) / ja[i];
        let u = u_from_tails(dc, cal, t, ja[i], jb[i])?;
        let h = zi * k / u;
        let u_alt = u_alt_from_tails(dc, cal, t, ja[i]);
        let h_alt = h_alt_from_tails(dc, cal, t, ja[i]);
        let (lambda, mu) = costate_paths(dc, cal.z0, t);
        out.k.push(k);
        out.h.push(h);
        out.c.push(c);
        out.u.push(u);
        out.c_over_k.push(ck);
        out.u_alt.push(u_alt);
        out.h_alt.push(h_alt);
        out.lambda_rel.push(lambda);
        out.mu_rel.push(mu);
    }
    check_rows(&out)?;
    Ok(out)
}

/// Row invariants every emitted trajectory must satisfy: positivity,
/// interior labor shares, and the defining ratio identities.
fn check_rows<T: Real>(tr: &Trajectory<T>) -> Result<()> {
    let viol = |name, t: T, measured: T, threshold: f64| {
        Err(Error::InvariantViolated {
            name,
            t: t.as_f64(),
            measured: measured.as_f64(),
            threshold,
        })
    };
    for i in 0..tr.times.len() {
        let t = tr.times[i];
        for name in Trajectory::<T>::COLUMN_NAMES {
            let v = tr.column(name).unwrap()[i];
            if !(v > T::zero()) || !v.is_finite() {
                return viol("positive_columns", t, v, 0.0);
            }
        }
        for u in [tr.u[i], tr.u_alt[i]] {
            if !(u > T::zero() && u < T::one()) {
                return viol("u_in_unit_interval", t, u, 1.0);
            }
        }
        let z_rel = (tr.z[i] - tr.h[i] * tr.u[i] / tr.k[i]).abs() / tr.z[i];
        if z_rel.as_f64() > 1e-8 {
            return viol("z_equals_hu_over_k", t, z_rel, 1e-8);
        }
        let c_rel = (tr.c[i] - tr.c_over_k[i] * tr.k[i]).abs() / tr.c[i];
        if c_rel.as_f64() > 1e-12 {
            return viol("c_equals_ratio_times_k", t, c_rel, 1e-12);
        }
    }
    Ok(())
}
