//! Independent validation integrator: the full dynamical system is
//! integrated numerically and compared column by column against the
//! closed forms. Nothing here reuses the closed-form machinery except
//! the derived constants.
//!
//! k, h, c and the normalized costates are integrated in logs (the
//! dynamics are exponential and the horizons long); the labor share u
//! is integrated raw and guarded to stay in (0,1).

use crate::closedform::Trajectory;
use crate::error::{Error, Result};
use crate::params::DerivedConstants;
use crate::scalar::Real;

/// Instantaneous state of the economy plus normalized costates
/// (lambda_rel = mu_rel = 1 at t = 0 by convention).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeState<T> {
    pub k: T,
    pub h: T,
    pub c: T,
    pub u: T,
    pub lambda_rel: T,
    pub mu_rel: T,
}

impl<T: Real> OdeState<T> {
    /// Initial state from a calibration, costates normalized to 1.
    pub fn initial(dc: &DerivedConstants<T>, cal: &crate::calibration::Calibration<T>) -> Self {
        OdeState {
            k: dc.params.k0,
            h: dc.params.h0,
            c: cal.c0,
            u: cal.u0,
            lambda_rel: T::one(),
            mu_rel: T::one(),
        }
    }
}

/// Level-space right-hand side of the six laws of motion.
pub fn rhs<T: Real>(dc: &DerivedConstants<T>, s: &OdeState<T>) -> OdeState<T> {
    let p = dc.params;
    let one = T::one();
    let z = s.h * s.u / s.k;
    let w = z.powf(one - p.beta);
    let ck = s.c / s.k;
    OdeState {
        k: s.k * (p.gamma * w - p.pi - ck),
        h: s.h * p.delta * (one - s.u),
        c: s.c * ((p.gamma * p.beta * w - (p.rho + p.pi)) / p.sigma),
        u: s.u * (dc.varphi - ck + p.delta * s.u),
        lambda_rel: s.lambda_rel * (p.rho + p.pi - p.beta * p.gamma * w),
        mu_rel: s.mu_rel * (p.rho - p.delta),
    }
}

/// Log-space state vector [ln k, ln h, ln c, u, ln lambda, ln mu].
type Y<T> = [T; 6];

fn deriv<T: Real>(dc: &DerivedConstants<T>, y: &Y<T>) -> Y<T> {
    let p = dc.params;
    let one = T::one();
    let u = y[3];
    let z = u * (y[1] - y[0]).exp();
    let w = z.powf(one - p.beta);
    let ck = (y[2] - y[0]).exp();
    [
        p.gamma * w - p.pi - ck,
        p.delta * (one - u),
        (p.gamma * p.beta * w - (p.rho + p.pi)) / p.sigma,
        u * (dc.varphi - ck + p.delta * u),
        p.rho + p.pi - p.beta * p.gamma * w,
        p.rho - p.delta,
    ]
}

fn pack<T: Real>(s: &OdeState<T>) -> Y<T> {
    [s.k.ln(), s.h.ln(), s.c.ln(), s.u, s.lambda_rel.ln(), s.mu_rel.ln()]
}

/// Step-size control for the embedded pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl<T> {
    /// Per-step relative tolerance.
    pub rtol: T,
    /// Absolute floor of the error scale.
    pub atol: T,
}

impl<T: Real> StepControl<T> {
    pub fn new(rtol: T) -> Self {
        StepControl {
            rtol,
            atol: rtol * T::of(1e-2),
        }
    }
}

impl<T: Real> Default for StepControl<T> {
    fn default() -> Self {
        StepControl::new(T::of(1e-10))
    }
}

// Dormand-Prince 5(4) tableau. The stage abscissae are omitted: the
// system is autonomous, so stages never evaluate the clock.
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// Quartic dense-output weights: y(t+th*h) = y + h * K^T (P [th, th^2, th^3, th^4]).
const P: [[f64; 4]; 7] = [
    [
        1.0,
        -8048581381.0 / 2820520608.0,
        8663915743.0 / 2820520608.0,
        -12715105075.0 / 11282082432.0,
    ],
    [0.0, 0.0, 0.0, 0.0],
    [
        0.0,
        131558114200.0 / 32700410799.0,
        -68118460800.0 / 10900136933.0,
        87487479700.0 / 32700410799.0,
    ],
    [
        0.0,
        -1754552775.0 / 470086768.0,
        14199869525.0 / 1410260304.0,
        -10690763975.0 / 1880347072.0,
    ],
    [
        0.0,
        127303824393.0 / 49829197408.0,
        -318862633887.0 / 49829197408.0,
        701980252875.0 / 199316789632.0,
    ],
    [
        0.0,
        -282668133.0 / 205662961.0,
        2019193451.0 / 616988883.0,
        -1453857185.0 / 822651844.0,
    ],
    [
        0.0,
        40617522.0 / 29380423.0,
        -110615467.0 / 29380423.0,
        69997945.0 / 29380423.0,
    ],
];

fn stages<T: Real>(dc: &DerivedConstants<T>, y: &Y<T>, h: T, k0: Y<T>) -> ([Y<T>; 7], Y<T>, Y<T>) {
    let mut k = [[T::zero(); 6]; 7];
    k[0] = k0;
    for s in 1..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            let a = T::of(A[s][j]);
            if A[s][j] != 0.0 {
                for i in 0..6 {
                    ys[i] = ys[i] + h * a * kj[i];
                }
            }
        }
        k[s] = deriv(dc, &ys);
    }
    let mut y_new = *y;
    let mut err = [T::zero(); 6];
    for (s, ks) in k.iter().enumerate() {
        let b = T::of(B5[s]);
        let e = T::of(E[s]);
        for i in 0..6 {
            if B5[s] != 0.0 {
                y_new[i] = y_new[i] + h * b * ks[i];
            }
            err[i] = err[i] + h * e * ks[i];
        }
    }
    (k, y_new, err)
}

fn error_norm<T: Real>(ctrl: &StepControl<T>, y: &Y<T>, y_new: &Y<T>, err: &Y<T>) -> T {
    let mut acc = T::zero();
    for i in 0..6 {
        let scale = ctrl.atol + ctrl.rtol * y[i].abs().max(y_new[i].abs());
        let r = err[i] / scale;
        acc = acc + r * r;
    }
    (acc / T::of(6.0)).sqrt()
}

/// Admissibility region for the integrated state: the labor share
/// stays interior and the consumption-capital ratio stays within a
/// generous band around its transition range. The ratio z obeys an
/// autonomous stable law and never strays, but an off-manifold start
/// exhausts capital in finite time, sending c/k to infinity while u
/// is still interior; the band turns that into a clean departure
/// signal instead of a step-size collapse.
struct Interior<T> {
    r_lo: T,
    r_hi: T,
}

impl<T: Real> Interior<T> {
    fn new(dc: &DerivedConstants<T>, init: &OdeState<T>) -> Self {
        let margin = T::of(64.0);
        let r0 = init.c / init.k;
        Interior {
            r_lo: r0.min(dc.xi) / margin,
            r_hi: r0.max(dc.xi) * margin,
        }
    }

    fn guard(&self, y: &Y<T>, t: T) -> Result<()> {
        let u = y[3];
        let r = (y[2] - y[0]).exp();
        if u > T::zero() && u < T::one() && r >= self.r_lo && r <= self.r_hi {
            Ok(())
        } else {
            Err(Error::Departed {
                t: t.as_f64(),
                u: u.as_f64(),
            })
        }
    }
}

/// Integrate the system from `init` and sample it on `grid` by the
/// stepper's own quartic interpolant. Errors if the state departs the
/// admissible interior (miscalibration) or the step size underflows.
pub fn integrate<T: Real>(
    dc: &DerivedConstants<T>,
    init: &OdeState<T>,
    grid: &crate::closedform::Grid<T>,
    ctrl: &StepControl<T>,
) -> Result<Trajectory<T>> {
    let times = grid.times();
    let t_end = *times.last().unwrap();
    let interior = Interior::new(dc, init);
    let mut y = pack(init);
    let mut t = T::zero();
    let mut k0 = deriv(dc, &y);
    let mut h = (t_end * T::of(1e-4)).min(T::of(0.1));

    let mut rows: Vec<(T, Y<T>)> = Vec::with_capacity(times.len());
    rows.push((T::zero(), y));
    let mut next = 1;

    let max_factor = T::of(5.0);
    let min_factor = T::of(0.2);
    let safety = T::of(0.9);
    let order_pow = T::of(-0.2);

    while next < times.len() {
        if h < T::epsilon() * T::of(16.0) * t.abs().max(T::one()) {
            return Err(Error::StepUnderflow {
                t: t.as_f64(),
                step: h.as_f64(),
            });
        }
        let h_step = h.min(t_end - t);
        let (k, y_new, err) = stages(dc, &y, h_step, k0);
        let norm = error_norm(ctrl, &y, &y_new, &err);
        if norm <= T::one() {
            interior.guard(&y_new, t + h_step)?;
            // fill every grid time inside (t, t+h] with the quartic
            // interpolant of this step
            while next < times.len() && times[next] <= t + h_step {
                let tg = times[next];
                let th = (tg - t) / h_step;
                let mut powers = [th, th, th, th];
                for j in 1..4 {
                    powers[j] = powers[j - 1] * th;
                }
                let mut yg = y;
                for (s, ks) in k.iter().enumerate() {
                    let mut w = T::zero();
                    for j in 0..4 {
                        if P[s][j] != 0.0 {
                            w = w + T::of(P[s][j]) * powers[j];
                        }
                    }
                    for i in 0..6 {
                        yg[i] = yg[i] + h_step * w * ks[i];
                    }
                }
                interior.guard(&yg, tg)?;
                rows.push((tg, yg));
                next += 1;
            }
            t = t + h_step;
            y = y_new;
            k0 = k[6]; // first-same-as-last
            let factor = if norm == T::zero() {
                max_factor
            } else {
                (safety * norm.powf(order_pow)).min(max_factor).max(min_factor)
            };
            h = h_step * factor;
        } else {
            h = h_step * (safety * norm.powf(order_pow)).max(T::of(0.1));
        }
    }

    let n = rows.len();
    let mut out = Trajectory {
        times: Vec::with_capacity(n),
        z: Vec::with_capacity(n),
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
    for (tg, yg) in rows {
        let (k, hh, c, u) = (yg[0].exp(), yg[1].exp(), yg[2].exp(), yg[3]);
        out.times.push(tg);
        out.z.push(hh * u / k);
        out.k.push(k);
        out.h.push(hh);
        out.c.push(c);
        out.u.push(u);
        out.c_over_k.push(c / k);
        // the integrator has one u and one h; mirror them so every
        // closed-form column has a comparison target
        out.u_alt.push(u);
        out.h_alt.push(hh);
        out.lambda_rel.push(yg[4].exp());
        out.mu_rel.push(yg[5].exp());
    }
    Ok(out)
}

/// Fixed-step variant (no adaptivity, no interpolation) returning the
/// final state; exists for order-of-convergence studies.
pub fn integrate_fixed_step<T: Real>(
    dc: &DerivedConstants<T>,
    init: &OdeState<T>,
    t_max: T,
    n_steps: usize,
) -> Result<OdeState<T>> {
    let h = t_max / T::of(n_steps as f64);
    let interior = Interior::new(dc, init);
    let mut y = pack(init);
    let mut t = T::zero();
    for _ in 0..n_steps {
        let k0 = deriv(dc, &y);
        let (_, y_new, _) = stages(dc, &y, h, k0);
        t = t + h;
        interior.guard(&y_new, t)?;
        y = y_new;
    }
    Ok(OdeState {
        k: y[0].exp(),
        h: y[1].exp(),
        c: y[2].exp(),
        u: y[3],
        lambda_rel: y[4].exp(),
        mu_rel: y[5].exp(),
    })
}

/// Worst deviation of one column between two tables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnDeviation<T> {
    pub name: &'static str,
    pub max_abs: T,
    pub t_max_abs: T,
    pub max_rel: T,
    pub t_max_rel: T,
}

/// Column-by-column deviation report between two trajectories.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport<T> {
    pub columns: Vec<ColumnDeviation<T>>,
}

impl<T: Real> ErrorReport<T> {
    pub fn column(&self, name: &str) -> Option<&ColumnDeviation<T>> {
        self.columns.iter().find(|c| c.name == name)
    }

    /// Largest relative deviation across the named columns.
    pub fn max_rel_over(&self, names: &[&str]) -> T {
        names
            .iter()
            .filter_map(|n| self.column(n))
            .map(|c| c.max_rel)
            .fold(T::zero(), |a, b| a.max(b))
    }
}

/// Compare two trajectories on identical grids.
pub fn compare<T: Real>(a: &Trajectory<T>, b: &Trajectory<T>) -> Result<ErrorReport<T>> {
    if a.times.len() != b.times.len() {
        return Err(Error::GridMismatch {
            left: a.times.len(),
            right: b.times.len(),
            index: a.times.len().min(b.times.len()),
        });
    }
    if let Some(i) = (0..a.times.len()).find(|&i| a.times[i] != b.times[i]) {
        return Err(Error::GridMismatch {
            left: a.times.len(),
            right: b.times.len(),
            index: i,
        });
    }
    let mut columns = Vec::new();
    for name in Trajectory::<T>::COLUMN_NAMES {
        let xa = a.column(name).unwrap();
        let xb = b.column(name).unwrap();
        let mut dev = ColumnDeviation {
            name,
            max_abs: T::zero(),
            t_max_abs: T::zero(),
            max_rel: T::zero(),
            t_max_rel: T::zero(),
        };
        for i in 0..xa.len() {
            let abs = (xa[i] - xb[i]).abs();
            let den = xa[i].abs().max(xb[i].abs()).max(T::min_positive_value());
            let rel = abs / den;
            if abs > dev.max_abs {
                dev.max_abs = abs;
                dev.t_max_abs = a.times[i];
            }
            if rel > dev.max_rel {
                dev.max_rel = rel;
                dev.t_max_rel = a.times[i];
            }
        }
        columns.push(dev);
    }
    Ok(ErrorReport { columns })
}
