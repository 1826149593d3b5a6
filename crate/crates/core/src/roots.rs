//! Bracketed scalar root finding: a uniform sign-change scan followed
//! by Brent iteration driven to machine bracket width. The objective
//! is fallible because the calibration residual is itself computed by
//! quadrature.

use crate::error::Result;
use crate::scalar::Real;

/// Scan record: every sample plus every sign-change interval found.
#[derive(Debug, Clone)]
pub struct ScanOutcome<T> {
    pub samples: Vec<(T, T)>,
    pub brackets: Vec<(T, T)>,
}

/// Evaluate `f` on `n` uniform points of `[lo, hi]` and record sign
/// changes. An exact zero is returned as a degenerate bracket.
pub fn scan<T: Real, F: FnMut(T) -> Result<T>>(
    mut f: F,
    lo: T,
    hi: T,
    n: usize,
) -> Result<ScanOutcome<T>> {
    assert!(n >= 2 && hi > lo);
    let step = (hi - lo) / T::of((n - 1) as f64);
    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        let x = if i == n - 1 { hi } else { lo + step * T::of(i as f64) };
        samples.push((x, f(x)?));
    }
    let mut brackets = Vec::new();
    for w in samples.windows(2) {
        let (x0, f0) = w[0];
        let (x1, f1) = w[1];
        if f0 == T::zero() {
            brackets.push((x0, x0));
        } else if f0 * f1 < T::zero() {
            brackets.push((x0, x1));
        }
    }
    if let Some(&(x, fx)) = samples.last() {
        if fx == T::zero() {
            brackets.push((x, x));
        }
    }
    Ok(ScanOutcome { samples, brackets })
}

/// Converged root plus the final bracket that still straddles it, so
/// callers can pick the endpoint whose residual sign they prefer.
#[derive(Debug, Clone, Copy)]
pub struct RootResult<T> {
    pub root: T,
    pub f_root: T,
    pub other: T,
    pub f_other: T,
}

/// Brent's method on a bracket `[x1, x2]` with known values `f1, f2`
/// of opposite sign. Runs until the bracket is below
/// `2*eps*|root| + xtol`; the bisection fallback guarantees that
/// happens long before the iteration cap.
pub fn brent<T: Real, F: FnMut(T) -> Result<T>>(
    mut f: F,
    x1: T,
    x2: T,
    f1: T,
    f2: T,
    xtol: T,
) -> Result<RootResult<T>> {
    assert!(
        f1 * f2 <= T::zero(),
        "brent requires a sign-changing bracket"
    );
    let two = T::of(2.0);
    let half = T::of(0.5);
    let eps = T::epsilon();

    let (mut a, mut b) = (x1, x2);
    let (mut fa, mut fb) = (f1, f2);
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..200 {
        if fb * fc > T::zero() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * eps * b.abs() + half * xtol;
        let xm = half * (c - b);
        if xm.abs() <= tol1 || fb == T::zero() {
            return Ok(RootResult {
                root: b,
                f_root: fb,
                other: c,
                f_other: fc,
            });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic interpolation, falling back to secant
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (two * xm * s, T::one() - s)
            } else {
                let q0 = fa / fc;
                let r = fb / fc;
                (
                    s * (two * xm * q0 * (q0 - r) - (b - a) * (r - T::one())),
                    (q0 - T::one()) * (r - T::one()) * (s - T::one()),
                )
            };
            if p > T::zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = T::of(3.0) * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b = b + if d.abs() > tol1 {
            d
        } else if xm > T::zero() {
            tol1
        } else {
            -tol1
        };
        fb = f(b)?;
    }
    Ok(RootResult {
        root: b,
        f_root: fb,
        other: c,
        f_other: fc,
    })
}
