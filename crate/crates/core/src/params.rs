//! Structural parameters, their validation, and the composite
//! constants every formula downstream is written in.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, ParamViolation, Result};
use crate::scalar::Real;

/// The eight structural inputs: six rates/elasticities plus the two
/// initial stocks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams<T> {
    /// Physical-capital share in goods production, 0 < beta < 1.
    pub beta: T,
    /// Total factor productivity, gamma > 0.
    pub gamma: T,
    /// Human-capital sector productivity, delta > 0.
    pub delta: T,
    /// Depreciation rate, pi >= 0.
    pub pi: T,
    /// Discount rate, rho > 0.
    pub rho: T,
    /// Inverse intertemporal elasticity, sigma > 0, sigma != beta.
    pub sigma: T,
    /// Initial physical capital, k0 > 0.
    pub k0: T,
    /// Initial human capital, h0 > 0.
    pub h0: T,
}

/// Key names accepted by [`validate_params`], in canonical order.
pub const PARAM_KEYS: [&str; 8] = [
    "beta", "gamma", "delta", "pi", "rho", "sigma", "k0", "h0",
];

/// Two curvatures closer than this are treated as equal (degenerate).
pub const SIGMA_BETA_GAP: f64 = 1e-12;

impl<T: Real> ModelParams<T> {
    /// Construct with full bound checking; collects every violation.
    #[allow(clippy::too_many_arguments)]
    pub fn new(beta: T, gamma: T, delta: T, pi: T, rho: T, sigma: T, k0: T, h0: T) -> Result<Self> {
        let p = ModelParams {
            beta,
            gamma,
            delta,
            pi,
            rho,
            sigma,
            k0,
            h0,
        };
        let v = p.violations();
        if v.is_empty() {
            Ok(p)
        } else {
            Err(Error::InvalidParams(v))
        }
    }

    fn violations(&self) -> Vec<ParamViolation> {
        let mut v = Vec::new();
        let mut check = |name: &'static str, value: T, ok: bool, bound: &'static str| {
            if !value.is_finite() || !ok {
                v.push(ParamViolation::OutOfRange {
                    name,
                    value: value.as_f64(),
                    bound,
                });
            }
        };
        check(
            "beta",
            self.beta,
            self.beta > T::zero() && self.beta < T::one(),
            "0 < beta < 1",
        );
        check("gamma", self.gamma, self.gamma > T::zero(), "gamma > 0");
        check("delta", self.delta, self.delta > T::zero(), "delta > 0");
        check("pi", self.pi, self.pi >= T::zero(), "pi >= 0");
        check("rho", self.rho, self.rho > T::zero(), "rho > 0");
        check("sigma", self.sigma, self.sigma > T::zero(), "sigma > 0");
        check("k0", self.k0, self.k0 > T::zero(), "k0 > 0");
        check("h0", self.h0, self.h0 > T::zero(), "h0 > 0");
        if self.sigma.is_finite()
            && self.beta.is_finite()
            && (self.sigma - self.beta).abs().as_f64() <= SIGMA_BETA_GAP
        {
            v.push(ParamViolation::SigmaEqualsBeta {
                sigma: self.sigma.as_f64(),
                beta: self.beta.as_f64(),
            });
        }
        v
    }

    /// Widen to `f64` (identity for `f64` inputs).
    pub fn to_f64(&self) -> ModelParams<f64> {
        ModelParams {
            beta: self.beta.as_f64(),
            gamma: self.gamma.as_f64(),
            delta: self.delta.as_f64(),
            pi: self.pi.as_f64(),
            rho: self.rho.as_f64(),
            sigma: self.sigma.as_f64(),
            k0: self.k0.as_f64(),
            h0: self.h0.as_f64(),
        }
    }

    /// The parameters paired with their canonical keys, in
    /// [`PARAM_KEYS`] order.
    pub fn key_values(&self) -> [(&'static str, T); 8] {
        [
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("delta", self.delta),
            ("pi", self.pi),
            ("rho", self.rho),
            ("sigma", self.sigma),
            ("k0", self.k0),
            ("h0", self.h0),
        ]
    }
}

/// Build validated parameters from a flat key -> value map, rejecting
/// with every violated bound at once.
pub fn validate_params<T: Real>(raw: &BTreeMap<String, f64>) -> Result<ModelParams<T>> {
    let mut missing = Vec::new();
    let mut get = |key: &str| -> T {
        match raw.get(key) {
            Some(&x) => T::of(x),
            None => {
                missing.push(ParamViolation::MissingKey(key.to_string()));
                T::nan()
            }
        }
    };
    let p = ModelParams {
        beta: get("beta"),
        gamma: get("gamma"),
        delta: get("delta"),
        pi: get("pi"),
        rho: get("rho"),
        sigma: get("sigma"),
        k0: get("k0"),
        h0: get("h0"),
    };
    if !missing.is_empty() {
        // NaN placeholders would also trip range checks; report only
        // the genuinely missing keys plus violations of present ones.
        let mut v = missing;
        v.extend(
            p.violations()
                .into_iter()
                .filter(|x| !matches!(x, ParamViolation::OutOfRange { value, .. } if value.is_nan())),
        );
        return Err(Error::InvalidParams(v));
    }
    let v = p.violations();
    if v.is_empty() {
        Ok(p)
    } else {
        Err(Error::InvalidParams(v))
    }
}

/// Composite constants. All path formulas are written in these; they
/// are computed once and carried together with the parameters they
/// came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedConstants<T> {
    pub params: ModelParams<T>,
    /// Logistic transition rate of the technology ratio.
    pub varphi: T,
    /// Gross decay rate in the capital formula; phi - varphi = delta.
    pub phi: T,
    /// Discount rate of the consumption-capital tail integral; must be
    /// positive for the tail integrals to converge.
    pub xi: T,
    /// Common denominator of the alternate-form coefficients.
    pub eta: T,
    /// Alternate-form coefficient on the undistorted tail term.
    pub mu_c: T,
    /// Alternate-form coefficient on the ratio-shifted tail term.
    pub chi_c: T,
    /// Alternate-form coefficient on the pure power term.
    pub omega_c: T,
    /// Rest point of the technology-ratio dynamics.
    pub z_star: T,
    /// Common long-run growth rate of k, h, c.
    pub g_bgp: T,
}

/// Compute all composite constants, rejecting regimes where the tail
/// integrals diverge or the alternate forms divide by ~zero.
pub fn derive_constants<T: Real>(p: ModelParams<T>) -> Result<DerivedConstants<T>> {
    let one = T::one();
    let beta = p.beta;
    let varphi = (p.delta + p.pi) * (one - beta) / beta;
    let phi = (p.delta + p.pi * (one - beta)) / beta;
    let xi = phi - (p.delta - p.rho) / p.sigma;
    if !(xi > T::zero()) {
        return Err(Error::NonconvergentIntegralRegime { xi: xi.as_f64() });
    }
    let eta = p.gamma * (one - beta) * (p.rho - p.delta * (one - p.sigma));
    if eta.abs().as_f64() <= 1e-12 {
        return Err(Error::EtaSingular { eta: eta.as_f64() });
    }
    let mu_c = p.gamma * beta * varphi * (one - p.sigma) / eta;
    let chi_c = varphi * (p.rho + p.pi * (one - p.sigma)) / eta;
    let omega_c = p.sigma * varphi / eta;
    let z_star = ((p.delta + p.pi) / (beta * p.gamma)).powf(one / (one - beta));
    let g_bgp = (p.delta - p.rho) / p.sigma;
    Ok(DerivedConstants {
        params: p,
        varphi,
        phi,
        xi,
        eta,
        mu_c,
        chi_c,
        omega_c,
        z_star,
        g_bgp,
    })
}

impl<T: Real> DerivedConstants<T> {
    /// Exponent of the technology ratio inside the tail integrals.
    pub fn tail_exponent(&self) -> T {
        (self.params.sigma - self.params.beta) / self.params.sigma
    }

    /// Long-run interior share of productive time; in (0,1) whenever
    /// the calibrated path is interior.
    pub fn u_star(&self) -> T {
        (self.xi - self.varphi) / self.params.delta
    }
}

/// Feasibility status of the knife-edge elasticity value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SigmaRestricted<T> {
    Feasible(T),
    Infeasible,
}

/// Result of the knife-edge feasibility check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SigmaRestriction<T> {
    pub sigma_restricted: SigmaRestricted<T>,
    /// True iff the feasible value agrees with `p.sigma` to 1e-9.
    pub matches: bool,
}

/// The special elasticity value under which an extra closed-form
/// family would exist: sigma = (rho+pi)*beta / (pi*beta - (delta+pi)*(1-beta)),
/// feasible only when that denominator is positive.
pub fn sigma_restriction<T: Real>(p: &ModelParams<T>) -> SigmaRestriction<T> {
    let one = T::one();
    let den = p.pi * p.beta - (p.delta + p.pi) * (one - p.beta);
    if den > T::zero() {
        let s = (p.rho + p.pi) * p.beta / den;
        let matches = (s - p.sigma).abs().as_f64() <= 1e-9;
        SigmaRestriction {
            sigma_restricted: SigmaRestricted::Feasible(s),
            matches,
        }
    } else {
        SigmaRestriction {
            sigma_restricted: SigmaRestricted::Infeasible,
            matches: false,
        }
    }
}
