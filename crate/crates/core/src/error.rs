//! One error enum for the whole crate. Payloads are `f64` regardless
//! of the working scalar so the enum stays object-simple; error sites
//! widen via `Real::as_f64`.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// A single violated bound from parameter validation. Validation
/// collects every violation instead of stopping at the first.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamViolation {
    /// Required key absent from the input map.
    MissingKey(String),
    /// Value present but outside its admissible range.
    OutOfRange {
        name: &'static str,
        value: f64,
        bound: &'static str,
    },
    /// The two curvature parameters coincide, which makes several
    /// exponents degenerate; the model needs them separated.
    SigmaEqualsBeta { sigma: f64, beta: f64 },
}

impl std::fmt::Display for ParamViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParamViolation::MissingKey(k) => write!(f, "missing parameter `{k}`"),
            ParamViolation::OutOfRange { name, value, bound } => {
                write!(f, "parameter `{name}` = {value} violates {bound}")
            }
            ParamViolation::SigmaEqualsBeta { sigma, beta } => write!(
                f,
                "sigma = {sigma} and beta = {beta} differ by less than 1e-12; \
                 the exponents degenerate"
            ),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    /// Parameter validation failed; lists every violated bound.
    #[error("invalid parameters: {}", format_violations(.0))]
    InvalidParams(Vec<ParamViolation>),

    /// The discounted tail integrals do not converge (decay rate of
    /// the slower integrand is not positive).
    #[error("tail integrals diverge: xi = {xi} must be positive")]
    NonconvergentIntegralRegime { xi: f64 },

    /// The faster tail integral decays no faster than the logistic
    /// transition, so its closed-form constants blow up.
    #[error("second tail integral diverges: xi = {xi} <= varphi = {varphi}")]
    DivergentB { xi: f64, varphi: f64 },

    /// A derived denominator is within 1e-12 of zero; the alternate
    /// path formulas would divide by it.
    #[error("eta = {eta} is too close to zero for the alternate forms")]
    EtaSingular { eta: f64 },

    /// Adaptive refinement hit its depth cap before meeting the
    /// requested error bound.
    #[error("quadrature tolerance {requested:e} unreachable; achieved {achieved:e}")]
    ToleranceUnreachable { requested: f64, achieved: f64 },

    /// No sign change over the scan grid; carries the scanned samples
    /// so callers can print the table.
    #[error("no sign change of the calibration residual over {} scan points \
             in [{lo}, {hi}]", .samples.len())]
    NoBracket {
        lo: f64,
        hi: f64,
        samples: Vec<(f64, f64)>,
    },

    /// More than one sign change over the scan grid; the model
    /// guarantees uniqueness, so this flags a regime violation or a
    /// numerics bug. Carries the offending brackets.
    #[error("{} sign changes of the calibration residual; expected exactly one", .brackets.len())]
    MultipleBrackets { brackets: Vec<(f64, f64)> },

    /// A path denominator vanished or the value left its admissible
    /// open interval at the reported time.
    #[error("path denominator vanished or value left (0,1) at t = {t}")]
    DenominatorVanished { t: f64 },

    /// Long-run allocation outside (0, 1]; no interior balanced path.
    #[error("steady-state allocation u* = {u_star} outside (0, 1]")]
    InadmissibleSteadyState { u_star: f64 },

    /// Step-size control drove the step below resolvable width.
    #[error("integrator step underflow at t = {t} (step {step:e})")]
    StepUnderflow { t: f64, step: f64 },

    /// Integrated control left (0, 1): the trajectory departed the
    /// admissible region.
    #[error("integrated control u = {u} left (0,1) at t = {t}")]
    Departed { t: f64, u: f64 },

    /// Two tables with different grids were handed to `compare`.
    #[error("grid mismatch: {left} vs {right} points (first differing index {index})")]
    GridMismatch {
        left: usize,
        right: usize,
        index: usize,
    },

    /// A built trajectory violated one of its row invariants.
    #[error("trajectory invariant `{name}` broken at t = {t}: measured {measured:e}, allowed {threshold:e}")]
    InvariantViolated {
        name: &'static str,
        t: f64,
        measured: f64,
        threshold: f64,
    },
}

fn format_violations(v: &[ParamViolation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invalid_params_lists_every_violation() {
        let e = Error::InvalidParams(vec![
            ParamViolation::MissingKey("beta".into()),
            ParamViolation::OutOfRange {
                name: "delta",
                value: -1.0,
                bound: "delta > 0",
            },
        ]);
        let msg = e.to_string();
        assert!(msg.contains("missing parameter `beta`"));
        assert!(msg.contains("`delta` = -1"));
    }

    #[test]
    fn no_bracket_reports_scan_size() {
        let e = Error::NoBracket {
            lo: 1e-6,
            hi: 1.0 - 1e-6,
            samples: vec![(0.1, -1.0), (0.9, -2.0)],
        };
        assert!(e.to_string().contains("2 scan points"));
    }
}
