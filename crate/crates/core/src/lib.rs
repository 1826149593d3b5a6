//! Closed-form solutions for a two-sector optimal growth model with
//! physical and human capital, plus the numerical machinery needed to
//! calibrate, cross-check, and stress those solutions: adaptive
//! quadrature with honest error bounds, bracketed root finding, an
//! embedded Runge-Kutta reference integrator, and a verification
//! harness that compares everything against everything else.
//!
//! All numerics are generic over [`Real`]; the `*64` aliases at the
//! crate root fix the scalar to `f64` for ordinary use.

pub mod calibration;
pub mod closedform;
pub mod error;
pub mod oracle;
pub mod params;
pub mod quad;
pub mod roots;
pub mod scalar;
pub mod verify;

pub use error::{Error, ParamViolation, Result};
pub use params::validate_params;
pub use scalar::Real;

/// `f64` model parameters.
pub type ModelParams64 = params::ModelParams<f64>;
/// `f64` derived-constant bundle.
pub type DerivedConstants64 = params::DerivedConstants<f64>;
/// `f64` calibration result.
pub type Calibration64 = calibration::Calibration<f64>;
/// `f64` steady state.
pub type SteadyState64 = calibration::SteadyState<f64>;
/// `f64` residual profile from the initial-control solve.
pub type ResidualProfile64 = calibration::ResidualProfile<f64>;
/// `f64` trajectory table.
pub type Trajectory64 = closedform::Trajectory<f64>;
/// `f64` quadrature result.
pub type QuadratureResult64 = quad::QuadratureResult<f64>;
/// `f64` reference-integrator state.
pub type OdeState64 = oracle::OdeState<f64>;
/// `f64` column-wise deviation report.
pub type ErrorReport64 = oracle::ErrorReport<f64>;
/// `f64` verification report.
pub type VerificationReport64 = verify::VerificationReport;
