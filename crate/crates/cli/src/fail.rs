//! Process failure: a message plus the stable exit code contract
//! (0 success, 2 invalid input, 3 calibration failure, 4 verification
//! or invariant failure).

use ulk_core::Error;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    pub fn verification(message: impl Into<String>) -> Failure {
        Failure {
            code: 4,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::invalid(format!("io: {e}"))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match &e {
            Error::InvalidParams(_) => 2,
            Error::NonconvergentIntegralRegime { .. }
            | Error::DivergentB { .. }
            | Error::EtaSingular { .. }
            | Error::NoBracket { .. }
            | Error::MultipleBrackets { .. }
            | Error::InadmissibleSteadyState { .. }
            | Error::DenominatorVanished { .. }
            | Error::ToleranceUnreachable { .. } => 3,
            Error::InvariantViolated { .. }
            | Error::GridMismatch { .. }
            | Error::Departed { .. }
            | Error::StepUnderflow { .. } => 4,
        };
        // root-scan failures ship their evidence table so the failure
        // is diagnosable from the terminal alone
        let message = match &e {
            Error::NoBracket { lo, hi, samples } => {
                let mut m = format!("{e}\nscan of the residual on [{lo}, {hi}]:\n");
                m.push_str("        u0          G(u0)\n");
                for (u, g) in samples {
                    m.push_str(&format!("  {u:>10.6}  {g:>+13.6e}\n"));
                }
                m
            }
            Error::MultipleBrackets { brackets } => {
                let mut m = format!("{e}\nsign-change intervals:\n");
                for (lo, hi) in brackets {
                    m.push_str(&format!("  [{lo:.6}, {hi:.6}]\n"));
                }
                m
            }
            _ => format!("{e}"),
        };
        Failure { code, message }
    }
}
