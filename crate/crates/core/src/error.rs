use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dilute-regime violation: |chi| = {chi_abs:.3e} at omega = {omega:.6e} rad/s (limit 1e-2)")]
    DiluteRegimeViolation { omega: f64, chi_abs: f64 },

    #[error("no sign change of {what} in [{lo:.9e}, {hi:.9e}]")]
    NotBracketed { what: &'static str, lo: f64, hi: f64 },

    #[error("root search for {what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("centre slope {current:.6e} is not negative; pump scaling cannot reach target {target:.6e}")]
    SlopeSignMismatch { current: f64, target: f64 },

    #[error("perturbation |sigma*dS/n0| = {ratio:.3e} violates the smallness limit 1e-2")]
    SmallnessViolation { ratio: f64 },

    #[error("group index {n_g:.3e} is within 1e-3*n0 of zero; first-order beat diverges")]
    CadSingularity { n_g: f64 },

    #[error("1 + Q*xi^2 = {discriminant:.6e} < 0; second-order closure has no real root")]
    ComplexRoot { discriminant: f64 },

    #[error("chosen branch denominator vanishes (Q = {q:.3e}, xi = {xi:.3e})")]
    SingularBranch { q: f64, xi: f64 },

    #[error("Q = 0: enhancement is unbounded")]
    ZeroQ,

    #[error("sigma = 0: sensing uncertainty undefined")]
    ZeroSigma,

    #[error("config error at `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("{0}")]
    Io(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }

    /// Wraps the error with the pipeline stage that raised it.
    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// Innermost error, with stage labels stripped.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root_cause(),
            other => other,
        }
    }

    /// True for numeric failures (as opposed to bad input or I/O).
    pub fn is_numeric(&self) -> bool {
        !matches!(
            self.root_cause(),
            Error::InvalidParameter { .. }
                | Error::Config { .. }
                | Error::Io(_)
                | Error::SmallnessViolation { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
