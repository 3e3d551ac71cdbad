//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Parameter validation failed; `field` names the offending entry.
    #[error("invalid {field}: {message}")]
    InvalidParameter { field: &'static str, message: String },

    /// Adaptive quadrature could not meet the requested tolerance.
    #[error("quadrature did not converge: requested {requested:.3e}, achieved {achieved:.3e}")]
    QuadratureNonconvergence { requested: f64, achieved: f64 },

    /// Profile tabulation/inversion failed to reach the target accuracy.
    #[error("profile inversion tolerance not met: {0}")]
    InversionTolerance(String),

    /// An operation restricted to one regime was called in another.
    #[error("wrong regime: {0}")]
    WrongRegime(String),

    /// Requested period lies outside the attainable range of T_ε.
    #[error("target period {target:.6e} out of attainable range [{lo:.6e}, {hi:.6e}]")]
    TargetOutOfRange { target: f64, lo: f64, hi: f64 },

    /// Bisection exhausted its bracket without meeting the tolerance.
    #[error("bisection stalled: {0}")]
    BisectionStall(String),

    /// ε·ȳ exceeds the separation radius of the jump set.
    #[error("epsilon too large: ε·ȳ = {eps_ybar:.6e} must be below the separation radius {radius:.6e}")]
    EpsilonTooLarge { eps_ybar: f64, radius: f64 },

    /// Adaptive stepping drove dt below dt_min.
    #[error("time step underflow at t = {t:.6e}: dt = {dt:.3e} < dt_min = {dt_min:.3e}")]
    DtUnderflow { t: f64, dt: f64, dt_min: f64 },

    /// Energy-bound constant A outside the admissible interval (0, r√2·λ_p).
    #[error("inadmissible A = {a:.6e}: must lie in (0, {upper:.6e})")]
    InadmissibleA { a: f64, upper: f64 },

    /// Hausdorff distance of an empty interface set is undefined.
    #[error("empty interface set: {0}")]
    EmptyInterfaceSet(&'static str),

    /// Scaling fits need at least three samples.
    #[error("insufficient samples for fit: got {got}, need {need}")]
    InsufficientSamples { got: usize, need: usize },

    /// Run-config validation failure with field-level messages.
    #[error("configuration invalid:\n{}", .0.join("\n"))]
    Validation(Vec<String>),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("config parse error: {0}")]
    ConfigParse(String),
}

impl Error {
    pub fn invalid(field: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter { field, message: message.into() }
    }

    /// Process exit code for the CLI: 2 for validation problems, 3 for
    /// numerical failures, per the interface contract.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter { .. }
            | Error::Validation(_)
            | Error::WrongRegime(_)
            | Error::InadmissibleA { .. }
            | Error::ConfigParse(_) => 2,
            _ => 3,
        }
    }
}
