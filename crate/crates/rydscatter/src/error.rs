//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter failed validation (non-finite, negative rate, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An effective rate or Lamb shift was requested at zero drive detuning.
    #[error("detuning must be nonzero")]
    ZeroDetuning,

    /// A model was asked to scatter without the drives/modes it needs.
    #[error("model {model} requires {what}")]
    MissingInput {
        model: &'static str,
        what: &'static str,
    },

    /// The incidence port does not belong to a mode of the topology.
    #[error("unknown port {0} for this topology")]
    UnknownPort(String),

    /// Direct solve failed or its residual check did not pass.
    #[error("singular or ill-conditioned system: {0}")]
    SingularSystem(String),

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error("quadrature did not converge: requested {requested:.3e}, achieved {achieved:.3e}")]
    QuadratureTolerance { requested: f64, achieved: f64 },

    /// Contrast ratio of two vanishing transmissivities.
    #[error("contrast ratio undefined: T_12 + T_21 = 0")]
    ContrastUndefined,

    /// Closed-form converter expressions require Delta_c2 = -Delta_c1.
    #[error("resonance loop violated: Delta_c2 must equal -Delta_c1 (got Delta_c1 = {0} MHz, Delta_c2 = {1} MHz)")]
    ResonanceLoop(f64, f64),

    /// Sweep configuration rejected, with the offending key path.
    #[error("config error at `{path}`: {msg}")]
    Config { path: String, msg: String },

    /// `reproduce` was asked for a figure id it does not know.
    #[error("unknown figure id `{0}`")]
    UnknownFigure(String),

    /// A post-solve sanity check failed (flux bound, finiteness).
    #[error("numerical check failed: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn config(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            msg: msg.into(),
        }
    }

    /// CLI exit code classification: 2 for configuration problems, 3 for
    /// numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. }
            | Error::InvalidParameter(_)
            | Error::UnknownFigure(_)
            | Error::UnknownPort(_)
            | Error::MissingInput { .. }
            | Error::ZeroDetuning
            | Error::ResonanceLoop(..)
            | Error::Io(_) => 2,
            Error::SingularSystem(_)
            | Error::QuadratureTolerance { .. }
            | Error::ContrastUndefined
            | Error::Numerical(_) => 3,
        }
    }
}
