//! Crate-wide error type and scenario-validation diagnostics.

use thiserror::Error;

/// One broken scenario invariant. Validation collects every violation it
/// finds rather than stopping at the first.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioViolation {
    /// A length, mass, area, or similar quantity that must be strictly
    /// positive and finite.
    NonPositiveDimension { field: &'static str, value: f64 },
    /// A thermodynamic temperature below absolute zero (or non-finite).
    NegativeTemperature { field: &'static str, value: f64 },
    /// Wall motion outside the cavity or a non-positive duration.
    InvalidMotionProfile { reason: String },
    /// Step size, path length, ensemble size, or related controls unusable.
    InvalidRunControls { reason: String },
}

impl std::fmt::Display for ScenarioViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::NonPositiveDimension { field, value } => {
                write!(f, "non-positive dimension {field} = {value}")
            }
            Self::NegativeTemperature { field, value } => {
                write!(f, "negative temperature {field} = {value}")
            }
            Self::InvalidMotionProfile { reason } => write!(f, "invalid motion profile: {reason}"),
            Self::InvalidRunControls { reason } => write!(f, "invalid run controls: {reason}"),
        }
    }
}

fn join_violations(violations: &[ScenarioViolation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid scenario: {}", join_violations(.violations))]
    InvalidScenario { violations: Vec<ScenarioViolation> },

    #[error("config error: {0}")]
    Config(String),

    #[error("non-positive volume: {0}")]
    NonPositiveVolume(f64),

    #[error("{name} must be positive, got {value}")]
    NonPositiveInput { name: &'static str, value: f64 },

    #[error("temperature must be non-negative, got {0}")]
    NegativeTemperature(f64),

    #[error("reflectivity {0} outside [0, 1]")]
    ReflectivityOutOfRange(f64),

    #[error("absorptivity is zero: no flux is absorbed and the relaxation time diverges")]
    ZeroAbsorptivity,

    #[error("invalid step size: {0}")]
    InvalidStep(f64),

    #[error("noise path must contain at least one sample")]
    EmptyPath,

    #[error(
        "damping {damping} and noise rate {noise_rate} are degenerate; \
         call the *_degenerate limit form instead"
    )]
    DegenerateRates { damping: f64, noise_rate: f64 },

    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),

    #[error("mode cutoff n_max = {n_max} too small for source mode k = {k}; need n_max > k")]
    TruncationTooSmall { n_max: u32, k: u32 },

    #[error("non-physical parameters: {0}")]
    NonPhysicalParams(String),

    #[error("no fixed point: the bound curve does not cross the identity inside the bracket")]
    NoFixedPoint { samples: Vec<(f64, f64)> },

    #[error("fixed-point solver exceeded {0} iterations")]
    MaxIterations(usize),

    #[error("invalid ensemble spec: {0}")]
    InvalidSpec(String),

    #[error("lag time {lag} outside the simulated horizon {horizon}")]
    LagOutOfRange { lag: f64, horizon: f64 },

    #[error("estimate and reference grids do not match: {0}")]
    GridMismatch(String),

    #[error("unknown sweep parameter: {0}")]
    UnknownParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
