//! Physical constants, cavity geometry, plate parameters, and the validated
//! scenario configuration shared by every other module.
//!
//! All quantities are SI internally. A natural-units override (every
//! constant set to 1) exists so Monte Carlo validation can run at O(1)
//! scales instead of the ~1e-23 Pa² magnitudes of room-temperature noise.
//! Every type here is immutable after validation and safe to share across
//! threads.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result, ScenarioViolation};

/// Fundamental constants used throughout. `radiation_constant_alpha` is the
/// blackbody energy-density constant α = 4·stefan_boltzmann/light_speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    /// W·m⁻²·K⁻⁴
    pub stefan_boltzmann: f64,
    /// J·K⁻¹
    pub boltzmann: f64,
    /// m·s⁻¹
    pub light_speed: f64,
    /// F·m⁻¹
    pub vacuum_permittivity: f64,
    /// J·m⁻³·K⁻⁴
    pub radiation_constant_alpha: f64,
    /// J·s
    pub planck_reduced: f64,
}

impl PhysicalConstants {
    /// CODATA SI values.
    pub fn si() -> Self {
        let stefan_boltzmann = 5.670374419e-8;
        let light_speed = 2.99792458e8;
        Self {
            stefan_boltzmann,
            boltzmann: 1.380649e-23,
            light_speed,
            vacuum_permittivity: 8.8541878128e-12,
            radiation_constant_alpha: 4.0 * stefan_boltzmann / light_speed,
            planck_reduced: 1.054571817e-34,
        }
    }

    /// Every constant set to 1 (α included, not 4σ/c).
    pub fn natural() -> Self {
        Self {
            stefan_boltzmann: 1.0,
            boltzmann: 1.0,
            light_speed: 1.0,
            vacuum_permittivity: 1.0,
            radiation_constant_alpha: 1.0,
            planck_reduced: 1.0,
        }
    }
}

/// CODATA SI constants.
pub fn default_constants() -> PhysicalConstants {
    PhysicalConstants::si()
}

/// Rectangular cavity of inner dimensions lx × ly × lz, with the plate at
/// the midpoint of the x axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CavityGeometry {
    pub lx: f64,
    pub ly: f64,
    pub lz: f64,
}

impl CavityGeometry {
    pub fn volume(&self) -> f64 {
        self.lx * self.ly * self.lz
    }

    /// Distance from the plate's rest position to either x-wall.
    pub fn half_length(&self) -> f64 {
        0.5 * self.lx
    }

    /// Total interior surface area 2(lx·ly + ly·lz + lz·lx).
    pub fn total_surface(&self) -> f64 {
        2.0 * (self.lx * self.ly + self.ly * self.lz + self.lz * self.lx)
    }
}

/// Movable plate: mass, face area, thickness, and linear friction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlateParams {
    /// kg
    pub mass: f64,
    /// m²
    pub area: f64,
    /// m
    pub thickness: f64,
    /// kg·s⁻¹
    pub friction: f64,
}

impl PlateParams {
    /// γ = friction/mass, s⁻¹.
    pub fn damping_rate(&self) -> f64 {
        self.friction / self.mass
    }

    /// s = area/mass, m²·kg⁻¹: pressure-to-acceleration coupling.
    pub fn coupling(&self) -> f64 {
        self.area / self.mass
    }
}

/// Radiation temperature inside the cavity and wall temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalState {
    /// K
    pub temperature: f64,
    /// K
    pub wall_temperature: f64,
}

/// Plate displacement protocol: at rest at `rest_position` for t ≤ 0,
/// displaced to `final_position` by t = `duration`, at rest afterwards.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MotionProfile {
    /// m; equals half the cavity length.
    pub rest_position: f64,
    /// m; must lie strictly inside the cavity, 0 < x₀ < 2·rest_position.
    pub final_position: f64,
    /// s
    pub duration: f64,
}

/// Field relaxation rate λ: either a direct value or deferred to the
/// self-consistent fixed-point solve (λ depends on conductivity, which the
/// bound itself determines).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseRateSpec {
    Value(f64),
    SelfConsistent,
}

impl NoiseRateSpec {
    /// The numeric rate, or an error if deferred to the fixed-point solve.
    pub fn numeric(&self) -> Result<f64> {
        match self {
            Self::Value(v) => Ok(*v),
            Self::SelfConsistent => Err(Error::Config(
                "noise_rate is self_consistent; resolve it with the fixed-point solver first"
                    .into(),
            )),
        }
    }
}

impl Serialize for NoiseRateSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Value(v) => serializer.serialize_f64(*v),
            Self::SelfConsistent => serializer.serialize_str("self_consistent"),
        }
    }
}

/// Occupancy of the source mode: thermal (Planck at the mode frequency) or
/// a fixed quantum number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Occupancy {
    Planck,
    Fixed(f64),
}

impl Serialize for Occupancy {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Planck => serializer.serialize_str("planck"),
            Self::Fixed(v) => serializer.serialize_f64(*v),
        }
    }
}

/// Discretization and ensemble controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunControls {
    /// s
    pub dt: f64,
    pub n_steps: u64,
    pub ensemble_size: u64,
    pub seed: u64,
}

/// Fully validated scenario. Construct through [`validate_scenario`] or the
/// config parser; fields are public for reading, and derived quantities
/// (volume, damping rate, coupling) are methods so they can never go stale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub constants: PhysicalConstants,
    pub geometry: CavityGeometry,
    pub plate: PlateParams,
    pub thermal: ThermalState,
    pub motion: MotionProfile,
    pub noise_rate: NoiseRateSpec,
    /// Direct ⟨ΔP²⟩ override; when absent the variance follows from
    /// temperature and volume.
    pub noise_variance_override: Option<f64>,
    /// rad·s⁻¹; probe/mode angular frequency (defaults to the lowest cavity
    /// mode π·c/lx).
    pub mode_frequency: f64,
    /// m; folding length l in the wall-collision rate f = c/l.
    pub folding_length: f64,
    pub occupancy: Occupancy,
    /// Mode-sum truncation for spectra and summed rates.
    pub mode_cutoff: u32,
    /// m·s⁻¹; plate velocity at t = 0.
    pub initial_velocity: f64,
    /// True when constants were overridden to 1.
    pub natural_units: bool,
    pub run: RunControls,
}

impl ScenarioConfig {
    /// γ, s⁻¹.
    pub fn damping(&self) -> f64 {
        self.plate.damping_rate()
    }

    /// s = area/mass, m²·kg⁻¹.
    pub fn coupling(&self) -> f64 {
        self.plate.coupling()
    }
}

fn check_positive(
    violations: &mut Vec<ScenarioViolation>,
    field: &'static str,
    value: f64,
) {
    if !(value.is_finite() && value > 0.0) {
        violations.push(ScenarioViolation::NonPositiveDimension { field, value });
    }
}

fn check_non_negative(
    violations: &mut Vec<ScenarioViolation>,
    field: &'static str,
    value: f64,
) {
    if !(value.is_finite() && value >= 0.0) {
        violations.push(ScenarioViolation::NonPositiveDimension { field, value });
    }
}

/// Validates every invariant and returns the config unchanged, or an
/// [`Error::InvalidScenario`] naming all violations at once.
pub fn validate_scenario(config: ScenarioConfig) -> Result<ScenarioConfig> {
    let mut violations = Vec::new();
    let v = &mut violations;

    check_positive(v, "stefan_boltzmann", config.constants.stefan_boltzmann);
    check_positive(v, "boltzmann", config.constants.boltzmann);
    check_positive(v, "light_speed", config.constants.light_speed);
    check_positive(v, "vacuum_permittivity", config.constants.vacuum_permittivity);
    check_positive(v, "radiation_constant_alpha", config.constants.radiation_constant_alpha);
    check_positive(v, "planck_reduced", config.constants.planck_reduced);

    check_positive(v, "lx", config.geometry.lx);
    check_positive(v, "ly", config.geometry.ly);
    check_positive(v, "lz", config.geometry.lz);

    check_positive(v, "plate_mass", config.plate.mass);
    check_positive(v, "plate_area", config.plate.area);
    check_positive(v, "plate_thickness", config.plate.thickness);
    check_non_negative(v, "plate_friction", config.plate.friction);

    for (field, value) in [
        ("temperature", config.thermal.temperature),
        ("wall_temperature", config.thermal.wall_temperature),
    ] {
        if !(value.is_finite() && value >= 0.0) {
            v.push(ScenarioViolation::NegativeTemperature { field, value });
        }
    }

    let half = config.geometry.half_length();
    if half.is_finite()
        && half > 0.0
        && (config.motion.rest_position - half).abs() > 1e-12 * half
    {
        v.push(ScenarioViolation::InvalidMotionProfile {
            reason: format!(
                "rest_position {} must equal half the cavity length {half}",
                config.motion.rest_position
            ),
        });
    }
    let x0 = config.motion.final_position;
    if !(x0.is_finite() && x0 > 0.0 && x0 < config.geometry.lx) {
        v.push(ScenarioViolation::InvalidMotionProfile {
            reason: format!(
                "final_position x0 = {x0} must lie strictly inside (0, {})",
                config.geometry.lx
            ),
        });
    }
    if !(config.motion.duration.is_finite() && config.motion.duration > 0.0) {
        v.push(ScenarioViolation::InvalidMotionProfile {
            reason: format!("duration t1 = {} must be positive", config.motion.duration),
        });
    }

    if let NoiseRateSpec::Value(rate) = config.noise_rate {
        check_non_negative(v, "noise_rate", rate);
    }
    if let Some(var) = config.noise_variance_override {
        check_non_negative(v, "noise_variance", var);
    }
    check_positive(v, "mode_omega", config.mode_frequency);
    check_positive(v, "folding_length", config.folding_length);
    if let Occupancy::Fixed(n_k) = config.occupancy {
        check_non_negative(v, "occupancy", n_k);
    }
    if config.mode_cutoff < 2 {
        v.push(ScenarioViolation::InvalidRunControls {
            reason: format!("n_max = {} leaves no creation modes; need at least 2", config.mode_cutoff),
        });
    }
    if !config.initial_velocity.is_finite() {
        v.push(ScenarioViolation::InvalidRunControls {
            reason: format!("initial_velocity = {} must be finite", config.initial_velocity),
        });
    }

    if !(config.run.dt.is_finite() && config.run.dt > 0.0) {
        v.push(ScenarioViolation::InvalidRunControls {
            reason: format!("dt = {} must be positive", config.run.dt),
        });
    }
    if config.run.n_steps < 1 {
        v.push(ScenarioViolation::InvalidRunControls {
            reason: "n_steps must be at least 1".into(),
        });
    }
    if config.run.ensemble_size < 1 {
        v.push(ScenarioViolation::InvalidRunControls {
            reason: "ensemble_size must be at least 1".into(),
        });
    }

    if violations.is_empty() {
        Ok(config)
    } else {
        Err(Error::InvalidScenario { violations })
    }
}

/// Snapshot of the derived quantities, for report echoing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedQuantities {
    pub volume: f64,
    pub total_surface: f64,
    pub half_length: f64,
    pub damping_rate: f64,
    pub coupling: f64,
}

impl From<&ScenarioConfig> for DerivedQuantities {
    fn from(config: &ScenarioConfig) -> Self {
        Self {
            volume: config.geometry.volume(),
            total_surface: config.geometry.total_surface(),
            half_length: config.geometry.half_length(),
            damping_rate: config.damping(),
            coupling: config.coupling(),
        }
    }
}

impl Serialize for DerivedQuantities {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("DerivedQuantities", 5)?;
        s.serialize_field("volume", &self.volume)?;
        s.serialize_field("total_surface", &self.total_surface)?;
        s.serialize_field("half_length", &self.half_length)?;
        s.serialize_field("damping_rate", &self.damping_rate)?;
        s.serialize_field("coupling", &self.coupling)?;
        s.end()
    }
}
