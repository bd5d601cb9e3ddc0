//! Flat `key = value` configuration files.
//!
//! UTF-8 text, one pair per line, `#` starts a comment, SI units
//! throughout. Unknown and duplicate keys are errors; omitted optional keys
//! take the documented defaults. [`render`] writes every resolved key back
//! out, so parse(render(config)) reproduces the config bit-for-bit.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scenario::{
    validate_scenario, CavityGeometry, MotionProfile, NoiseRateSpec, Occupancy,
    PhysicalConstants, PlateParams, RunControls, ScenarioConfig, ThermalState,
};

const KNOWN_KEYS: [&str; 23] = [
    "lx",
    "ly",
    "lz",
    "plate_mass",
    "plate_area",
    "plate_thickness",
    "plate_friction",
    "temperature",
    "wall_temperature",
    "x0",
    "t1",
    "noise_rate",
    "noise_variance",
    "mode_omega",
    "folding_length",
    "occupancy",
    "n_max",
    "initial_velocity",
    "natural_units",
    "dt",
    "n_steps",
    "ensemble_size",
    "seed",
];

fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut pairs = BTreeMap::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("line {line_no}: expected `key = value`, got `{line}`"))
        })?;
        let key = key.trim();
        let value = value.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(Error::Config(format!("line {line_no}: unknown key `{key}`")));
        }
        if value.is_empty() {
            return Err(Error::Config(format!("line {line_no}: key `{key}` has no value")));
        }
        if pairs.insert(key.to_string(), value.to_string()).is_some() {
            return Err(Error::Config(format!("line {line_no}: duplicate key `{key}`")));
        }
    }
    Ok(pairs)
}

struct Fields {
    pairs: BTreeMap<String, String>,
}

impl Fields {
    fn f64_opt(&self, key: &str) -> Result<Option<f64>> {
        match self.pairs.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<f64>()
                .map(Some)
                .map_err(|_| Error::Config(format!("key `{key}`: invalid number `{raw}`"))),
        }
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.f64_opt(key)?.unwrap_or(default))
    }

    fn u64_or(&self, key: &str, default: u64) -> Result<u64> {
        match self.pairs.get(key) {
            None => Ok(default),
            Some(raw) => raw
                .parse::<u64>()
                .map_err(|_| Error::Config(format!("key `{key}`: invalid integer `{raw}`"))),
        }
    }

    fn u32_or(&self, key: &str, default: u32) -> Result<u32> {
        match self.pairs.get(key) {
            None => Ok(default),
            Some(raw) => raw
                .parse::<u32>()
                .map_err(|_| Error::Config(format!("key `{key}`: invalid integer `{raw}`"))),
        }
    }

    fn bool_or(&self, key: &str, default: bool) -> Result<bool> {
        match self.pairs.get(key).map(String::as_str) {
            None => Ok(default),
            Some("true") => Ok(true),
            Some("false") => Ok(false),
            Some(raw) => Err(Error::Config(format!(
                "key `{key}`: expected true or false, got `{raw}`"
            ))),
        }
    }
}

/// Parses and validates a configuration from text.
pub fn parse_str(text: &str) -> Result<ScenarioConfig> {
    let fields = Fields { pairs: parse_pairs(text)? };

    let missing: Vec<&str> = ["lx", "ly", "lz", "plate_mass", "temperature", "t1", "noise_rate"]
        .into_iter()
        .filter(|key| !fields.pairs.contains_key(*key))
        .collect();
    if !missing.is_empty() {
        return Err(Error::Config(format!("missing required keys: {}", missing.join(", "))));
    }

    let natural_units = fields.bool_or("natural_units", false)?;
    let constants = if natural_units {
        PhysicalConstants::natural()
    } else {
        PhysicalConstants::si()
    };

    let geometry = CavityGeometry {
        lx: fields.f64_or("lx", f64::NAN)?,
        ly: fields.f64_or("ly", f64::NAN)?,
        lz: fields.f64_or("lz", f64::NAN)?,
    };

    let plate = PlateParams {
        mass: fields.f64_or("plate_mass", f64::NAN)?,
        area: fields.f64_or("plate_area", geometry.ly * geometry.lz)?,
        thickness: fields.f64_or("plate_thickness", geometry.lx / 100.0)?,
        friction: fields.f64_or("plate_friction", 0.0)?,
    };

    let temperature = fields.f64_or("temperature", f64::NAN)?;
    let thermal = ThermalState {
        temperature,
        wall_temperature: fields.f64_or("wall_temperature", temperature)?,
    };

    let motion = MotionProfile {
        rest_position: geometry.half_length(),
        final_position: fields.f64_or("x0", geometry.lx / 4.0)?,
        duration: fields.f64_or("t1", f64::NAN)?,
    };

    let noise_rate = match fields.pairs.get("noise_rate").map(String::as_str) {
        Some("self_consistent") => NoiseRateSpec::SelfConsistent,
        _ => NoiseRateSpec::Value(fields.f64_or("noise_rate", f64::NAN)?),
    };

    let occupancy = match fields.pairs.get("occupancy").map(String::as_str) {
        None | Some("planck") => Occupancy::Planck,
        Some(raw) => Occupancy::Fixed(raw.parse::<f64>().map_err(|_| {
            Error::Config(format!("key `occupancy`: expected `planck` or a number, got `{raw}`"))
        })?),
    };

    let config = ScenarioConfig {
        constants,
        geometry,
        plate,
        thermal,
        motion,
        noise_rate,
        noise_variance_override: fields.f64_opt("noise_variance")?,
        mode_frequency: fields.f64_or(
            "mode_omega",
            std::f64::consts::PI * constants.light_speed / geometry.lx,
        )?,
        folding_length: fields.f64_or("folding_length", geometry.lx)?,
        occupancy,
        mode_cutoff: fields.u32_or("n_max", 64)?,
        initial_velocity: fields.f64_or("initial_velocity", 0.0)?,
        natural_units,
        run: RunControls {
            dt: fields.f64_or("dt", 1e-3)?,
            n_steps: fields.u64_or("n_steps", 1000)?,
            ensemble_size: fields.u64_or("ensemble_size", 1024)?,
            seed: fields.u64_or("seed", 1)?,
        },
    };

    validate_scenario(config)
}

/// Parses and validates a configuration file.
pub fn parse_file<P: AsRef<Path>>(path: P) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path.as_ref())?;
    parse_str(&text)
}

/// Every resolved key with its value, in stable order. Values use the
/// shortest decimal form that parses back to the identical bits.
pub fn resolved_map(config: &ScenarioConfig) -> BTreeMap<&'static str, String> {
    let mut map = BTreeMap::new();
    map.insert("lx", format!("{:?}", config.geometry.lx));
    map.insert("ly", format!("{:?}", config.geometry.ly));
    map.insert("lz", format!("{:?}", config.geometry.lz));
    map.insert("plate_mass", format!("{:?}", config.plate.mass));
    map.insert("plate_area", format!("{:?}", config.plate.area));
    map.insert("plate_thickness", format!("{:?}", config.plate.thickness));
    map.insert("plate_friction", format!("{:?}", config.plate.friction));
    map.insert("temperature", format!("{:?}", config.thermal.temperature));
    map.insert("wall_temperature", format!("{:?}", config.thermal.wall_temperature));
    map.insert("x0", format!("{:?}", config.motion.final_position));
    map.insert("t1", format!("{:?}", config.motion.duration));
    map.insert(
        "noise_rate",
        match config.noise_rate {
            NoiseRateSpec::Value(v) => format!("{v:?}"),
            NoiseRateSpec::SelfConsistent => "self_consistent".into(),
        },
    );
    if let Some(var) = config.noise_variance_override {
        map.insert("noise_variance", format!("{var:?}"));
    }
    map.insert("mode_omega", format!("{:?}", config.mode_frequency));
    map.insert("folding_length", format!("{:?}", config.folding_length));
    map.insert(
        "occupancy",
        match config.occupancy {
            Occupancy::Planck => "planck".into(),
            Occupancy::Fixed(v) => format!("{v:?}"),
        },
    );
    map.insert("n_max", config.mode_cutoff.to_string());
    map.insert("initial_velocity", format!("{:?}", config.initial_velocity));
    map.insert("natural_units", config.natural_units.to_string());
    map.insert("dt", format!("{:?}", config.run.dt));
    map.insert("n_steps", config.run.n_steps.to_string());
    map.insert("ensemble_size", config.run.ensemble_size.to_string());
    map.insert("seed", config.run.seed.to_string());
    map
}

/// Renders a config as parseable text with every key resolved.
pub fn render(config: &ScenarioConfig) -> String {
    let mut out = String::from("# resolved scenario configuration\n");
    for (key, value) in resolved_map(config) {
        out.push_str(&format!("{key} = {value}\n"));
    }
    out
}
