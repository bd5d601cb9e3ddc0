//! Blackbody pressure fluctuations, the wall-absorption relaxation model,
//! and a sampler for discretized pressure-difference noise paths.
//!
//! The pressure difference across the plate is a stationary Gaussian
//! process with covariance σ_P²·e^{−λ|t−t′|}. The sampler realizes it with
//! the exact stationary one-step update, so path statistics are correct for
//! any step size.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scenario::{CavityGeometry, PhysicalConstants, ScenarioConfig};

/// Variance and decay rate of the pressure-difference process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseParams {
    /// Pa²; ⟨ΔP²⟩.
    pub variance: f64,
    /// s⁻¹; inverse correlation time λ.
    pub rate: f64,
}

impl NoiseParams {
    pub fn new(variance: f64, rate: f64) -> Result<Self> {
        if !(variance.is_finite() && variance >= 0.0) {
            return Err(Error::NonPhysicalParams(format!(
                "noise variance must be finite and non-negative, got {variance}"
            )));
        }
        if !(rate.is_finite() && rate >= 0.0) {
            return Err(Error::NonPhysicalParams(format!(
                "noise rate must be finite and non-negative, got {rate}"
            )));
        }
        Ok(Self { variance, rate })
    }
}

/// Generation metadata of a sampled path, for sidecar export.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseMetadata {
    pub dt: f64,
    pub n_steps: u64,
    pub seed: u64,
    pub stream: u64,
    pub params: NoiseParams,
}

/// One discretized realization of the pressure-difference process, sampled
/// at t = 0, dt, 2·dt, …
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoisePath {
    pub dt: f64,
    pub samples: Vec<f64>,
    pub seed: u64,
    pub stream: u64,
    pub params: NoiseParams,
}

impl NoisePath {
    pub fn metadata(&self) -> NoiseMetadata {
        NoiseMetadata {
            dt: self.dt,
            n_steps: self.samples.len() as u64,
            seed: self.seed,
            stream: self.stream,
            params: self.params,
        }
    }

    /// CSV export with header `t,delta_p`.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,delta_p")?;
        for (i, sample) in self.samples.iter().enumerate() {
            writeln!(out, "{:?},{:?}", i as f64 * self.dt, sample)?;
        }
        Ok(())
    }
}

/// Mean blackbody pressure αT⁴/3.
pub fn blackbody_pressure(temperature: f64, constants: &PhysicalConstants) -> Result<f64> {
    if !(temperature.is_finite() && temperature >= 0.0) {
        return Err(Error::NegativeTemperature(temperature));
    }
    Ok(constants.radiation_constant_alpha * temperature.powi(4) / 3.0)
}

/// Blackbody energy density u = αT⁴.
pub fn energy_density(temperature: f64, constants: &PhysicalConstants) -> Result<f64> {
    if !(temperature.is_finite() && temperature >= 0.0) {
        return Err(Error::NegativeTemperature(temperature));
    }
    Ok(constants.radiation_constant_alpha * temperature.powi(4))
}

/// Pressure variance of the radiation in one half-cavity of volume V:
/// α·k_B·T⁵/(3V).
pub fn pressure_variance_single(
    temperature: f64,
    volume: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    if !(temperature.is_finite() && temperature >= 0.0) {
        return Err(Error::NegativeTemperature(temperature));
    }
    if !(volume.is_finite() && volume > 0.0) {
        return Err(Error::NonPositiveVolume(volume));
    }
    Ok(constants.radiation_constant_alpha * constants.boltzmann * temperature.powi(5)
        / (3.0 * volume))
}

/// Variance of the pressure difference between the two half-cavities:
/// exactly twice [`pressure_variance_single`].
pub fn pressure_diff_variance(
    temperature: f64,
    volume: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    Ok(2.0 * pressure_variance_single(temperature, volume, constants)?)
}

/// Stationary covariance σ_P²·e^{−λ|t′−t|}. Symmetric in its time
/// arguments by construction.
pub fn pressure_diff_correlation(t: f64, t_prime: f64, params: &NoiseParams) -> f64 {
    params.variance * (-params.rate * (t_prime - t).abs()).exp()
}

/// Field relaxation rate λ = 3(1−R)c/(2·lx) from the wall reflectivity.
pub fn relaxation_rate(reflectivity: f64, lx: f64, light_speed: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&reflectivity) {
        return Err(Error::ReflectivityOutOfRange(reflectivity));
    }
    if !(lx.is_finite() && lx > 0.0) {
        return Err(Error::NonPositiveInput { name: "lx", value: lx });
    }
    Ok(relaxation_rate_from_deficit(1.0 - reflectivity, lx, light_speed))
}

/// Same rate expressed through the reflectivity deficit 1−R directly.
/// Near-perfect mirrors have deficits far below f64 resolution around 1, so
/// the deficit — not R — is the quantity to carry.
pub fn relaxation_rate_from_deficit(deficit: f64, lx: f64, light_speed: f64) -> f64 {
    1.5 * deficit * light_speed / lx
}

/// Energy bookkeeping of the relaxation model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyChain {
    /// J·m⁻³; cavity radiation energy density u = αT⁴.
    pub energy_density: f64,
    /// W·m⁻²; one-sided flux J = c·u/4.
    pub flux: f64,
    /// J·m⁻³; excess density Δu = α(T⁴ − T₀⁴) against the walls.
    pub energy_density_excess: f64,
    /// s; time to shed the excess through absorbing walls, 4V/(S̃·A·c).
    pub relaxation_time: f64,
}

/// Walks the wall-absorption energy budget: excess energy V·Δu leaves
/// through total surface S̃ with absorptivity A at net flux A·c·Δu/4, so the
/// timescale 4V/(S̃·A·c) is independent of the temperatures themselves.
pub fn energy_relaxation_chain(
    temperature: f64,
    wall_temperature: f64,
    absorptivity: f64,
    geometry: &CavityGeometry,
    constants: &PhysicalConstants,
) -> Result<EnergyChain> {
    let u = energy_density(temperature, constants)?;
    let u_wall = energy_density(wall_temperature, constants)?;
    if absorptivity == 0.0 {
        return Err(Error::ZeroAbsorptivity);
    }
    if !(absorptivity.is_finite() && absorptivity > 0.0 && absorptivity <= 1.0) {
        return Err(Error::NonPhysicalParams(format!(
            "absorptivity must lie in (0, 1], got {absorptivity}"
        )));
    }
    Ok(EnergyChain {
        energy_density: u,
        flux: constants.light_speed * u / 4.0,
        energy_density_excess: u - u_wall,
        relaxation_time: 4.0 * geometry.volume()
            / (geometry.total_surface() * absorptivity * constants.light_speed),
    })
}

/// Noise parameters implied by a validated scenario: variance from the
/// override when present, otherwise from temperature and cavity volume;
/// rate from the numeric noise-rate field.
pub fn scenario_noise_params(config: &ScenarioConfig) -> Result<NoiseParams> {
    let variance = match config.noise_variance_override {
        Some(v) => v,
        None => pressure_diff_variance(
            config.thermal.temperature,
            config.geometry.volume(),
            &config.constants,
        )?,
    };
    NoiseParams::new(variance, config.noise_rate.numeric()?)
}

/// Exact one-step update coefficients for the stationary process.
struct OuStep {
    rho: f64,
    step_scale: f64,
}

impl OuStep {
    fn new(params: &NoiseParams, dt: f64) -> Self {
        let rho = (-params.rate * dt).exp();
        // 1 − ρ² = −expm1(−2λ·dt), accurate for λ·dt ≪ 1.
        let one_minus_rho_sq = -(-2.0 * params.rate * dt).exp_m1();
        Self { rho, step_scale: params.variance.sqrt() * one_minus_rho_sq.sqrt() }
    }
}

/// Samples a path on RNG stream 0 of the seed.
pub fn sample_noise_path(
    params: &NoiseParams,
    dt: f64,
    n_steps: u64,
    seed: u64,
) -> Result<NoisePath> {
    sample_noise_path_stream(params, dt, n_steps, seed, 0)
}

/// Samples a path on an explicit RNG stream. Ensembles assign each path a
/// distinct stream of one shared seed, so any subset of paths can be
/// regenerated independently and in parallel.
pub fn sample_noise_path_stream(
    params: &NoiseParams,
    dt: f64,
    n_steps: u64,
    seed: u64,
    stream: u64,
) -> Result<NoisePath> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidStep(dt));
    }
    if n_steps < 1 {
        return Err(Error::EmptyPath);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let step = OuStep::new(params, dt);
    let sigma = params.variance.sqrt();

    let mut samples = Vec::with_capacity(n_steps as usize);
    let first: f64 = StandardNormal.sample(&mut rng);
    samples.push(sigma * first);
    for _ in 1..n_steps {
        let xi: f64 = StandardNormal.sample(&mut rng);
        let prev = *samples.last().expect("path is nonempty");
        samples.push(step.rho * prev + step.step_scale * xi);
    }
    Ok(NoisePath { dt, samples, seed, stream, params: *params })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::PhysicalConstants;

    fn si() -> PhysicalConstants {
        PhysicalConstants::si()
    }

    #[test]
    fn blackbody_pressure_room_temperature() {
        let p = blackbody_pressure(290.0, &si()).unwrap();
        let expected = 1.78369979293908232118812453025e-6;
        assert!((p - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn blackbody_pressure_quartic_scaling() {
        let c = si();
        assert_eq!(blackbody_pressure(0.0, &c).unwrap(), 0.0);
        let p1 = blackbody_pressure(123.0, &c).unwrap();
        let p2 = blackbody_pressure(246.0, &c).unwrap();
        assert!((p2 / p1 - 16.0).abs() < 1e-12);
        assert!(blackbody_pressure(-1.0, &c).is_err());
    }

    #[test]
    fn single_cavity_variance_room_temperature() {
        let var = pressure_variance_single(290.0, 1e-3, &si()).unwrap();
        let expected = 7.14172367272249809623158253923e-24;
        assert!((var - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn variance_inverse_in_volume() {
        let c = si();
        let v1 = pressure_variance_single(290.0, 1e-3, &c).unwrap();
        let v2 = pressure_variance_single(290.0, 2e-3, &c).unwrap();
        assert_eq!(v1 / 2.0, v2);
        assert!(pressure_variance_single(290.0, 0.0, &c).is_err());
    }

    #[test]
    fn difference_variance_is_twice_single() {
        let c = si();
        let single = pressure_variance_single(290.0, 1e-3, &c).unwrap();
        let diff = pressure_diff_variance(290.0, 1e-3, &c).unwrap();
        assert_eq!(diff, 2.0 * single);
        let expected = 1.42834473454449961924631650785e-23;
        assert!((diff - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn correlation_kernel_values_and_symmetry() {
        let params = NoiseParams::new(1.0, 0.5).unwrap();
        assert_eq!(pressure_diff_correlation(3.0, 3.0, &params), 1.0);
        let half_life = std::f64::consts::LN_2 / params.rate;
        assert!((pressure_diff_correlation(0.0, half_life, &params) - 0.5).abs() < 1e-15);
        let fwd = pressure_diff_correlation(1.0, 3.0, &params);
        assert!((fwd - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(fwd, pressure_diff_correlation(3.0, 1.0, &params));
    }

    #[test]
    fn relaxation_rate_reference_points() {
        let c = si().light_speed;
        assert_eq!(relaxation_rate(1.0, 0.2, c).unwrap(), 0.0);
        let bare = relaxation_rate(0.0, 0.2, c).unwrap();
        assert!((bare - 2248443435.0).abs() < 1e-3);
        let good = relaxation_rate(0.9999655, 0.2, c).unwrap();
        assert!((good - 77571.2985075).abs() <= 1e-9 * good);
        assert!(relaxation_rate(1.5, 0.2, c).is_err());
        assert!(relaxation_rate(-0.1, 0.2, c).is_err());
        assert!(relaxation_rate(0.5, 0.0, c).is_err());
    }

    #[test]
    fn energy_chain_room_temperature() {
        let geometry = CavityGeometry { lx: 0.1, ly: 0.1, lz: 0.1 };
        let chain = energy_relaxation_chain(290.0, 290.0, 1.0, &geometry, &si()).unwrap();
        let expected_u = 5.35109937881724696356437359075e-6;
        assert!((chain.energy_density - expected_u).abs() <= 1e-12 * expected_u);
        assert_eq!(chain.energy_density_excess, 0.0);
        let expected_flux = si().light_speed * expected_u / 4.0;
        assert!((chain.flux - expected_flux).abs() <= 1e-12 * expected_flux);
    }

    #[test]
    fn cube_relaxation_time_matches_rate() {
        let geometry = CavityGeometry { lx: 0.37, ly: 0.37, lz: 0.37 };
        let c = si();
        let absorptivity = 0.42;
        let chain = energy_relaxation_chain(300.0, 250.0, absorptivity, &geometry, &c).unwrap();
        let rate = relaxation_rate(1.0 - absorptivity, geometry.lx, c.light_speed).unwrap();
        assert!((chain.relaxation_time * rate - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_absorptivity_rejected() {
        let geometry = CavityGeometry { lx: 0.1, ly: 0.1, lz: 0.1 };
        let err = energy_relaxation_chain(290.0, 290.0, 0.0, &geometry, &si()).unwrap_err();
        assert!(matches!(err, Error::ZeroAbsorptivity));
        assert!(energy_relaxation_chain(290.0, 290.0, 1.5, &geometry, &si()).is_err());
    }

    #[test]
    fn same_seed_reproduces_path_bitwise() {
        let params = NoiseParams::new(1.0, 0.5).unwrap();
        let a = sample_noise_path(&params, 0.01, 500, 99).unwrap();
        let b = sample_noise_path(&params, 0.01, 500, 99).unwrap();
        assert_eq!(a.samples, b.samples);
    }

    #[test]
    fn distinct_streams_differ() {
        let params = NoiseParams::new(1.0, 0.5).unwrap();
        let a = sample_noise_path_stream(&params, 0.01, 100, 99, 0).unwrap();
        let b = sample_noise_path_stream(&params, 0.01, 100, 99, 1).unwrap();
        assert_ne!(a.samples, b.samples);
    }

    #[test]
    fn zero_variance_gives_zero_path() {
        let params = NoiseParams::new(0.0, 0.5).unwrap();
        let path = sample_noise_path(&params, 0.01, 64, 7).unwrap();
        assert!(path.samples.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn zero_rate_freezes_the_path() {
        let params = NoiseParams::new(2.0, 0.0).unwrap();
        let path = sample_noise_path(&params, 0.01, 64, 7).unwrap();
        let first = path.samples[0];
        assert!(path.samples.iter().all(|&x| x == first));
    }

    #[test]
    fn invalid_step_and_length_rejected() {
        let params = NoiseParams::new(1.0, 0.5).unwrap();
        assert!(sample_noise_path(&params, 0.0, 10, 1).is_err());
        assert!(sample_noise_path(&params, 0.01, 0, 1).is_err());
    }

    #[test]
    fn csv_export_shape() {
        let params = NoiseParams::new(1.0, 0.5).unwrap();
        let path = sample_noise_path(&params, 0.5, 3, 1).unwrap();
        let mut buf = Vec::new();
        path.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "t,delta_p");
        assert!(lines[1].starts_with("0.0,"));
        assert!(lines[2].starts_with("0.5,"));
    }
}
