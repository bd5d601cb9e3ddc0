//! Photon creation by the randomly accelerating plate: single-realization
//! expectation, ensemble average, and per-mode / total creation rates.
//!
//! Rates carry their magnitudes as [`LogVal`] because physically reasonable
//! inputs produce factors like e^{λt₁} with λt₁ ~ 1e8, far beyond f64. The
//! degenerate λ = γ case routes automatically to the analytic limit of the
//! γ²/(γ²−λ²) bracket, so every function here accepts any λ, γ ≥ 0.

use serde::Serialize;

use crate::dynamics::rates_degenerate;
use crate::error::{Error, Result};
use crate::logdomain::LogVal;
use crate::scenario::{Occupancy, ScenarioConfig};
use crate::thermal::scenario_noise_params;

const LOG10_E: f64 = std::f64::consts::LOG10_E;

/// Excited mode n, source mode k, and the initial occupancy of mode k.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModePair {
    pub excited: u32,
    pub source: u32,
    pub occupancy: f64,
}

impl ModePair {
    pub fn new(excited: u32, source: u32, occupancy: f64) -> Result<Self> {
        if excited < 1 || source < 1 {
            return Err(Error::NonPhysicalParams(format!(
                "mode indices must be at least 1, got n={excited}, k={source}"
            )));
        }
        if !(occupancy.is_finite() && occupancy >= 0.0) {
            return Err(Error::NonPhysicalParams(format!(
                "occupancy must be finite and non-negative, got {occupancy}"
            )));
        }
        Ok(Self { excited, source, occupancy })
    }
}

/// Everything the rate formulas consume, decoupled from the full scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateInputs {
    /// m; plate displacement x₀.
    pub displacement: f64,
    /// m²·kg⁻¹; coupling s.
    pub coupling: f64,
    /// Pa²; pressure-difference variance σ_P².
    pub variance: f64,
    /// s⁻¹; γ.
    pub damping: f64,
    /// s⁻¹; λ.
    pub noise_rate: f64,
    /// s; motion duration t₁.
    pub duration: f64,
    /// m·s⁻¹
    pub light_speed: f64,
}

impl RateInputs {
    pub fn new(
        displacement: f64,
        coupling: f64,
        variance: f64,
        damping: f64,
        noise_rate: f64,
        duration: f64,
        light_speed: f64,
    ) -> Result<Self> {
        let all = [
            ("displacement", displacement),
            ("coupling", coupling),
            ("variance", variance),
            ("damping", damping),
            ("noise_rate", noise_rate),
            ("duration", duration),
            ("light_speed", light_speed),
        ];
        for (name, value) in all {
            if !value.is_finite() {
                return Err(Error::NonPhysicalParams(format!("{name} must be finite, got {value}")));
            }
        }
        for (name, value) in [("variance", variance), ("damping", damping), ("noise_rate", noise_rate)] {
            if value < 0.0 {
                return Err(Error::NonPhysicalParams(format!(
                    "{name} must be non-negative, got {value}"
                )));
            }
        }
        for (name, value) in [
            ("displacement", displacement),
            ("duration", duration),
            ("light_speed", light_speed),
        ] {
            if value <= 0.0 {
                return Err(Error::NonPhysicalParams(format!(
                    "{name} must be positive, got {value}"
                )));
            }
        }
        Ok(Self { displacement, coupling, variance, damping, noise_rate, duration, light_speed })
    }

    /// Pulls displacement, coupling, noise variance, rates, and duration
    /// from a validated scenario. Requires a numeric noise rate.
    pub fn from_scenario(config: &ScenarioConfig) -> Result<Self> {
        let noise = scenario_noise_params(config)?;
        Self::new(
            config.motion.final_position,
            config.coupling(),
            noise.variance,
            config.damping(),
            noise.rate,
            config.motion.duration,
            config.constants.light_speed,
        )
    }

    /// Warnings for regimes where the closed-form rate's proviso
    /// t₁ ≫ 1/γ, 1/λ is violated. Advisory only.
    pub fn proviso_warnings(&self) -> Vec<String> {
        let mut warnings = Vec::new();
        if self.damping * self.duration < 10.0 {
            warnings.push(format!(
                "duration t1 = {} is not long against the damping time 1/gamma = {}; \
                 the closed-form rate drops initial transients",
                self.duration,
                1.0 / self.damping
            ));
        }
        if self.noise_rate * self.duration < 10.0 {
            warnings.push(format!(
                "duration t1 = {} is not long against the noise correlation time 1/lambda = {}; \
                 the closed-form rate drops initial transients",
                self.duration,
                1.0 / self.noise_rate
            ));
        }
        warnings
    }
}

/// Mean photon number in mode n for one realization of the plate motion,
/// given the end-point accelerations a0 = ẍ(0) and a1 = ẍ(t₁):
/// n_k·{δ_nk + (36n²/(c⁴π⁴))·(1−δ_nk)/(n−k)⁶·[√(n/k)·x₀a1/6 − √(k/n)·x₀a0/6]²}.
pub fn photon_number_expectation(
    pair: &ModePair,
    displacement: f64,
    accel_start: f64,
    accel_end: f64,
    light_speed: f64,
) -> f64 {
    let n = pair.excited as f64;
    let k = pair.source as f64;
    if pair.excited == pair.source {
        return pair.occupancy;
    }
    let pi4 = std::f64::consts::PI.powi(4);
    let root = (n / k).sqrt() * displacement * accel_end / 6.0
        - (k / n).sqrt() * displacement * accel_start / 6.0;
    pair.occupancy * (36.0 * n * n / (light_speed.powi(4) * pi4)) / (n - k).powi(6) * root * root
}

/// Curly-bracket factor of the ensemble amplitude A(n,k):
/// (n/k + k/n − 2e^{−λt₁}) + q·(n/k), with
/// q = γ²/(γ²−λ²)·(1 − e^{(λ−γ)t₁} + e^{−2γt₁} − e^{−(γ+λ)t₁}) or its
/// λ → γ limit γt₁(1−e^{−2γt₁})/2. Positive for n ≠ k.
fn ensemble_bracket(n: f64, k: f64, inputs: &RateInputs) -> LogVal {
    let first = LogVal::from_f64(
        n / k + k / n - 2.0 * (-inputs.noise_rate * inputs.duration).exp(),
    );
    first.add(damping_bracket(inputs).mul(LogVal::from_f64(n / k)))
}

/// The q factor above, in log domain because e^{(λ−γ)t₁} overflows f64 for
/// fast-relaxation scenarios.
fn damping_bracket(inputs: &RateInputs) -> LogVal {
    let gamma = inputs.damping;
    let lambda = inputs.noise_rate;
    let t1 = inputs.duration;
    if rates_degenerate(gamma, lambda) {
        return LogVal::from_f64(0.5 * gamma * t1 * -(-2.0 * gamma * t1).exp_m1());
    }
    let prefactor = LogVal::from_f64(gamma * gamma / (gamma * gamma - lambda * lambda));
    let inner = LogVal::ONE
        .sub(LogVal::exp((lambda - gamma) * t1))
        .add(LogVal::exp(-2.0 * gamma * t1))
        .sub(LogVal::exp(-(gamma + lambda) * t1));
    prefactor.mul(inner)
}

/// β = x₀²s²σ_P²/(c⁴π⁴), the scale carrying all dimensional factors.
fn amplitude_scale(inputs: &RateInputs) -> LogVal {
    let pi4_log10 = 4.0 * std::f64::consts::PI.log10();
    let scale = LogVal::from_f64(inputs.displacement)
        .square()
        .mul(LogVal::from_f64(inputs.coupling).square())
        .mul(LogVal::from_f64(inputs.variance));
    scale.div(LogVal::from_f64(inputs.light_speed).square().square()).div(LogVal::from_log10(
        1,
        pi4_log10,
    ))
}

/// Ensemble amplitude A(n,k) = (n²/(c⁴π⁴))·x₀²s²σ_P²·bracket, in log
/// domain.
pub fn ensemble_amplitude(excited: u32, source: u32, inputs: &RateInputs) -> LogVal {
    let n = excited as f64;
    let k = source as f64;
    amplitude_scale(inputs)
        .mul(LogVal::from_f64(n * n))
        .mul(ensemble_bracket(n, k, inputs))
}

/// Ensemble average of the photon-number expectation,
/// n_k·{δ_nk + (1−δ_nk)/(n−k)⁶·A(n,k)}. Values beyond f64 range come back
/// as ±∞; rate consumers should use the log-domain API instead.
pub fn ensemble_photon_number(pair: &ModePair, inputs: &RateInputs) -> f64 {
    if pair.excited == pair.source {
        return pair.occupancy;
    }
    let spacing = (pair.excited as f64 - pair.source as f64).powi(6);
    LogVal::from_f64(pair.occupancy)
        .mul(ensemble_amplitude(pair.excited, pair.source, inputs))
        .div(LogVal::from_f64(spacing))
        .to_f64()
}

/// Thermal occupancy of cavity mode k: 1/(e^{ħ·k·ω₁/(k_B T)} − 1), zero at
/// T = 0.
pub fn planck_occupancy(
    mode: u32,
    base_frequency: f64,
    temperature: f64,
    planck_reduced: f64,
    boltzmann: f64,
) -> f64 {
    if temperature == 0.0 {
        return 0.0;
    }
    let x = planck_reduced * mode as f64 * base_frequency / (boltzmann * temperature);
    1.0 / x.exp_m1()
}

/// Occupancy of mode k under a scenario's occupancy policy.
pub fn scenario_occupancy(mode: u32, config: &ScenarioConfig) -> f64 {
    match config.occupancy {
        Occupancy::Fixed(n_k) => n_k,
        Occupancy::Planck => planck_occupancy(
            mode,
            config.mode_frequency,
            config.thermal.temperature,
            config.constants.planck_reduced,
            config.constants.boltzmann,
        ),
    }
}

/// Per-mode creation rate with its truncation-tail bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeRate {
    /// Source mode k.
    pub source: u32,
    /// s⁻¹ per volume, in log domain.
    pub rate: LogVal,
    /// Rigorous upper bound on the truncated Σ_{n>n_max} remainder.
    pub tail_bound: LogVal,
    /// Mode cutoff used; absent for the closed-form evaluation, which sums
    /// all modes implicitly.
    pub n_max: Option<u32>,
    /// True when the magnitude cannot be represented as f64.
    pub log_domain: bool,
}

/// Per-mode rates plus their total. `total` equals the sum of the per-mode
/// entries by construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CreationRateResult {
    pub per_mode: Vec<ModeRate>,
    pub total: LogVal,
    /// s; the t₁ the rates are normalized by.
    pub duration: f64,
    pub log_domain: bool,
    pub warnings: Vec<String>,
}

/// Creation rate of source mode k truncated at n_max:
/// Σ_{n≤n_max, n≠k} A(n,k)/(t₁(n−k)⁶), independent of the occupancy n_k.
///
/// The reported tail bound majorizes the dropped Σ_{n>n_max} using
/// bracket(n,k) ≤ n·[(1+|q|)/k + k/(n_max+1)²] and Σ_{m≥M} m⁻³ ≤ 1/(2(M−1)²).
pub fn mode_creation_rate(source: u32, inputs: &RateInputs, n_max: u32) -> Result<ModeRate> {
    if n_max <= source {
        return Err(Error::TruncationTooSmall { n_max, k: source });
    }
    let t1 = inputs.duration;
    let terms: Vec<LogVal> = (1..=n_max)
        .filter(|&n| n != source)
        .map(|n| {
            let spacing = (n as f64 - source as f64).powi(6);
            ensemble_amplitude(n, source, inputs).div(LogVal::from_f64(t1 * spacing))
        })
        .collect();
    let rate = LogVal::pairwise_sum(&terms);

    let k = source as f64;
    let m0 = (n_max + 1) as f64;
    let q_abs = damping_bracket(inputs).log10_abs();
    let envelope = LogVal::ONE
        .add(LogVal::from_log10(1, q_abs))
        .div(LogVal::from_f64(k))
        .add(LogVal::from_f64(k / (m0 * m0)));
    let kappa = 1.0 + k / (m0 - k);
    let geometry = kappa.powi(3) / (2.0 * t1 * (n_max as f64 - k) * (n_max as f64 - k));
    let tail_bound = amplitude_scale(inputs).mul(envelope).mul(LogVal::from_f64(geometry));

    Ok(ModeRate {
        source,
        rate,
        tail_bound,
        n_max: Some(n_max),
        log_domain: rate.exceeds_f64(),
    })
}

/// Dimensionless damping/noise bracket of the total rate,
/// γ²/(λ²−γ²)·(e^{(λ−γ)t₁}−1) + 5/4, with the λ = γ limit γt₁/2 + 5/4.
/// Positive for any t₁ > 0. The conductivity bound divides by this same
/// factor, so both sides of the second-law comparison share it.
pub fn total_rate_bracket(damping: f64, noise_rate: f64, duration: f64) -> LogVal {
    if rates_degenerate(damping, noise_rate) {
        return LogVal::from_f64(0.5 * damping * duration + 1.25);
    }
    // γ²/(λ²−γ²)·(e^{(λ−γ)t₁}−1): both factors flip sign together at
    // λ = γ, so the product stays positive on both sides.
    let prefactor =
        LogVal::from_f64(damping * damping / (noise_rate * noise_rate - damping * damping));
    prefactor
        .mul(LogVal::exp_m1((noise_rate - damping) * duration))
        .add(LogVal::from_f64(1.25))
}

/// Published closed-form total rate for the lowest mode pair (k=1, n=2):
/// (2x₀²s²σ_P²/(t₁c⁴π⁴))·[γ²/(λ²−γ²)·(e^{(λ−γ)t₁}−1) + 5/4], with the
/// λ = γ bracket limit γt₁/2 + 5/4. Positive whenever σ_P² > 0.
pub fn total_creation_rate(inputs: &RateInputs) -> CreationRateResult {
    let t1 = inputs.duration;
    let bracket = total_rate_bracket(inputs.damping, inputs.noise_rate, t1);
    let total = amplitude_scale(inputs).mul(LogVal::from_f64(2.0 / t1)).mul(bracket);

    CreationRateResult {
        per_mode: vec![ModeRate {
            source: 1,
            rate: total,
            tail_bound: LogVal::ZERO,
            n_max: None,
            log_domain: total.exceeds_f64(),
        }],
        total,
        duration: t1,
        log_domain: total.exceeds_f64(),
        warnings: inputs.proviso_warnings(),
    }
}

/// Mode-sum total over source modes 1..=k_max, each truncated at n_max.
pub fn summed_creation_rate(
    inputs: &RateInputs,
    k_max: u32,
    n_max: u32,
) -> Result<CreationRateResult> {
    if k_max < 1 {
        return Err(Error::NonPhysicalParams("k_max must be at least 1".into()));
    }
    let per_mode: Vec<ModeRate> = (1..=k_max)
        .map(|k| mode_creation_rate(k, inputs, n_max))
        .collect::<Result<_>>()?;
    let rates: Vec<LogVal> = per_mode.iter().map(|m| m.rate).collect();
    let total = LogVal::pairwise_sum(&rates);
    Ok(CreationRateResult {
        per_mode,
        total,
        duration: inputs.duration,
        log_domain: total.exceeds_f64(),
        warnings: inputs.proviso_warnings(),
    })
}

/// Expected photon numbers per excited mode n for one source mode k.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhotonSpectrum {
    pub source: u32,
    pub occupancy: f64,
    /// (n, expected number) for n = 1..=n_max.
    pub expected: Vec<(u32, f64)>,
    pub n_max: u32,
    /// Upper bound on the total expected number dropped beyond n_max.
    pub tail_bound: f64,
}

impl PhotonSpectrum {
    /// CSV export with header `k,n,expected_number`.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "k,n,expected_number")?;
        for (n, value) in &self.expected {
            writeln!(out, "{},{},{:?}", self.source, n, value)?;
        }
        Ok(())
    }
}

/// Ensemble spectrum of source mode k up to n_max.
pub fn spectrum(
    source: u32,
    occupancy: f64,
    inputs: &RateInputs,
    n_max: u32,
) -> Result<PhotonSpectrum> {
    if n_max <= source {
        return Err(Error::TruncationTooSmall { n_max, k: source });
    }
    let expected = (1..=n_max)
        .map(|n| {
            let pair = ModePair { excited: n, source, occupancy };
            (n, ensemble_photon_number(&pair, inputs))
        })
        .collect();
    let mode = mode_creation_rate(source, inputs, n_max)?;
    let tail_numbers = mode
        .tail_bound
        .mul(LogVal::from_f64(inputs.duration))
        .mul(LogVal::from_f64(occupancy));
    Ok(PhotonSpectrum {
        source,
        occupancy,
        expected,
        n_max,
        tail_bound: tail_numbers.to_f64(),
    })
}

/// log10 of e^x without forming e^x.
pub fn log10_exp(x: f64) -> f64 {
    x * LOG10_E
}

#[cfg(test)]
mod tests {
    use super::*;

    fn benchmark_inputs(variance: f64, noise_rate: f64) -> RateInputs {
        RateInputs::new(1.0, 1.0, variance, 1.0, noise_rate, 10.0, 1.0).unwrap()
    }

    #[test]
    fn single_realization_diagonal_is_occupancy() {
        let pair = ModePair::new(3, 3, 1.7).unwrap();
        assert_eq!(photon_number_expectation(&pair, 1.0, 5.0, -2.0, 1.0), 1.7);
    }

    #[test]
    fn single_realization_static_plate_creates_nothing() {
        let pair = ModePair::new(2, 1, 1.0).unwrap();
        assert_eq!(photon_number_expectation(&pair, 1.0, 0.0, 0.0, 1.0), 0.0);
    }

    #[test]
    fn single_realization_frozen_benchmark() {
        let pair = ModePair::new(2, 1, 1.0).unwrap();
        let value = photon_number_expectation(&pair, 1.0, 0.0, 6.0, 1.0);
        let expected = 2.95660288934908853447600158093;
        assert!((value - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn ensemble_diagonal_is_occupancy() {
        let pair = ModePair::new(4, 4, 0.3).unwrap();
        assert_eq!(ensemble_photon_number(&pair, &benchmark_inputs(1.0, 0.5)), 0.3);
    }

    #[test]
    fn ensemble_vanishes_without_noise() {
        let pair = ModePair::new(2, 1, 1.0).unwrap();
        assert_eq!(ensemble_photon_number(&pair, &benchmark_inputs(0.0, 0.5)), 0.0);
    }

    #[test]
    fn ensemble_frozen_benchmarks() {
        let pair = ModePair::new(2, 1, 1.0).unwrap();
        let derived = ensemble_photon_number(&pair, &benchmark_inputs(2.0 / 3.0, 0.5));
        let expected_derived = 0.140581597309532770123924234605;
        assert!((derived - expected_derived).abs() <= 1e-12 * expected_derived);
        let pinned = ensemble_photon_number(&pair, &benchmark_inputs(1.0, 0.5));
        let expected_pinned = 0.210872395964299155185886351907;
        assert!((pinned - expected_pinned).abs() <= 1e-12 * expected_pinned);
    }

    #[test]
    fn ensemble_occupancy_scales_linearly() {
        let inputs = benchmark_inputs(1.0, 0.5);
        let unit = ensemble_photon_number(&ModePair::new(2, 1, 1.0).unwrap(), &inputs);
        let tripled = ensemble_photon_number(&ModePair::new(2, 1, 3.0).unwrap(), &inputs);
        assert!((tripled - 3.0 * unit).abs() <= 1e-12 * tripled);
    }

    #[test]
    fn degenerate_limit_frozen_and_continuous() {
        let pair = ModePair::new(2, 1, 1.0).unwrap();
        let limit = ensemble_photon_number(&pair, &benchmark_inputs(1.0, 1.0));
        let expected = 0.51329538328883965429481369258;
        assert!((limit - expected).abs() <= 1e-12 * expected);
        for rate in [1.0 - 1e-6, 1.0 + 1e-6] {
            let near = ensemble_photon_number(&pair, &benchmark_inputs(1.0, rate));
            assert!((near - limit).abs() <= 1e-4 * limit);
        }
    }

    #[test]
    fn total_rate_frozen_benchmarks() {
        let result = total_creation_rate(&benchmark_inputs(2.0 / 3.0, 0.5));
        let expected = 0.00352376337317782834760996096397;
        let value = result.total.to_f64();
        assert!((value - expected).abs() <= 1e-12 * expected);
        // noise_rate * duration = 5 < 10: the transient-dropping proviso fires.
        assert_eq!(result.warnings.len(), 1);

        let pinned = total_creation_rate(&benchmark_inputs(1.0, 0.5)).total.to_f64();
        let expected_pinned = 0.00528564505976674252141494144595;
        assert!((pinned - expected_pinned).abs() <= 1e-12 * expected_pinned);
    }

    #[test]
    fn total_rate_degenerate_limit_frozen() {
        let result = total_creation_rate(&benchmark_inputs(1.0, 1.0));
        let expected = 0.0128324778183554189864409790839;
        let value = result.total.to_f64();
        assert!((value - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn total_rate_positive_and_scales_with_variance() {
        let quadrupled = total_creation_rate(&benchmark_inputs(4.0, 0.5)).total.to_f64();
        let unit = total_creation_rate(&benchmark_inputs(1.0, 0.5)).total.to_f64();
        assert!(unit > 0.0);
        assert!((quadrupled - 4.0 * unit).abs() <= 1e-12 * quadrupled);
    }

    #[test]
    fn total_rate_warns_on_short_duration() {
        let inputs = RateInputs::new(1.0, 1.0, 1.0, 1.0, 0.5, 1.0, 1.0).unwrap();
        let result = total_creation_rate(&inputs);
        assert_eq!(result.warnings.len(), 2);
    }

    #[test]
    fn total_equals_per_mode_sum() {
        let closed = total_creation_rate(&benchmark_inputs(1.0, 0.5));
        assert_eq!(closed.per_mode.len(), 1);
        assert_eq!(closed.per_mode[0].rate, closed.total);

        let summed = summed_creation_rate(&benchmark_inputs(1.0, 0.5), 4, 64).unwrap();
        let by_hand: f64 = summed.per_mode.iter().map(|m| m.rate.to_f64()).sum();
        let total = summed.total.to_f64();
        assert!((total - by_hand).abs() <= 1e-12 * by_hand);
    }

    #[test]
    fn mode_rate_frozen_benchmarks() {
        let inputs = benchmark_inputs(1.0, 0.5);
        let k1 = mode_creation_rate(1, &inputs, 64).unwrap().rate.to_f64();
        let expected_k1 = 0.0225174345566600134116004453434;
        assert!((k1 - expected_k1).abs() <= 1e-12 * expected_k1);
        let k2 = mode_creation_rate(2, &inputs, 64).unwrap().rate.to_f64();
        let expected_k2 = 0.0431482046392075570417923183283;
        assert!((k2 - expected_k2).abs() <= 1e-12 * expected_k2);
    }

    #[test]
    fn mode_rate_truncation_study() {
        // Summands decay like 1/n^3, so the tail past N shrinks like 1/N^2;
        // doubling the cutoff from 50 moves the rate by ~2e-5 relative.
        let inputs = benchmark_inputs(1.0, 0.5);
        let at_50 = mode_creation_rate(1, &inputs, 50).unwrap();
        let at_100 = mode_creation_rate(1, &inputs, 100).unwrap();
        let r50 = at_50.rate.to_f64();
        let r100 = at_100.rate.to_f64();
        assert!(r100 > r50);
        assert!((r100 - r50) <= 1e-4 * r100);
        assert!(at_50.tail_bound.to_f64() >= r100 - r50);
        assert!(at_100.tail_bound.to_f64() < at_50.tail_bound.to_f64());
    }

    #[test]
    fn truncation_below_source_rejected() {
        let inputs = benchmark_inputs(1.0, 0.5);
        assert!(matches!(
            mode_creation_rate(3, &inputs, 3),
            Err(Error::TruncationTooSmall { n_max: 3, k: 3 })
        ));
    }

    #[test]
    fn fast_relaxation_rate_lives_in_log_domain() {
        // λt₁ = 2e4 ⇒ e^{λt₁} far beyond f64 range.
        let inputs = RateInputs::new(1.0, 1.0, 1.0, 1e-3, 2.0, 1e4, 1.0).unwrap();
        let result = total_creation_rate(&inputs);
        assert!(result.log_domain);
        assert!(result.total.is_positive());
        let expected_log10 = ((2.0 - 1e-3) * 1e4) * LOG10_E
            + (1e-6f64 / (4.0 - 1e-6)).log10()
            + (2.0 / 1e4f64).log10()
            - 4.0 * std::f64::consts::PI.log10();
        assert!((result.total.log10_abs() - expected_log10).abs() < 1e-9 * expected_log10.abs());
    }

    #[test]
    fn planck_occupancy_reference_points() {
        assert_eq!(planck_occupancy(1, 1e9, 0.0, 1.0, 1.0), 0.0);
        // ħω/k_BT = ln 2 ⇒ occupancy exactly 1.
        let t = 1.0 / std::f64::consts::LN_2;
        let n = planck_occupancy(1, 1.0, t, 1.0, 1.0);
        assert!((n - 1.0).abs() < 1e-12);
        // Higher modes are colder.
        assert!(planck_occupancy(2, 1.0, t, 1.0, 1.0) < n);
    }

    #[test]
    fn spectrum_shape_and_tail() {
        let inputs = benchmark_inputs(1.0, 0.5);
        let spec = spectrum(1, 1.0, &inputs, 16).unwrap();
        assert_eq!(spec.expected.len(), 16);
        assert_eq!(spec.expected[0], (1, 1.0));
        assert!(spec.expected[1].1 > spec.expected[2].1);
        assert!(spec.expected.iter().all(|(_, v)| *v >= 0.0));
        assert!(spec.tail_bound > 0.0);

        let mut buf = Vec::new();
        spec.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("k,n,expected_number\n1,1,1.0\n"));
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(RateInputs::new(0.0, 1.0, 1.0, 1.0, 0.5, 10.0, 1.0).is_err());
        assert!(RateInputs::new(1.0, 1.0, -1.0, 1.0, 0.5, 10.0, 1.0).is_err());
        assert!(RateInputs::new(1.0, 1.0, 1.0, 1.0, 0.5, 0.0, 1.0).is_err());
        assert!(ModePair::new(0, 1, 1.0).is_err());
        assert!(ModePair::new(1, 1, -0.5).is_err());
    }
}
