//! Conductivity ceilings from the second law: wall reflectivity and photon
//! absorption for a finite-conductivity cavity, closed-form upper limits in
//! the general / fast / slow relaxation regimes, and a fixed-point solve
//! closing the loop between the field relaxation rate and the reflectivity
//! it presupposes. All bound magnitudes are carried in signed-log10 form;
//! realistic scenarios overflow f64 by thousands of decades.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::logdomain::LogVal;
use crate::photons::{total_creation_rate, total_rate_bracket, RateInputs};
use crate::scenario::ScenarioConfig;
use crate::thermal::{pressure_diff_variance, relaxation_rate_from_deficit};

/// Scan bracket for the self-consistent solve, in log10 of conductivity.
const SCAN_LO: f64 = -10.0;
const SCAN_HI: f64 = 300.0;
const SCAN_POINTS: usize = 124;
const BISECTION_TOL: f64 = 1e-12;
const MAX_BISECTIONS: usize = 200;

/// Below this, 1 − R^f is evaluated as f·(1−R); the two agree to O(1e-12)
/// there and the linear form stays exact when f·(1−R) underflows the
/// direct exponential.
const ABSORPTION_SERIES_CUTOFF: f64 = 1e-6;

/// Wall reflectivity R = max(0, 1 − 2√(2ωε₀/σ_c)). Monotone increasing in
/// σ_c; the clamp floors poor conductors at R = 0.
pub fn reflectivity(
    mode_frequency: f64,
    conductivity: f64,
    vacuum_permittivity: f64,
) -> Result<f64> {
    check_probe(mode_frequency, conductivity, vacuum_permittivity)?;
    Ok((1.0 - 2.0 * (2.0 * mode_frequency * vacuum_permittivity / conductivity).sqrt()).max(0.0))
}

/// Reflectivity deficit 1 − R = min(1, 2√(2ωε₀/σ_c)), carried directly.
/// Good conductors sit so close to R = 1 that the deficit is invisible in
/// f64 through `reflectivity`; every downstream formula consumes this form.
pub fn reflectivity_deficit(
    mode_frequency: f64,
    conductivity: f64,
    vacuum_permittivity: f64,
) -> Result<f64> {
    check_probe(mode_frequency, conductivity, vacuum_permittivity)?;
    Ok((2.0 * (2.0 * mode_frequency * vacuum_permittivity / conductivity).sqrt()).min(1.0))
}

fn check_probe(mode_frequency: f64, conductivity: f64, vacuum_permittivity: f64) -> Result<()> {
    for (name, value) in [
        ("mode_frequency", mode_frequency),
        ("conductivity", conductivity),
        ("vacuum_permittivity", vacuum_permittivity),
    ] {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NonPositiveInput { name, value });
        }
    }
    Ok(())
}

/// Conductor probed at a fixed frequency, with its derived reflectivity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaterialModel {
    /// S·m⁻¹
    pub conductivity: f64,
    /// rad·s⁻¹
    pub probe_frequency: f64,
    /// Clamped to [0, 1].
    pub reflectivity: f64,
    /// 1 − R before the f64 value saturates at R = 1.
    pub deficit: f64,
}

impl MaterialModel {
    pub fn new(
        conductivity: f64,
        probe_frequency: f64,
        vacuum_permittivity: f64,
    ) -> Result<Self> {
        let deficit = reflectivity_deficit(probe_frequency, conductivity, vacuum_permittivity)?;
        Ok(Self {
            conductivity,
            probe_frequency,
            reflectivity: reflectivity(probe_frequency, conductivity, vacuum_permittivity)?,
            deficit,
        })
    }
}

/// Photon absorption per unit time after f = c/l wall encounters:
/// 1 − R^f, via 1 − exp(f·ln R), with the linear form f·(1−R) below the
/// series cutoff.
pub fn absorption_rate(reflectivity: f64, light_speed: f64, folding_length: f64) -> Result<f64> {
    if !(light_speed.is_finite() && light_speed > 0.0) {
        return Err(Error::NonPositiveInput { name: "light_speed", value: light_speed });
    }
    if !(folding_length.is_finite() && folding_length > 0.0) {
        return Err(Error::NonPositiveInput { name: "folding_length", value: folding_length });
    }
    if !(0.0..=1.0).contains(&reflectivity) {
        return Err(Error::ReflectivityOutOfRange(reflectivity));
    }
    absorption_rate_from_deficit(1.0 - reflectivity, light_speed / folding_length)
}

/// `absorption_rate` expressed through the deficit 1 − R, the form that
/// stays meaningful when R itself rounds to 1.
pub fn absorption_rate_from_deficit(deficit: f64, foldings: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&deficit) {
        return Err(Error::ReflectivityOutOfRange(1.0 - deficit));
    }
    if !(foldings.is_finite() && foldings > 0.0) {
        return Err(Error::NonPositiveInput { name: "foldings", value: foldings });
    }
    let linear = foldings * deficit;
    if linear < ABSORPTION_SERIES_CUTOFF {
        return Ok(linear);
    }
    Ok(-f64::exp_m1(foldings * f64::ln_1p(-deficit)))
}

/// Which closed-form limit produced a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundRegime {
    General,
    FastRelaxation,
    SlowRelaxation,
}

impl BoundRegime {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundRegime::General => "GENERAL",
            BoundRegime::FastRelaxation => "FAST_RELAXATION",
            BoundRegime::SlowRelaxation => "SLOW_RELAXATION",
        }
    }
}

impl std::fmt::Display for BoundRegime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Everything the bound formulas consume, decoupled from the full scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundInputs {
    /// rad·s⁻¹; probe frequency ω of the wall reflectivity.
    pub mode_frequency: f64,
    /// F·m⁻¹
    pub vacuum_permittivity: f64,
    /// m·s⁻¹
    pub light_speed: f64,
    /// m; photon path length per wall encounter, f = c/(this).
    pub folding_length: f64,
    /// m; cavity length entering the relaxation-rate model.
    pub cavity_length: f64,
    /// m; plate displacement x₀.
    pub displacement: f64,
    /// m²·kg⁻¹; coupling s.
    pub coupling: f64,
    /// Pa²; pressure-difference variance σ_P².
    pub variance: f64,
    /// s⁻¹; γ.
    pub damping: f64,
    /// s⁻¹; λ. Ignored by the slow form; overwritten per probe by the
    /// self-consistent solve.
    pub noise_rate: f64,
    /// s; motion duration t₁.
    pub duration: f64,
}

impl BoundInputs {
    /// Validates field ranges; use on literals before handing the struct to
    /// any bound operation.
    pub fn validated(self) -> Result<Self> {
        let all = [
            ("mode_frequency", self.mode_frequency),
            ("vacuum_permittivity", self.vacuum_permittivity),
            ("light_speed", self.light_speed),
            ("folding_length", self.folding_length),
            ("cavity_length", self.cavity_length),
            ("displacement", self.displacement),
            ("coupling", self.coupling),
            ("variance", self.variance),
            ("damping", self.damping),
            ("noise_rate", self.noise_rate),
            ("duration", self.duration),
        ];
        for (name, value) in all {
            if !value.is_finite() {
                return Err(Error::NonPhysicalParams(format!(
                    "{name} must be finite, got {value}"
                )));
            }
        }
        for (name, value) in
            [("variance", self.variance), ("damping", self.damping), ("noise_rate", self.noise_rate)]
        {
            if value < 0.0 {
                return Err(Error::NonPhysicalParams(format!(
                    "{name} must be non-negative, got {value}"
                )));
            }
        }
        for (name, value) in [
            ("mode_frequency", self.mode_frequency),
            ("vacuum_permittivity", self.vacuum_permittivity),
            ("light_speed", self.light_speed),
            ("folding_length", self.folding_length),
            ("cavity_length", self.cavity_length),
            ("displacement", self.displacement),
            ("duration", self.duration),
        ] {
            if value <= 0.0 {
                return Err(Error::NonPhysicalParams(format!(
                    "{name} must be positive, got {value}"
                )));
            }
        }
        Ok(self)
    }

    /// Requires a numeric noise rate; self-consistent scenarios go through
    /// `from_scenario_with_rate` and the fixed-point solve instead.
    pub fn from_scenario(config: &ScenarioConfig) -> Result<Self> {
        Self::from_scenario_with_rate(config, config.noise_rate.numeric()?)
    }

    /// Same extraction with the noise rate imposed, for flows that resolve
    /// λ outside the scenario (fixed point, sweeps).
    pub fn from_scenario_with_rate(config: &ScenarioConfig, noise_rate: f64) -> Result<Self> {
        let variance = match config.noise_variance_override {
            Some(v) => v,
            None => pressure_diff_variance(
                config.thermal.temperature,
                config.geometry.volume(),
                &config.constants,
            )?,
        };
        BoundInputs {
            mode_frequency: config.mode_frequency,
            vacuum_permittivity: config.constants.vacuum_permittivity,
            light_speed: config.constants.light_speed,
            folding_length: config.folding_length,
            cavity_length: config.geometry.lx,
            displacement: config.motion.final_position,
            coupling: config.coupling(),
            variance,
            damping: config.damping(),
            noise_rate,
            duration: config.motion.duration,
        }
        .validated()
    }

    /// Folding count per unit time, f = c/l.
    pub fn foldings(&self) -> f64 {
        self.light_speed / self.folding_length
    }

    pub fn with_noise_rate(mut self, noise_rate: f64) -> Self {
        self.noise_rate = noise_rate;
        self
    }

    /// The subset the photon-rate formulas consume. Field ranges were
    /// already validated here, a superset of the rate-side checks.
    pub fn rate_inputs(&self) -> RateInputs {
        RateInputs {
            displacement: self.displacement,
            coupling: self.coupling,
            variance: self.variance,
            damping: self.damping,
            noise_rate: self.noise_rate,
            duration: self.duration,
            light_speed: self.light_speed,
        }
    }
}

/// Scan and bisection record of a self-consistent solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointTrace {
    /// (log10 σ probe, log10 bound at that probe), ascending in σ.
    pub samples: Vec<(f64, f64)>,
    pub iterations: usize,
}

/// A conductivity ceiling, in log10 of S·m⁻¹.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundResult {
    pub log10_sigma_limit: f64,
    /// The same limit as a signed-log10 value.
    pub limit: LogVal,
    pub regime: BoundRegime,
    pub inputs: BoundInputs,
    /// True when the limit's magnitude cannot be represented as f64.
    pub exceeds_f64: bool,
    pub warnings: Vec<String>,
    /// Present only for self-consistent solves.
    pub fixed_point: Option<FixedPointTrace>,
}

fn check_bound_inputs(inputs: &BoundInputs) -> Result<()> {
    if inputs.variance <= 0.0 {
        return Err(Error::NonPositiveInput { name: "variance", value: inputs.variance });
    }
    if inputs.coupling == 0.0 {
        return Err(Error::NonPositiveInput { name: "coupling", value: inputs.coupling });
    }
    Ok(())
}

/// σ_c ≤ [√(8ωε₀)·f·t₁·c⁴π⁴ / (2x₀²s²σ_P²·bracket)]², assembled in log
/// domain from the regime's bracket.
fn assemble(
    inputs: &BoundInputs,
    bracket: LogVal,
    regime: BoundRegime,
    warnings: Vec<String>,
) -> BoundResult {
    let c4pi4 = LogVal::from_f64(inputs.light_speed)
        .square()
        .square()
        .mul(LogVal::from_log10(1, 4.0 * std::f64::consts::PI.log10()));
    let num = LogVal::from_f64(
        (8.0 * inputs.mode_frequency * inputs.vacuum_permittivity).sqrt(),
    )
    .mul(LogVal::from_f64(inputs.foldings()))
    .mul(LogVal::from_f64(inputs.duration))
    .mul(c4pi4);
    let den = LogVal::from_f64(2.0)
        .mul(LogVal::from_f64(inputs.displacement).square())
        .mul(LogVal::from_f64(inputs.coupling).square())
        .mul(LogVal::from_f64(inputs.variance))
        .mul(bracket);
    let limit = num.div(den).square();
    BoundResult {
        log10_sigma_limit: limit.log10_abs(),
        exceeds_f64: limit.exceeds_f64(),
        limit,
        regime,
        inputs: *inputs,
        warnings,
        fixed_point: None,
    }
}

/// Upper conductivity limit with the full damping/noise bracket
/// γ²/(λ²−γ²)·(e^{(λ−γ)t₁}−1) + 5/4 — the same factor the total creation
/// rate carries, so the second-law comparison closes exactly.
pub fn bound_general(inputs: &BoundInputs) -> Result<BoundResult> {
    check_bound_inputs(inputs)?;
    let bracket = total_rate_bracket(inputs.damping, inputs.noise_rate, inputs.duration);
    Ok(assemble(inputs, bracket, BoundRegime::General, inputs.rate_inputs().proviso_warnings()))
}

/// λ ≫ γ limit, bracket γ²/λ²·e^{λt₁} + 5/4. Warns when the inputs sit
/// outside that regime.
pub fn bound_fast_relaxation(inputs: &BoundInputs) -> Result<BoundResult> {
    check_bound_inputs(inputs)?;
    if inputs.noise_rate <= 0.0 {
        return Err(Error::NonPositiveInput { name: "noise_rate", value: inputs.noise_rate });
    }
    let mut warnings = inputs.rate_inputs().proviso_warnings();
    if inputs.noise_rate <= inputs.damping {
        warnings.push(format!(
            "fast-relaxation form assumes noise_rate > damping; got noise_rate = {} <= damping = {}",
            inputs.noise_rate, inputs.damping
        ));
    }
    let ratio = inputs.damping / inputs.noise_rate;
    let bracket = LogVal::from_f64(ratio * ratio)
        .mul(LogVal::exp(inputs.noise_rate * inputs.duration))
        .add(LogVal::from_f64(1.25));
    Ok(assemble(inputs, bracket, BoundRegime::FastRelaxation, warnings))
}

/// λ ≪ γ limit; the bracket collapses to 9/4, giving the printed 4/9
/// prefactor form. Independent of the noise rate.
pub fn bound_slow_relaxation(inputs: &BoundInputs) -> Result<BoundResult> {
    check_bound_inputs(inputs)?;
    let mut warnings = inputs.rate_inputs().proviso_warnings();
    if inputs.noise_rate >= inputs.damping {
        warnings.push(format!(
            "slow-relaxation form assumes noise_rate < damping; got noise_rate = {} >= damping = {}",
            inputs.noise_rate, inputs.damping
        ));
    }
    Ok(assemble(inputs, LogVal::from_f64(2.25), BoundRegime::SlowRelaxation, warnings))
}

/// Bisects for the outermost x with curve(x) = x on [lo, hi], scanning
/// n_scan intervals from the top so the largest self-consistent value wins
/// when the excess curve(x) − x changes sign more than once. Returns the
/// fixed point and the scan/iteration trace; without a sign change the
/// error carries the sampled curve.
pub fn find_fixed_point(
    curve: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    n_scan: usize,
    tol: f64,
    max_iter: usize,
) -> Result<(f64, FixedPointTrace)> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) || n_scan < 1 {
        return Err(Error::InvalidSpec(format!(
            "fixed-point scan needs a finite bracket and at least one interval, got [{lo}, {hi}] with {n_scan}"
        )));
    }
    let xs: Vec<f64> =
        (0..=n_scan).map(|i| lo + (hi - lo) * i as f64 / n_scan as f64).collect();
    let samples: Vec<(f64, f64)> = xs.iter().map(|&x| (x, curve(x))).collect();
    let excess = |i: usize| samples[i].1 - samples[i].0;

    let mut bracket = None;
    for i in (1..=n_scan).rev() {
        if excess(i - 1) > 0.0 && excess(i) <= 0.0 {
            bracket = Some((xs[i - 1], xs[i]));
            break;
        }
    }
    let Some((mut a, mut b)) = bracket else {
        return Err(Error::NoFixedPoint { samples });
    };

    let mut iterations = 0usize;
    while b - a > tol {
        if iterations >= max_iter {
            return Err(Error::MaxIterations(max_iter));
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if curve(mid) - mid > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
        iterations += 1;
    }
    Ok((0.5 * (a + b), FixedPointTrace { samples, iterations }))
}

/// Closes the loop λ = 3(1−R(σ))c/(2·cavity_length) against the chosen
/// bound form: seeks σ* with bound(λ(σ*)) = σ* by bracketing bisection in
/// log10 σ over [−10, 300]. The result echoes λ(σ*) in its inputs and
/// carries the scan trace.
pub fn self_consistent_bound(inputs: &BoundInputs, regime: BoundRegime) -> Result<BoundResult> {
    check_bound_inputs(inputs)?;
    let deficit_scale =
        2.0 * (2.0 * inputs.mode_frequency * inputs.vacuum_permittivity).sqrt();
    let rate_at = |x: f64| {
        let deficit = (deficit_scale * 10f64.powf(-0.5 * x)).min(1.0);
        relaxation_rate_from_deficit(deficit, inputs.cavity_length, inputs.light_speed)
    };
    let bound_at = |rate: f64| -> Result<BoundResult> {
        let probe = inputs.with_noise_rate(rate);
        match regime {
            BoundRegime::General => bound_general(&probe),
            BoundRegime::FastRelaxation => bound_fast_relaxation(&probe),
            BoundRegime::SlowRelaxation => bound_slow_relaxation(&probe),
        }
    };
    let curve =
        |x: f64| bound_at(rate_at(x)).map_or(f64::NAN, |result| result.log10_sigma_limit);

    let (x_star, trace) =
        find_fixed_point(curve, SCAN_LO, SCAN_HI, SCAN_POINTS, BISECTION_TOL, MAX_BISECTIONS)?;
    let mut result = bound_at(rate_at(x_star))?;
    // bound(λ(σ*)) equals σ* to bisection tolerance; report the fixed point
    // itself so the echoed limit and the probed conductivity agree.
    result.log10_sigma_limit = x_star;
    result.limit = LogVal::from_log10(1, x_star);
    result.exceeds_f64 = result.limit.exceeds_f64();
    result.fixed_point = Some(trace);
    Ok(result)
}

/// Verdict of absorption ≥ creation at one probed conductivity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SecondLawReport {
    /// S·m⁻¹
    pub conductivity: f64,
    /// Clamped R at the probe frequency.
    pub reflectivity: f64,
    /// 1 − R carried directly; R alone saturates at 1 in f64 for good
    /// conductors.
    pub reflectivity_deficit: f64,
    /// Photons absorbed per unit time, 1 − R^f.
    pub absorption: LogVal,
    /// Photons created per unit time (closed-form total rate).
    pub creation: LogVal,
    pub satisfied: bool,
}

/// Compares the wall absorption rate against the photon creation rate at
/// the given conductivity, in log domain.
pub fn second_law_check(inputs: &BoundInputs, conductivity: f64) -> Result<SecondLawReport> {
    let deficit =
        reflectivity_deficit(inputs.mode_frequency, conductivity, inputs.vacuum_permittivity)?;
    let absorption =
        LogVal::from_f64(absorption_rate_from_deficit(deficit, inputs.foldings())?);
    let creation = total_creation_rate(&inputs.rate_inputs()).total;
    Ok(SecondLawReport {
        conductivity,
        reflectivity: 1.0 - deficit,
        reflectivity_deficit: deficit,
        absorption,
        creation,
        satisfied: absorption.cmp_value(&creation) != std::cmp::Ordering::Less,
    })
}
