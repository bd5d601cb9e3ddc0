//! Plate dynamics under pressure-difference noise: trajectory integration,
//! closed-form velocity/acceleration correlation formulas, and independent
//! covariance oracles computed by adaptive quadrature.
//!
//! Two analytic layers coexist deliberately. The *closed-form* functions
//! evaluate the published correlation expressions verbatim; they assume
//! ordered times and drop velocity–noise cross terms. The *quadrature*
//! functions compute the true covariances of the model ẍ + γẋ = s·ΔP with
//! the symmetric noise kernel, including all cross terms. Monte Carlo
//! validation targets the quadrature layer; the closed forms are checked
//! for internal consistency and their deviation from the oracle is
//! reported, never asserted to vanish.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_with_splits};
use crate::scenario::ScenarioConfig;
use crate::thermal::{scenario_noise_params, NoiseMetadata, NoiseParams, NoisePath};

/// Relative |γ−λ| gap below which 1/(γ²−λ²) forms lose all precision and
/// callers must use the `*_degenerate` limit branches.
pub const DEGENERACY_THRESHOLD: f64 = 1e-9;

/// Damping, coupling, initial velocity, and the driving-noise parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DynamicsParams {
    /// s⁻¹; γ ≥ 0.
    pub damping: f64,
    /// m²·kg⁻¹; pressure-to-acceleration coupling s.
    pub coupling: f64,
    /// m·s⁻¹; ẋ(0).
    pub initial_velocity: f64,
    pub noise: NoiseParams,
}

impl DynamicsParams {
    pub fn new(
        damping: f64,
        coupling: f64,
        initial_velocity: f64,
        noise: NoiseParams,
    ) -> Result<Self> {
        if !(damping.is_finite() && damping >= 0.0) {
            return Err(Error::NonPhysicalParams(format!(
                "damping must be finite and non-negative, got {damping}"
            )));
        }
        if !coupling.is_finite() || !initial_velocity.is_finite() {
            return Err(Error::NonPhysicalParams(format!(
                "coupling {coupling} and initial velocity {initial_velocity} must be finite"
            )));
        }
        Ok(Self { damping, coupling, initial_velocity, noise })
    }

    pub fn from_scenario(config: &ScenarioConfig) -> Result<Self> {
        Self::new(
            config.damping(),
            config.coupling(),
            config.initial_velocity,
            scenario_noise_params(config)?,
        )
    }

    /// True when γ and λ are too close for the 1/(γ²−λ²) closed forms.
    pub fn rates_degenerate(&self) -> bool {
        rates_degenerate(self.damping, self.noise.rate)
    }
}

/// Shared degeneracy test for γ vs λ.
pub fn rates_degenerate(damping: f64, noise_rate: f64) -> bool {
    if damping == 0.0 {
        return noise_rate == 0.0;
    }
    ((damping - noise_rate) / damping).abs() < DEGENERACY_THRESHOLD
}

fn require_nondegenerate(params: &DynamicsParams) -> Result<()> {
    if params.rates_degenerate() {
        Err(Error::DegenerateRates {
            damping: params.damping,
            noise_rate: params.noise.rate,
        })
    } else {
        Ok(())
    }
}

/// Plate state at one sample time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlateState {
    pub time: f64,
    pub position: f64,
    pub velocity: f64,
    pub acceleration: f64,
}

/// Uniformly sampled trajectory with the metadata of the noise path that
/// drove it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub dt: f64,
    pub states: Vec<PlateState>,
    pub noise: NoiseMetadata,
}

impl Trajectory {
    /// CSV export with header `t,x,v,a`.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,x,v,a")?;
        for s in &self.states {
            writeln!(out, "{:?},{:?},{:?},{:?}", s.time, s.position, s.velocity, s.acceleration)?;
        }
        Ok(())
    }
}

/// Integrates ẍ + γẋ = s·ΔP over a sampled noise path.
///
/// The velocity update is the exact response to a pressure held constant
/// over each step, v_{i+1} = v_i·e^{−γ·dt} + s·ΔP_i·(1−e^{−γ·dt})/γ, so a
/// noiseless decay is reproduced to machine precision at any dt. Position
/// accumulates by the trapezoid rule; acceleration is recorded as the
/// right-hand side −γv + s·ΔP at each sample.
pub fn integrate_plate(
    path: &NoisePath,
    params: &DynamicsParams,
    initial_position: f64,
) -> Result<Trajectory> {
    if path.samples.is_empty() {
        return Err(Error::EmptyPath);
    }
    let dt = path.dt;
    let gamma = params.damping;
    let s = params.coupling;
    let drift = (-gamma * dt).exp();
    // (1 − e^{−γ·dt})/γ, with the γ → 0 limit dt.
    let kick = if gamma == 0.0 { dt } else { -(-gamma * dt).exp_m1() / gamma };

    let mut states = Vec::with_capacity(path.samples.len());
    let mut v = params.initial_velocity;
    let mut x = initial_position;
    for (i, &dp) in path.samples.iter().enumerate() {
        states.push(PlateState {
            time: i as f64 * dt,
            position: x,
            velocity: v,
            acceleration: -gamma * v + s * dp,
        });
        let v_next = v * drift + s * dp * kick;
        x += 0.5 * dt * (v + v_next);
        v = v_next;
    }
    Ok(Trajectory { dt, states, noise: path.metadata() })
}

/// Evaluates the solution formula ẋ(t) = ẋ(0)e^{−γt} + e^{−γt}∫₀ᵗ s·ΔP(ξ)e^{γξ}dξ
/// with rectangle-rule quadrature over the sampled path, kept in damped
/// form so no e^{γt} factor is ever materialized. Differs from
/// [`integrate_plate`] at O(dt); the weak-convergence acceptance test
/// measures exactly that gap.
pub fn exact_velocity_from_path(path: &NoisePath, params: &DynamicsParams) -> Result<Vec<f64>> {
    if path.samples.is_empty() {
        return Err(Error::EmptyPath);
    }
    let decay = (-params.damping * path.dt).exp();
    let mut velocities = Vec::with_capacity(path.samples.len());
    let mut v = params.initial_velocity;
    velocities.push(v);
    for &dp in &path.samples[..path.samples.len() - 1] {
        v = (v + params.coupling * dp * path.dt) * decay;
        velocities.push(v);
    }
    Ok(velocities)
}

/// Published closed form of the velocity correlation:
/// ẋ(0)²e^{−γ(t+t′)} + s²σ_P²·[(e^{λt}−e^{−γt})/(γ+λ)]·[(e^{−λt′}−e^{−γt′})/(γ−λ)].
///
/// Asymmetric in (t, t′) as printed; grows without bound in t when λ > γ.
pub fn velocity_correlation_closed_form(
    t: f64,
    t_prime: f64,
    params: &DynamicsParams,
) -> Result<f64> {
    require_nondegenerate(params)?;
    let gamma = params.damping;
    let lambda = params.noise.rate;
    let s2_var = params.coupling * params.coupling * params.noise.variance;
    let first = ((lambda * t).exp() - (-gamma * t).exp()) / (gamma + lambda);
    let second = ((-lambda * t_prime).exp() - (-gamma * t_prime).exp()) / (gamma - lambda);
    Ok(initial_velocity_term(params, t, t_prime) + s2_var * first * second)
}

/// λ → γ limit of [`velocity_correlation_closed_form`]:
/// ẋ(0)²e^{−γ(t+t′)} + s²σ_P²·(sinh(γt)/γ)·t′e^{−γt′}, with sinh(γt)/γ → t
/// as γ → 0.
pub fn velocity_correlation_degenerate(t: f64, t_prime: f64, params: &DynamicsParams) -> f64 {
    let gamma = params.damping;
    let s2_var = params.coupling * params.coupling * params.noise.variance;
    let growth = if gamma == 0.0 { t } else { (gamma * t).sinh() / gamma };
    initial_velocity_term(params, t, t_prime)
        + s2_var * growth * t_prime * (-gamma * t_prime).exp()
}

fn initial_velocity_term(params: &DynamicsParams, t: f64, t_prime: f64) -> f64 {
    let v0 = params.initial_velocity;
    v0 * v0 * (-params.damping * (t + t_prime)).exp()
}

/// Published closed form of the acceleration correlation:
/// γ²·velocity form + s²·σ_P²e^{−λ|t−t′|}. The `long_time` flag drops the
/// initial-velocity term (the printed long-time reduction).
pub fn acceleration_correlation_closed_form(
    t: f64,
    t_prime: f64,
    long_time: bool,
    params: &DynamicsParams,
) -> Result<f64> {
    require_nondegenerate(params)?;
    let gamma = params.damping;
    let mut value = gamma * gamma * velocity_correlation_closed_form(t, t_prime, params)?;
    if long_time {
        value -= gamma * gamma * initial_velocity_term(params, t, t_prime);
    }
    Ok(value + noise_term(params, t, t_prime))
}

/// λ → γ limit of [`acceleration_correlation_closed_form`].
pub fn acceleration_correlation_degenerate(
    t: f64,
    t_prime: f64,
    long_time: bool,
    params: &DynamicsParams,
) -> f64 {
    let gamma = params.damping;
    let mut value = gamma * gamma * velocity_correlation_degenerate(t, t_prime, params);
    if long_time {
        value -= gamma * gamma * initial_velocity_term(params, t, t_prime);
    }
    value + noise_term(params, t, t_prime)
}

fn noise_term(params: &DynamicsParams, t: f64, t_prime: f64) -> f64 {
    params.coupling
        * params.coupling
        * params.noise.variance
        * (-params.noise.rate * (t_prime - t).abs()).exp()
}

/// Published equal-time acceleration variance (initial velocity dropped):
/// s²σ_P²·[γ²(1−e^{(λ−γ)t}−e^{−(λ+γ)t}+e^{−2γt})/(γ²−λ²) + 1].
pub fn acceleration_variance_closed_form(t: f64, params: &DynamicsParams) -> Result<f64> {
    require_nondegenerate(params)?;
    let gamma = params.damping;
    let lambda = params.noise.rate;
    let s2_var = params.coupling * params.coupling * params.noise.variance;
    let bracket = 1.0 - ((lambda - gamma) * t).exp() - (-(lambda + gamma) * t).exp()
        + (-2.0 * gamma * t).exp();
    Ok(s2_var * (gamma * gamma * bracket / (gamma * gamma - lambda * lambda) + 1.0))
}

/// λ → γ limit of [`acceleration_variance_closed_form`]:
/// s²σ_P²·[γt(1−e^{−2γt})/2 + 1].
pub fn acceleration_variance_degenerate(t: f64, params: &DynamicsParams) -> f64 {
    let gamma = params.damping;
    let s2_var = params.coupling * params.coupling * params.noise.variance;
    let neg_two_gt = -2.0 * gamma * t;
    s2_var * (0.5 * gamma * t * -neg_two_gt.exp_m1() + 1.0)
}

const OUTER_REL_TOL: f64 = 1e-8;
const INNER_REL_TOL: f64 = 1e-11;

/// True covariance ⟨ẋ(t)ẋ(t′)⟩ of the model with the symmetric noise
/// kernel, by nested adaptive quadrature (requested relative tolerance
/// 1e-8). Symmetric in (t, t′) by construction.
///
/// In damped variables u = t−ξ, w = t′−η the integrand
/// e^{−γu}e^{−γw}e^{−λ|(t−t′)−(u−w)|} never exceeds 1, so arbitrarily
/// large γt is safe.
pub fn velocity_covariance_quadrature(t: f64, t_prime: f64, params: &DynamicsParams) -> Result<f64> {
    check_oracle_times(t, t_prime)?;
    // Symmetric: order so t ≤ t′, which keeps the inner kink inside the
    // inner domain for every outer point.
    let (t, t_prime) = if t <= t_prime { (t, t_prime) } else { (t_prime, t) };
    let gamma = params.damping;
    let lambda = params.noise.rate;
    let s2_var = params.coupling * params.coupling * params.noise.variance;

    let init = initial_velocity_term(params, t, t_prime);
    if s2_var == 0.0 || t == 0.0 {
        return Ok(init);
    }

    let offset = t_prime - t;
    let outer = integrate(
        |u| {
            let kink = u + offset;
            let inner = integrate_with_splits(
                |w| (-gamma * w).exp() * (-lambda * (w - kink).abs()).exp(),
                &[0.0, kink.min(t_prime), t_prime],
                INNER_REL_TOL,
                0.0,
            );
            match inner {
                Ok(r) => (-gamma * u).exp() * r.value,
                Err(_) => f64::NAN,
            }
        },
        0.0,
        t,
        OUTER_REL_TOL,
        0.0,
    )?;
    Ok(init + s2_var * outer.value)
}

/// True cross-covariance ⟨ẋ(t)ΔP(t′)⟩ = s·σ_P²·∫₀ᵗ e^{−γu}e^{−λ|t−u−t′|}du,
/// split at the kink u = t−t′ when it falls inside the range. Not
/// symmetric: the noise after time t never influences ẋ(t), the noise
/// before it does.
pub fn velocity_pressure_covariance_quadrature(
    t: f64,
    t_prime: f64,
    params: &DynamicsParams,
) -> Result<f64> {
    check_oracle_times(t, t_prime)?;
    let gamma = params.damping;
    let lambda = params.noise.rate;
    if params.noise.variance == 0.0 || t == 0.0 {
        return Ok(0.0);
    }
    let kink = t - t_prime;
    let points: Vec<f64> =
        if kink > 0.0 && kink < t { vec![0.0, kink, t] } else { vec![0.0, t] };
    let result = integrate_with_splits(
        |u| (-gamma * u).exp() * (-lambda * (t - u - t_prime).abs()).exp(),
        &points,
        INNER_REL_TOL,
        0.0,
    )?;
    Ok(params.coupling * params.noise.variance * result.value)
}

/// True covariance ⟨ẍ(t)ẍ(t′)⟩ assembled from ẍ = −γẋ + s·ΔP:
/// γ²⟨ẋẋ′⟩ − γs(⟨ẋ(t)ΔP(t′)⟩ + ⟨ΔP(t)ẋ(t′)⟩) + s²σ_P²e^{−λ|t−t′|}.
/// The cross terms the published form omits are exactly the middle pair.
pub fn acceleration_covariance_quadrature(
    t: f64,
    t_prime: f64,
    params: &DynamicsParams,
) -> Result<f64> {
    let gamma = params.damping;
    let s = params.coupling;
    let vv = velocity_covariance_quadrature(t, t_prime, params)?;
    let vp = velocity_pressure_covariance_quadrature(t, t_prime, params)?;
    let pv = velocity_pressure_covariance_quadrature(t_prime, t, params)?;
    Ok(gamma * gamma * vv - gamma * s * (vp + pv) + noise_term(params, t, t_prime))
}

fn check_oracle_times(t: f64, t_prime: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0 && t_prime.is_finite() && t_prime >= 0.0) {
        return Err(Error::NonPhysicalParams(format!(
            "covariance times must be finite and non-negative, got ({t}, {t_prime})"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermal::sample_noise_path;

    fn params(damping: f64, rate: f64, initial_velocity: f64) -> DynamicsParams {
        DynamicsParams::new(damping, 1.0, initial_velocity, NoiseParams::new(1.0, rate).unwrap())
            .unwrap()
    }

    fn zero_noise_path(dt: f64, n: usize) -> NoisePath {
        let noise = NoiseParams::new(0.0, 0.5).unwrap();
        sample_noise_path(&noise, dt, n as u64, 1).unwrap()
    }

    #[test]
    fn noiseless_decay_is_exact() {
        let p = DynamicsParams::new(1.3, 1.0, 2.0, NoiseParams::new(0.0, 0.5).unwrap()).unwrap();
        let traj = integrate_plate(&zero_noise_path(0.05, 200), &p, 0.0).unwrap();
        for s in &traj.states {
            let expected = 2.0 * (-1.3 * s.time).exp();
            assert!((s.velocity - expected).abs() <= 1e-9 * expected.abs().max(1e-30));
        }
    }

    #[test]
    fn undamped_constant_pressure_is_ballistic() {
        let noise = NoiseParams::new(0.0, 0.0).unwrap();
        let mut path = sample_noise_path(&NoiseParams::new(0.0, 0.5).unwrap(), 0.1, 50, 1).unwrap();
        path.params = noise;
        for dp in &mut path.samples {
            *dp = 0.7;
        }
        let p = DynamicsParams::new(0.0, 2.0, 0.0, noise).unwrap();
        let traj = integrate_plate(&path, &p, 0.0).unwrap();
        for s in &traj.states {
            let expected = 2.0 * 0.7 * s.time;
            assert!((s.velocity - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn recorded_acceleration_satisfies_the_equation() {
        let noise = NoiseParams::new(1.0, 0.5).unwrap();
        let path = sample_noise_path(&noise, 0.01, 100, 3).unwrap();
        let p = DynamicsParams::new(1.0, 1.0, 0.0, noise).unwrap();
        let traj = integrate_plate(&path, &p, 0.0).unwrap();
        for (state, dp) in traj.states.iter().zip(&path.samples) {
            assert_eq!(state.acceleration, -state.velocity + dp);
        }
    }

    #[test]
    fn solution_formula_reproduces_noiseless_decay() {
        let p = DynamicsParams::new(0.8, 1.0, 3.0, NoiseParams::new(0.0, 0.5).unwrap()).unwrap();
        let velocities = exact_velocity_from_path(&zero_noise_path(0.1, 100), &p).unwrap();
        for (j, v) in velocities.iter().enumerate() {
            let expected = 3.0 * (-0.8 * (j as f64 * 0.1)).exp();
            assert!((v - expected).abs() <= 1e-12 * expected.max(1e-30));
        }
    }

    #[test]
    fn single_rectangle_response() {
        let noise = NoiseParams::new(1.0, 0.5).unwrap();
        let mut path = sample_noise_path(&noise, 0.25, 5, 1).unwrap();
        path.samples = vec![0.7, 0.0, 0.0, 0.0, 0.0];
        let p = DynamicsParams::new(1.1, 1.3, 0.0, noise).unwrap();
        let velocities = exact_velocity_from_path(&path, &p).unwrap();
        for (j, v) in velocities.iter().enumerate().skip(1) {
            let expected = 1.3 * 0.7 * 0.25 * (-1.1 * (j as f64 * 0.25)).exp();
            assert!((v - expected).abs() <= 1e-12 * expected);
        }
    }

    #[test]
    fn empty_path_rejected() {
        let noise = NoiseParams::new(1.0, 0.5).unwrap();
        let mut path = sample_noise_path(&noise, 0.1, 1, 1).unwrap();
        path.samples.clear();
        let p = params(1.0, 0.5, 0.0);
        assert!(matches!(integrate_plate(&path, &p, 0.0), Err(Error::EmptyPath)));
        assert!(matches!(exact_velocity_from_path(&path, &p), Err(Error::EmptyPath)));
    }

    #[test]
    fn velocity_closed_form_at_origin_and_zero_noise() {
        let p = params(1.0, 0.5, 2.0);
        assert!((velocity_correlation_closed_form(0.0, 0.0, &p).unwrap() - 4.0).abs() < 1e-15);
        let quiet = DynamicsParams::new(1.0, 1.0, 2.0, NoiseParams::new(0.0, 0.5).unwrap()).unwrap();
        let v = velocity_correlation_closed_form(2.0, 3.0, &quiet).unwrap();
        assert!((v - 4.0 * (-5.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn equal_time_velocity_form_matches_variance_identity() {
        // Bracket-product expansion against the printed equal-time variance.
        for (gamma, lambda, t) in [(1.0, 0.5, 2.0), (2.0, 0.25, 1.5), (0.5, 4.0, 3.0)] {
            let p = DynamicsParams::new(gamma, 1.0, 0.0, NoiseParams::new(1.0, lambda).unwrap())
                .unwrap();
            let lhs = gamma * gamma * velocity_correlation_closed_form(t, t, &p).unwrap()
                + p.coupling * p.coupling * p.noise.variance;
            let rhs = acceleration_variance_closed_form(t, &p).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs());
        }
    }

    #[test]
    fn degenerate_rates_rejected_and_limit_brackets() {
        let exact = params(1.0, 1.0, 0.0);
        assert!(matches!(
            velocity_correlation_closed_form(1.0, 2.0, &exact),
            Err(Error::DegenerateRates { .. })
        ));
        let limit = velocity_correlation_degenerate(1.0, 2.0, &exact);
        let below = velocity_correlation_closed_form(1.0, 2.0, &params(1.0, 1.0 - 1e-6, 0.0)).unwrap();
        let above = velocity_correlation_closed_form(1.0, 2.0, &params(1.0, 1.0 + 1e-6, 0.0)).unwrap();
        assert!((below - limit).abs() <= 1e-4 * limit.abs());
        assert!((above - limit).abs() <= 1e-4 * limit.abs());
        let slack = 1e-9 * limit.abs();
        assert!(limit >= below.min(above) - slack && limit <= below.max(above) + slack);
    }

    #[test]
    fn degenerate_acceleration_variance_brackets() {
        let t = 3.0;
        let limit = acceleration_variance_degenerate(t, &params(1.0, 1.0, 0.0));
        let below = acceleration_variance_closed_form(t, &params(1.0, 1.0 - 1e-6, 0.0)).unwrap();
        let above = acceleration_variance_closed_form(t, &params(1.0, 1.0 + 1e-6, 0.0)).unwrap();
        assert!((below - limit).abs() <= 1e-4 * limit.abs());
        assert!((above - limit).abs() <= 1e-4 * limit.abs());
    }

    #[test]
    fn frozen_degenerate_velocity_limit_is_undamped_product() {
        let p = params(0.0, 0.0, 1.5);
        let v = velocity_correlation_degenerate(2.0, 3.0, &p);
        assert!((v - (1.5 * 1.5 + 6.0)).abs() < 1e-12);
    }

    #[test]
    fn acceleration_closed_form_zero_noise() {
        let quiet = DynamicsParams::new(1.2, 1.0, 2.0, NoiseParams::new(0.0, 0.3).unwrap()).unwrap();
        let a = acceleration_correlation_closed_form(1.0, 2.0, false, &quiet).unwrap();
        let expected = 1.2 * 1.2 * 4.0 * (-1.2 * 3.0f64).exp();
        assert!((a - expected).abs() <= 1e-14 * expected);
        let long = acceleration_correlation_closed_form(1.0, 2.0, true, &quiet).unwrap();
        assert_eq!(long, 0.0);
    }

    #[test]
    fn published_variance_long_time_limit() {
        // t → ∞ with λ < γ: bracket → 1, variance → s²σ²(γ²/(γ²−λ²) + 1).
        let p = params(1.0, 0.5, 0.0);
        let v = acceleration_variance_closed_form(200.0, &p).unwrap();
        let expected = 1.0 / (1.0 - 0.25) + 1.0;
        assert!((v - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn velocity_oracle_matches_frozen_reference() {
        let p = params(1.0, 0.5, 0.0);
        let cases = [
            (10.0, 10.0, 0.6666658550494525733417),
            (5.0, 10.0, 0.1048898098598696677832),
            (1.0, 1.0, 0.3423234727440791732993),
        ];
        for (t, tp, expected) in cases {
            let v = velocity_covariance_quadrature(t, tp, &p).unwrap();
            assert!(
                (v - expected).abs() <= 1e-7 * expected,
                "Cvv({t},{tp}) = {v}, expected {expected}"
            );
        }
    }

    #[test]
    fn acceleration_oracle_matches_frozen_reference() {
        let p = params(1.0, 0.5, 0.0);
        let cases = [
            (10.0, 10.0, 0.3333329295858799091094),
            (5.0, 10.0, -0.02290184079255799235553),
        ];
        for (t, tp, expected) in cases {
            let a = acceleration_covariance_quadrature(t, tp, &p).unwrap();
            // The off-diagonal value is a small difference of O(0.1) pieces,
            // so the assembled tolerance is looser than the per-piece 1e-8.
            assert!(
                (a - expected).abs() <= 5e-7 * expected.abs(),
                "Caa({t},{tp}) = {a}, expected {expected}"
            );
        }
    }

    #[test]
    fn oracles_with_initial_velocity_match_frozen_reference() {
        let p = params(1.0, 0.5, 2.0);
        let vv = velocity_covariance_quadrature(2.0, 3.0, &p).unwrap();
        let expected_vv = 0.53919823774899224494319407082;
        assert!((vv - expected_vv).abs() <= 1e-7 * expected_vv);
        let aa = acceleration_covariance_quadrature(2.0, 3.0, &p).unwrap();
        let expected_aa = 0.0511617413305614217532294291629;
        assert!((aa - expected_aa).abs() <= 1e-6 * expected_aa);
    }

    #[test]
    fn oracle_symmetry_is_structural() {
        let p = params(1.0, 2.0, 0.5);
        let ab = velocity_covariance_quadrature(2.0, 5.0, &p).unwrap();
        let ba = velocity_covariance_quadrature(5.0, 2.0, &p).unwrap();
        assert_eq!(ab, ba);
        let aab = acceleration_covariance_quadrature(2.0, 5.0, &p).unwrap();
        let aba = acceleration_covariance_quadrature(5.0, 2.0, &p).unwrap();
        assert_eq!(aab, aba);
    }

    #[test]
    fn oracle_stationary_limits() {
        // t = t′ → ∞: ⟨ẋ²⟩ → s²σ²/(γ(γ+λ)), ⟨ẍ²⟩ → s²σ²λ/(γ+λ).
        let p = params(1.0, 0.5, 0.0);
        let vv = velocity_covariance_quadrature(40.0, 40.0, &p).unwrap();
        assert!((vv - 1.0 / 1.5).abs() < 1e-6);
        let aa = acceleration_covariance_quadrature(40.0, 40.0, &p).unwrap();
        assert!((aa - 0.5 / 1.5).abs() < 1e-6);
    }

    #[test]
    fn oracle_zero_noise_reduces_to_initial_term() {
        let quiet = DynamicsParams::new(1.0, 1.0, 2.0, NoiseParams::new(0.0, 0.5).unwrap()).unwrap();
        let vv = velocity_covariance_quadrature(1.0, 2.0, &quiet).unwrap();
        assert_eq!(vv, 4.0 * (-3.0f64).exp());
        let aa = acceleration_covariance_quadrature(1.0, 2.0, &quiet).unwrap();
        assert!((aa - 4.0 * (-3.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn cross_covariance_is_causal() {
        // Noise far in the future of t barely correlates with ẋ(t); noise
        // in the recent past correlates strongly.
        let p = params(1.0, 0.5, 0.0);
        let future = velocity_pressure_covariance_quadrature(1.0, 30.0, &p).unwrap();
        let past = velocity_pressure_covariance_quadrature(30.0, 29.5, &p).unwrap();
        assert!(future.abs() < 1e-6);
        assert!(past > 0.1);
    }

    #[test]
    fn invalid_params_rejected() {
        let noise = NoiseParams::new(1.0, 0.5).unwrap();
        assert!(DynamicsParams::new(-1.0, 1.0, 0.0, noise).is_err());
        assert!(DynamicsParams::new(1.0, f64::NAN, 0.0, noise).is_err());
        let p = params(1.0, 0.5, 0.0);
        assert!(velocity_covariance_quadrature(-1.0, 2.0, &p).is_err());
    }
}
