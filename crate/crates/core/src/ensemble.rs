//! Monte Carlo validation harness: runs trajectory ensembles on independent
//! RNG streams, estimates correlation functions with standard errors, and
//! issues statistical pass/fail comparisons against analytic references.
//! Reductions are deterministic pairwise sums, so results are identical
//! regardless of worker count.

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{
    acceleration_covariance_quadrature, acceleration_variance_closed_form, integrate_plate,
    velocity_correlation_closed_form, velocity_covariance_quadrature, DynamicsParams,
};
use crate::error::{Error, Result};
use crate::stats::mean_and_se;
use crate::thermal::{pressure_diff_correlation, sample_noise_path_stream, NoiseParams};

/// One ensemble run: dynamics, discretization, path count, seeding, and the
/// (t, t′) pairs whose samples are retained.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleSpec {
    pub dynamics: DynamicsParams,
    /// m; x(0), shared by every path.
    pub initial_position: f64,
    /// s
    pub dt: f64,
    pub n_steps: u64,
    pub n_paths: u64,
    pub seed: u64,
    /// Namespaces the RNG streams: path i draws on stream
    /// (stream_domain << 48) | i, so distinct domains never share a stream.
    pub stream_domain: u64,
    /// Times are snapped to the nearest step multiple of dt.
    pub lag_grid: Vec<(f64, f64)>,
}

impl EnsembleSpec {
    /// Validates counts and lag coverage; returns the sorted, deduplicated
    /// step indices the summaries must retain.
    pub fn validate(&self) -> Result<Vec<usize>> {
        if self.n_paths < 2 {
            return Err(Error::InvalidSpec(format!(
                "ensemble needs at least 2 paths for a standard error, got {}",
                self.n_paths
            )));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidStep(self.dt));
        }
        if self.n_steps < 1 {
            return Err(Error::EmptyPath);
        }
        if self.lag_grid.is_empty() {
            return Err(Error::InvalidSpec("lag grid must be nonempty".into()));
        }
        let horizon = (self.n_steps - 1) as f64 * self.dt;
        let mut indices = Vec::with_capacity(2 * self.lag_grid.len());
        for &(t, t_prime) in &self.lag_grid {
            for lag in [t, t_prime] {
                let step = (lag / self.dt).round();
                if !(lag.is_finite() && lag >= 0.0) || step >= self.n_steps as f64 {
                    return Err(Error::LagOutOfRange { lag, horizon });
                }
                indices.push(step as usize);
            }
        }
        indices.sort_unstable();
        indices.dedup();
        Ok(indices)
    }
}

/// Lag-grid samples of one path; positions are not retained.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathSummary {
    pub noise: Vec<f64>,
    pub velocity: Vec<f64>,
    pub acceleration: Vec<f64>,
}

/// All retained samples of an ensemble run, path-ordered.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleSummaries {
    pub spec: EnsembleSpec,
    /// Retained sample times, ascending; every PathSummary aligns with it.
    pub times: Vec<f64>,
    pub paths: Vec<PathSummary>,
}

/// Which sampled signal a correlation estimate refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Noise,
    Velocity,
    Acceleration,
}

impl Quantity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Quantity::Noise => "noise",
            Quantity::Velocity => "velocity",
            Quantity::Acceleration => "acceleration",
        }
    }
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Ensemble means of lagged products with their standard errors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationEstimate {
    pub quantity: Quantity,
    /// Snapped (t, t′) pairs actually evaluated.
    pub lags: Vec<(f64, f64)>,
    pub mean_products: Vec<f64>,
    /// Ensemble standard deviation of the product / √N.
    pub standard_errors: Vec<f64>,
    pub n_paths: u64,
    /// True where the ensemble spread vanished; z-scores there are exact
    /// equality checks rather than statistics.
    pub degenerate: Vec<bool>,
}

/// Per-lag z-scores of an estimate against a reference function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub quantity: Quantity,
    pub reference: String,
    pub lags: Vec<(f64, f64)>,
    pub estimates: Vec<f64>,
    pub standard_errors: Vec<f64>,
    pub references: Vec<f64>,
    pub z_scores: Vec<f64>,
    pub max_abs_z: f64,
    pub threshold: f64,
    pub passed: bool,
    pub note: Option<String>,
}

/// Runs N independent trajectories in parallel and keeps only the lag-grid
/// samples. Path i draws on RNG stream (stream_domain << 48) | i of the
/// base seed, so the result is reproducible path-by-path.
pub fn run_ensemble(spec: &EnsembleSpec) -> Result<EnsembleSummaries> {
    let indices = spec.validate()?;
    let times: Vec<f64> = indices.iter().map(|&i| i as f64 * spec.dt).collect();
    let paths = (0..spec.n_paths)
        .into_par_iter()
        .map(|path_index| {
            let stream = (spec.stream_domain << 48) | path_index;
            let path = sample_noise_path_stream(
                &spec.dynamics.noise,
                spec.dt,
                spec.n_steps,
                spec.seed,
                stream,
            )?;
            let trajectory = integrate_plate(&path, &spec.dynamics, spec.initial_position)?;
            Ok(PathSummary {
                noise: indices.iter().map(|&i| path.samples[i]).collect(),
                velocity: indices.iter().map(|&i| trajectory.states[i].velocity).collect(),
                acceleration: indices
                    .iter()
                    .map(|&i| trajectory.states[i].acceleration)
                    .collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EnsembleSummaries { spec: spec.clone(), times, paths })
}

fn time_position(summaries: &EnsembleSummaries, lag: f64) -> Result<usize> {
    let dt = summaries.spec.dt;
    summaries
        .times
        .iter()
        .position(|&u| (u - lag).abs() <= 0.5 * dt)
        .ok_or(Error::LagOutOfRange {
            lag,
            horizon: summaries.times.last().copied().unwrap_or(0.0),
        })
}

/// Ensemble mean and standard error of q(t)·q(t′) for each requested lag
/// pair. Lags must land on samples the run retained.
pub fn estimate_correlation(
    summaries: &EnsembleSummaries,
    quantity: Quantity,
    lags: &[(f64, f64)],
) -> Result<CorrelationEstimate> {
    if summaries.paths.len() < 2 {
        return Err(Error::InvalidSpec(format!(
            "correlation estimates need at least 2 paths, got {}",
            summaries.paths.len()
        )));
    }
    fn select(path: &PathSummary, quantity: Quantity) -> &[f64] {
        match quantity {
            Quantity::Noise => &path.noise,
            Quantity::Velocity => &path.velocity,
            Quantity::Acceleration => &path.acceleration,
        }
    }

    let mut snapped = Vec::with_capacity(lags.len());
    let mut mean_products = Vec::with_capacity(lags.len());
    let mut standard_errors = Vec::with_capacity(lags.len());
    let mut degenerate = Vec::with_capacity(lags.len());
    for &(t, t_prime) in lags {
        let i = time_position(summaries, t)?;
        let j = time_position(summaries, t_prime)?;
        let products: Vec<f64> = summaries
            .paths
            .iter()
            .map(|p| select(p, quantity)[i] * select(p, quantity)[j])
            .collect();
        let (mean, se) = mean_and_se(&products);
        snapped.push((summaries.times[i], summaries.times[j]));
        mean_products.push(mean);
        standard_errors.push(se);
        degenerate.push(se == 0.0);
    }
    Ok(CorrelationEstimate {
        quantity,
        lags: snapped,
        mean_products,
        standard_errors,
        n_paths: summaries.paths.len() as u64,
        degenerate,
    })
}

/// z-scores an estimate against reference values aligned with its lag grid.
/// Pass iff every |z| ≤ threshold; lags with zero standard error pass only
/// on exact equality.
pub fn compare(
    estimate: &CorrelationEstimate,
    reference_name: &str,
    reference_values: &[f64],
    threshold: f64,
) -> Result<ComparisonReport> {
    if reference_values.len() != estimate.lags.len() {
        return Err(Error::GridMismatch(format!(
            "reference supplies {} values for {} lags",
            reference_values.len(),
            estimate.lags.len()
        )));
    }
    let z_scores: Vec<f64> = estimate
        .mean_products
        .iter()
        .zip(&estimate.standard_errors)
        .zip(reference_values)
        .map(|((&mean, &se), &reference)| {
            if se > 0.0 {
                (mean - reference) / se
            } else if mean == reference {
                0.0
            } else {
                f64::INFINITY
            }
        })
        .collect();
    let max_abs_z = z_scores.iter().fold(0.0f64, |acc, z| acc.max(z.abs()));
    let note = (estimate.lags.len() > 1).then(|| {
        format!(
            "{} simultaneous z-tests; the threshold applies per lag without Bonferroni correction",
            estimate.lags.len()
        )
    });
    Ok(ComparisonReport {
        quantity: estimate.quantity,
        reference: reference_name.to_string(),
        lags: estimate.lags.clone(),
        estimates: estimate.mean_products.clone(),
        standard_errors: estimate.standard_errors.clone(),
        references: reference_values.to_vec(),
        z_scores,
        max_abs_z,
        threshold,
        passed: max_abs_z <= threshold,
        note,
    })
}

/// One row of an oracle-suite run: a Monte Carlo estimate lined up against
/// the published closed form and the independent quadrature oracle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSuiteRow {
    pub quantity: Quantity,
    pub noise_rate: f64,
    pub t: f64,
    pub t_prime: f64,
    pub closed_form_value: f64,
    pub oracle_value: f64,
    pub mc_value: f64,
    pub mc_stderr: f64,
    /// (mc − oracle) / stderr; the verdict scores against the oracle.
    pub z: f64,
    /// True when the standard error vanished (all products identical, e.g.
    /// zero variance); z is then 0 on exact agreement and ∞ otherwise.
    pub degenerate: bool,
}

/// z-score with the zero-standard-error convention of [`compare`].
fn score(mc_value: f64, reference: f64, mc_stderr: f64) -> (f64, bool) {
    if mc_stderr > 0.0 {
        ((mc_value - reference) / mc_stderr, false)
    } else if mc_value == reference {
        (0.0, true)
    } else {
        (f64::INFINITY, true)
    }
}

/// Verdict and rows of an oracle suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSuiteReport {
    pub rows: Vec<OracleSuiteRow>,
    pub n_paths: u64,
    pub dt: f64,
    pub threshold: f64,
    pub max_abs_z: f64,
    pub passed: bool,
}

impl OracleSuiteReport {
    /// CSV export with header
    /// `quantity,noise_rate,t,t_prime,closed_form_value,oracle_value,mc_value,mc_stderr,z,degenerate`.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(
            out,
            "quantity,noise_rate,t,t_prime,closed_form_value,oracle_value,mc_value,mc_stderr,z,degenerate"
        )?;
        for row in &self.rows {
            writeln!(
                out,
                "{},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{}",
                row.quantity,
                row.noise_rate,
                row.t,
                row.t_prime,
                row.closed_form_value,
                row.oracle_value,
                row.mc_value,
                row.mc_stderr,
                row.z,
                row.degenerate
            )?;
        }
        Ok(())
    }
}

/// Velocity and acceleration variances at t ∈ {1, 5, 10} for γ = 1, s = 1,
/// σ_P² = 1, ẋ(0) = 0 and λ ∈ {1/4, 1/2, 2, 4}, scored against the
/// quadrature oracles. Each λ runs on its own stream domain of the seed.
pub fn dynamics_oracle_suite(
    n_paths: u64,
    dt: f64,
    seed: u64,
    threshold: f64,
) -> Result<OracleSuiteReport> {
    const NOISE_RATES: [f64; 4] = [0.25, 0.5, 2.0, 4.0];
    const TIMES: [f64; 3] = [1.0, 5.0, 10.0];

    let mut rows = Vec::new();
    for (domain, &rate) in NOISE_RATES.iter().enumerate() {
        let dynamics = DynamicsParams::new(1.0, 1.0, 0.0, NoiseParams::new(1.0, rate)?)?;
        let lag_grid: Vec<(f64, f64)> = TIMES.iter().map(|&t| (t, t)).collect();
        let spec = EnsembleSpec {
            dynamics,
            initial_position: 0.0,
            dt,
            n_steps: (TIMES[2] / dt).round() as u64 + 1,
            n_paths,
            seed,
            stream_domain: domain as u64,
            lag_grid: lag_grid.clone(),
        };
        let summaries = run_ensemble(&spec)?;
        for quantity in [Quantity::Velocity, Quantity::Acceleration] {
            let estimate = estimate_correlation(&summaries, quantity, &lag_grid)?;
            for (j, &(t, t_prime)) in estimate.lags.iter().enumerate() {
                let (closed_form_value, oracle_value) = match quantity {
                    Quantity::Velocity => (
                        velocity_correlation_closed_form(t, t_prime, &dynamics)?,
                        velocity_covariance_quadrature(t, t_prime, &dynamics)?,
                    ),
                    Quantity::Acceleration => (
                        acceleration_variance_closed_form(t, &dynamics)?,
                        acceleration_covariance_quadrature(t, t_prime, &dynamics)?,
                    ),
                    Quantity::Noise => unreachable!("suite samples velocity and acceleration"),
                };
                let mc_value = estimate.mean_products[j];
                let mc_stderr = estimate.standard_errors[j];
                let (z, degenerate) = score(mc_value, oracle_value, mc_stderr);
                rows.push(OracleSuiteRow {
                    quantity,
                    noise_rate: rate,
                    t,
                    t_prime,
                    closed_form_value,
                    oracle_value,
                    mc_value,
                    mc_stderr,
                    z,
                    degenerate,
                });
            }
        }
    }
    Ok(verdict(rows, n_paths, dt, threshold))
}

/// Noise autocovariance at lags {0, 1/λ, 2/λ} from t₀ = 1/λ, scored
/// against σ_P²·e^{−λτ}. The sampler starts stationary, so no burn-in is
/// discarded.
pub fn noise_oracle_suite(
    params: &NoiseParams,
    n_paths: u64,
    dt: f64,
    seed: u64,
    threshold: f64,
) -> Result<OracleSuiteReport> {
    if params.rate <= 0.0 {
        return Err(Error::NonPhysicalParams(format!(
            "noise suite needs a positive relaxation rate, got {}",
            params.rate
        )));
    }
    let tau = 1.0 / params.rate;
    let lag_grid = vec![(tau, tau), (tau, 2.0 * tau), (tau, 3.0 * tau)];
    let dynamics = DynamicsParams::new(0.0, 0.0, 0.0, *params)?;
    let spec = EnsembleSpec {
        dynamics,
        initial_position: 0.0,
        dt,
        n_steps: (3.0 * tau / dt).round() as u64 + 1,
        n_paths,
        seed,
        stream_domain: 8,
        lag_grid: lag_grid.clone(),
    };
    let summaries = run_ensemble(&spec)?;
    let estimate = estimate_correlation(&summaries, Quantity::Noise, &lag_grid)?;

    let mut rows = Vec::with_capacity(estimate.lags.len());
    for (j, &(t, t_prime)) in estimate.lags.iter().enumerate() {
        let reference = pressure_diff_correlation(t, t_prime, params);
        let mc_value = estimate.mean_products[j];
        let mc_stderr = estimate.standard_errors[j];
        let (z, degenerate) = score(mc_value, reference, mc_stderr);
        rows.push(OracleSuiteRow {
            quantity: Quantity::Noise,
            noise_rate: params.rate,
            t,
            t_prime,
            closed_form_value: reference,
            oracle_value: reference,
            mc_value,
            mc_stderr,
            z,
            degenerate,
        });
    }
    Ok(verdict(rows, n_paths, dt, threshold))
}

fn verdict(rows: Vec<OracleSuiteRow>, n_paths: u64, dt: f64, threshold: f64) -> OracleSuiteReport {
    let max_abs_z = rows.iter().fold(0.0f64, |acc, row| acc.max(row.z.abs()));
    OracleSuiteReport { rows, n_paths, dt, threshold, max_abs_z, passed: max_abs_z <= threshold }
}
