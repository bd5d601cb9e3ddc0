//! `casimir`: command-line runner for the noise-driven plate model.
//!
//! Subcommands: `simulate | photons | bound | sweep | validate`. Every run
//! writes a `manifest.json` recording the resolved configuration, seed,
//! tool version, command line, timestamps, and output list. Timestamps live
//! only in the manifest, so data files from identical (config, seed,
//! version) runs are byte-identical.
//!
//! Exit codes: 0 success, 1 validation failure, 2 configuration error,
//! 3 numeric failure.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use casimir_core::bound::{
    bound_fast_relaxation, bound_general, bound_slow_relaxation, self_consistent_bound,
    BoundInputs, BoundRegime, BoundResult,
};
use casimir_core::config;
use casimir_core::dynamics::{integrate_plate, DynamicsParams};
use casimir_core::ensemble::{dynamics_oracle_suite, noise_oracle_suite, OracleSuiteReport};
use casimir_core::photons::{
    scenario_occupancy, spectrum, summed_creation_rate, total_creation_rate, CreationRateResult,
    PhotonSpectrum, RateInputs,
};
use casimir_core::scenario::NoiseRateSpec;
use casimir_core::thermal::{pressure_diff_variance, sample_noise_path, scenario_noise_params};
use casimir_core::{Error, LogVal, Result, ScenarioConfig};

#[derive(Parser)]
#[command(
    name = "casimir",
    version,
    about = "Noise-driven plate dynamics, photon creation rates, and conductivity bounds"
)]
struct Cli {
    /// Scenario configuration file (flat `key = value` text)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Overrides the seed in the configuration
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Directory for output files, created if missing
    #[arg(long, global = true, default_value = ".", value_name = "DIR")]
    out_dir: PathBuf,

    /// Format of tabular exports; reports are always JSON
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Worker threads for ensemble runs (default: all cores)
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one noise-driven plate trajectory and export it
    Simulate,

    /// Photon spectra and creation rates for the configured scenario
    Photons {
        /// Source modes k = 1..=MODES for spectra and the per-mode sum
        #[arg(long, default_value_t = 4, value_name = "MODES")]
        modes: u32,
    },

    /// Conductivity ceiling from the absorption-versus-creation comparison
    Bound {
        #[arg(long, value_enum, default_value_t = RegimeArg::Auto)]
        regime: RegimeArg,

        /// Solve bound(lambda(sigma*)) = sigma* instead of using the
        /// configured noise rate
        #[arg(long)]
        self_consistent: bool,
    },

    /// Bound as a function of one swept parameter
    Sweep {
        /// One of: T, V, gamma, lambda, t1, x0, omega, l
        #[arg(long, value_name = "NAME")]
        param: String,

        #[arg(long, value_name = "VALUE")]
        from: f64,

        #[arg(long, value_name = "VALUE")]
        to: f64,

        #[arg(long, value_name = "N")]
        points: usize,

        /// Geometric spacing instead of linear
        #[arg(long)]
        log: bool,

        #[arg(long, value_enum, default_value_t = RegimeArg::Auto)]
        regime: RegimeArg,
    },

    /// Monte Carlo oracle suites; exit 1 when any z exceeds the threshold
    Validate {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Photons { .. } => "photons",
            Command::Bound { .. } => "bound",
            Command::Sweep { .. } => "sweep",
            Command::Validate { .. } => "validate",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RegimeArg {
    /// Route by lambda/gamma: >= 10 fast, <= 0.1 slow, general between
    Auto,
    General,
    Fast,
    Slow,
}

impl RegimeArg {
    fn route(self, noise_rate: f64, damping: f64) -> BoundRegime {
        match self {
            RegimeArg::General => BoundRegime::General,
            RegimeArg::Fast => BoundRegime::FastRelaxation,
            RegimeArg::Slow => BoundRegime::SlowRelaxation,
            RegimeArg::Auto => {
                let ratio = noise_rate / damping;
                if ratio >= 10.0 {
                    BoundRegime::FastRelaxation
                } else if ratio <= 0.1 {
                    BoundRegime::SlowRelaxation
                } else {
                    BoundRegime::General
                }
            }
        }
    }

    /// The named regime, with auto falling back to the general form (the
    /// fixed point determines lambda, so there is no ratio to route by).
    fn concrete_or_general(self) -> BoundRegime {
        match self {
            RegimeArg::Auto | RegimeArg::General => BoundRegime::General,
            RegimeArg::Fast => BoundRegime::FastRelaxation,
            RegimeArg::Slow => BoundRegime::SlowRelaxation,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Noise,
    Dynamics,
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(err) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: building the worker pool: {err}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_)
        | Error::InvalidScenario { .. }
        | Error::UnknownParameter(_)
        | Error::Io(_) => 2,
        _ => 3,
    }
}

fn run(cli: Cli) -> Result<bool> {
    let config_path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("no configuration given; pass --config <PATH>".into()))?;
    let mut config = config::parse_file(config_path)?;
    if let Some(seed) = cli.seed {
        config.run.seed = seed;
    }

    let mut run = RunContext::new(
        cli.out_dir.clone(),
        cli.format,
        cli.command.name(),
        config_path.display().to_string(),
        config,
    )?;

    let passed = match cli.command {
        Command::Simulate => {
            cmd_simulate(&mut run)?;
            true
        }
        Command::Photons { modes } => {
            cmd_photons(&mut run, modes)?;
            true
        }
        Command::Bound { regime, self_consistent } => {
            cmd_bound(&mut run, regime, self_consistent)?;
            true
        }
        Command::Sweep { ref param, from, to, points, log, regime } => {
            cmd_sweep(&mut run, param, from, to, points, log, regime)?;
            true
        }
        Command::Validate { suite } => cmd_validate(&mut run, suite)?,
    };

    run.write_manifest()?;
    Ok(passed)
}

/// Output plumbing for one run: records every file written and closes with
/// the manifest.
struct RunContext {
    out_dir: PathBuf,
    format: Format,
    subcommand: &'static str,
    config_path: String,
    config: ScenarioConfig,
    argv: Vec<String>,
    started_unix_s: f64,
    outputs: Vec<String>,
    notes: Vec<String>,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    subcommand: &'a str,
    config_path: &'a str,
    /// Every configuration key, resolved to the value the run used.
    config: BTreeMap<&'static str, String>,
    seed: u64,
    version: &'static str,
    argv: &'a [String],
    started_unix_s: f64,
    finished_unix_s: f64,
    outputs: &'a [String],
    notes: &'a [String],
}

fn now_unix_s() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

impl RunContext {
    fn new(
        out_dir: PathBuf,
        format: Format,
        subcommand: &'static str,
        config_path: String,
        config: ScenarioConfig,
    ) -> Result<Self> {
        std::fs::create_dir_all(&out_dir)?;
        Ok(Self {
            out_dir,
            format,
            subcommand,
            config_path,
            config,
            argv: std::env::args().collect(),
            started_unix_s: now_unix_s(),
            outputs: Vec::new(),
            notes: Vec::new(),
        })
    }

    fn create(&mut self, name: &str) -> Result<BufWriter<File>> {
        let file = File::create(self.out_dir.join(name))?;
        self.outputs.push(name.to_string());
        Ok(BufWriter::new(file))
    }

    fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut out = self.create(name)?;
        serde_json::to_writer_pretty(&mut out, value).map_err(std::io::Error::other)?;
        writeln!(out)?;
        Ok(())
    }

    /// Writes `base.csv` or `base.json` per --format and returns the name.
    fn write_table<T: Serialize>(
        &mut self,
        base: &str,
        json_value: &T,
        write_csv: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
    ) -> Result<String> {
        let name = match self.format {
            Format::Csv => {
                let name = format!("{base}.csv");
                let mut out = self.create(&name)?;
                write_csv(&mut out)?;
                name
            }
            Format::Json => {
                let name = format!("{base}.json");
                self.write_json(&name, json_value)?;
                name
            }
        };
        Ok(name)
    }

    fn note(&mut self, text: String) {
        println!("note: {text}");
        self.notes.push(text);
    }

    fn write_manifest(&mut self) -> Result<()> {
        let manifest = RunManifest {
            subcommand: self.subcommand,
            config_path: &self.config_path,
            config: config::resolved_map(&self.config),
            seed: self.config.run.seed,
            version: env!("CARGO_PKG_VERSION"),
            argv: &self.argv,
            started_unix_s: self.started_unix_s,
            finished_unix_s: now_unix_s(),
            outputs: &self.outputs,
            notes: &self.notes,
        };
        let mut out = BufWriter::new(File::create(self.out_dir.join("manifest.json"))?);
        serde_json::to_writer_pretty(&mut out, &manifest).map_err(std::io::Error::other)?;
        writeln!(out)?;
        Ok(())
    }
}

/// The scenario with a numeric noise rate: as configured, or resolved by
/// the general-regime fixed point when the config defers to it.
fn resolved_config(run: &mut RunContext) -> Result<ScenarioConfig> {
    match run.config.noise_rate {
        NoiseRateSpec::Value(_) => Ok(run.config.clone()),
        NoiseRateSpec::SelfConsistent => {
            let inputs = BoundInputs::from_scenario_with_rate(&run.config, 0.0)?;
            let solved = self_consistent_bound(&inputs, BoundRegime::General)?;
            let rate = solved.inputs.noise_rate;
            run.note(format!(
                "noise_rate resolved by the general-regime fixed point: \
                 lambda = {rate:e} s^-1 at log10 sigma = {:.4}",
                solved.log10_sigma_limit
            ));
            let mut resolved = run.config.clone();
            resolved.noise_rate = NoiseRateSpec::Value(rate);
            Ok(resolved)
        }
    }
}

/// A log-domain value for terminal display: plain when f64 can hold it,
/// `10^x` otherwise.
fn display_logval(value: &LogVal) -> String {
    if value.is_zero() {
        "0".into()
    } else if value.exceeds_f64() {
        let sign = if value.sign() < 0 { "-" } else { "" };
        format!("{sign}10^{:.4}", value.log10_abs())
    } else {
        format!("{:e}", value.to_f64())
    }
}

fn cmd_simulate(run: &mut RunContext) -> Result<()> {
    let config = resolved_config(run)?;
    let params = scenario_noise_params(&config)?;
    let controls = config.run;
    let path = sample_noise_path(&params, controls.dt, controls.n_steps, controls.seed)?;
    let dynamics = DynamicsParams::from_scenario(&config)?;
    let trajectory = integrate_plate(&path, &dynamics, config.motion.rest_position)?;

    let noise_name = run.write_table("noise", &path, |out| path.write_csv(out))?;
    let trajectory_name =
        run.write_table("trajectory", &trajectory, |out| trajectory.write_csv(out))?;
    println!(
        "wrote {trajectory_name} and {noise_name} ({} samples, dt = {:?}, seed = {})",
        trajectory.states.len(),
        controls.dt,
        controls.seed
    );
    Ok(())
}

#[derive(Serialize)]
struct PhotonReport {
    inputs: RateInputs,
    /// Closed-form total rate (all modes).
    closed_form: CreationRateResult,
    /// Rate summed over source modes k = 1..=modes with the configured
    /// truncation.
    mode_sum: CreationRateResult,
    /// (k, occupancy) for the modes in the sum.
    occupancies: Vec<(u32, f64)>,
}

fn cmd_photons(run: &mut RunContext, modes: u32) -> Result<()> {
    if modes < 1 {
        return Err(Error::Config("photons needs --modes >= 1".into()));
    }
    let config = resolved_config(run)?;
    let inputs = RateInputs::from_scenario(&config)?;

    let spectra: Vec<PhotonSpectrum> = (1..=modes)
        .map(|k| spectrum(k, scenario_occupancy(k, &config), &inputs, config.mode_cutoff))
        .collect::<Result<_>>()?;
    let report = PhotonReport {
        inputs,
        closed_form: total_creation_rate(&inputs),
        mode_sum: summed_creation_rate(&inputs, modes, config.mode_cutoff)?,
        occupancies: spectra.iter().map(|s| (s.source, s.occupancy)).collect(),
    };

    for warning in &report.closed_form.warnings {
        eprintln!("warning: {warning}");
    }
    let spectrum_name = run.write_table("spectrum", &spectra, |out| {
        writeln!(out, "k,n,expected_number")?;
        for s in &spectra {
            for (n, value) in &s.expected {
                writeln!(out, "{},{},{:?}", s.source, n, value)?;
            }
        }
        Ok(())
    })?;
    run.write_json("rates.json", &report)?;
    println!(
        "wrote {spectrum_name} and rates.json \
         (closed-form total {} s^-1, {modes}-mode sum {} s^-1)",
        display_logval(&report.closed_form.total),
        display_logval(&report.mode_sum.total),
    );
    Ok(())
}

fn evaluate_bound(inputs: &BoundInputs, regime: BoundRegime) -> Result<BoundResult> {
    match regime {
        BoundRegime::General => bound_general(inputs),
        BoundRegime::FastRelaxation => bound_fast_relaxation(inputs),
        BoundRegime::SlowRelaxation => bound_slow_relaxation(inputs),
    }
}

fn cmd_bound(run: &mut RunContext, regime: RegimeArg, self_consistent: bool) -> Result<()> {
    let result = if self_consistent {
        let inputs = BoundInputs::from_scenario_with_rate(&run.config, 0.0)?;
        self_consistent_bound(&inputs, regime.concrete_or_general())?
    } else {
        match run.config.noise_rate {
            NoiseRateSpec::Value(rate) => {
                let inputs = BoundInputs::from_scenario_with_rate(&run.config, rate)?;
                evaluate_bound(&inputs, regime.route(rate, inputs.damping))?
            }
            NoiseRateSpec::SelfConsistent if regime == RegimeArg::Slow => {
                let inputs = BoundInputs::from_scenario_with_rate(&run.config, 0.0)?;
                let mut result = bound_slow_relaxation(&inputs)?;
                result.warnings.push(
                    "noise_rate is deferred to the fixed point; the slow-relaxation \
                     form does not use it"
                        .into(),
                );
                result
            }
            NoiseRateSpec::SelfConsistent => {
                return Err(Error::Config(
                    "noise_rate = self_consistent: pass --self-consistent to solve the \
                     fixed point, or --regime slow (the only rate-free form)"
                        .into(),
                ))
            }
        }
    };

    for warning in &result.warnings {
        eprintln!("warning: {warning}");
    }
    run.write_json("bound.json", &result)?;
    println!(
        "conductivity limit: sigma_c <= 10^{:.4} S/m ({} regime{})",
        result.log10_sigma_limit,
        result.regime,
        if result.fixed_point.is_some() { ", self-consistent" } else { "" },
    );
    Ok(())
}

const SWEEPABLE: [&str; 8] = ["T", "V", "gamma", "lambda", "t1", "x0", "omega", "l"];

fn sweep_values(from: f64, to: f64, points: usize, log: bool) -> Result<Vec<f64>> {
    if points == 0 {
        return Err(Error::Config("sweep needs --points >= 1".into()));
    }
    if !(from.is_finite() && to.is_finite()) {
        return Err(Error::Config(format!("sweep endpoints must be finite, got [{from}, {to}]")));
    }
    if points == 1 {
        return Ok(vec![from]);
    }
    if log {
        if from <= 0.0 || to <= 0.0 {
            return Err(Error::Config(format!(
                "log spacing needs positive endpoints, got [{from}, {to}]"
            )));
        }
        let (lf, lt) = (from.log10(), to.log10());
        Ok((0..points)
            .map(|i| 10f64.powf(lf + (lt - lf) * i as f64 / (points - 1) as f64))
            .collect())
    } else {
        Ok((0..points).map(|i| from + (to - from) * i as f64 / (points - 1) as f64).collect())
    }
}

/// One swept point: `base` with the named parameter replaced. T and V act
/// through the thermal variance formula and bypass any configured
/// `noise_variance` override.
fn apply_param(
    base: &BoundInputs,
    config: &ScenarioConfig,
    param: &str,
    value: f64,
) -> Result<BoundInputs> {
    let mut inputs = *base;
    match param {
        "T" => {
            inputs.variance =
                pressure_diff_variance(value, config.geometry.volume(), &config.constants)?
        }
        "V" => {
            inputs.variance =
                pressure_diff_variance(config.thermal.temperature, value, &config.constants)?
        }
        "gamma" => inputs.damping = value,
        "lambda" => inputs.noise_rate = value,
        "t1" => inputs.duration = value,
        "x0" => inputs.displacement = value,
        "omega" => inputs.mode_frequency = value,
        "l" => inputs.folding_length = value,
        other => return Err(Error::UnknownParameter(other.to_string())),
    }
    inputs.validated()
}

#[derive(Serialize)]
struct SweepRow {
    param: f64,
    log10_sigma_limit: f64,
    regime: BoundRegime,
}

fn cmd_sweep(
    run: &mut RunContext,
    param: &str,
    from: f64,
    to: f64,
    points: usize,
    log: bool,
    regime: RegimeArg,
) -> Result<()> {
    if !SWEEPABLE.contains(&param) {
        return Err(Error::UnknownParameter(param.to_string()));
    }
    let base = match run.config.noise_rate {
        NoiseRateSpec::Value(rate) => BoundInputs::from_scenario_with_rate(&run.config, rate)?,
        NoiseRateSpec::SelfConsistent if param == "lambda" || regime == RegimeArg::Slow => {
            BoundInputs::from_scenario_with_rate(&run.config, 0.0)?
        }
        NoiseRateSpec::SelfConsistent => {
            return Err(Error::Config(
                "noise_rate = self_consistent: sweeps need a numeric rate unless \
                 --param lambda supplies one or --regime slow ignores it"
                    .into(),
            ))
        }
    };

    let values = sweep_values(from, to, points, log)?;
    let mut rows = Vec::with_capacity(values.len());
    for value in values {
        let inputs = apply_param(&base, &run.config, param, value)?;
        let chosen = regime.route(inputs.noise_rate, inputs.damping);
        let result = evaluate_bound(&inputs, chosen)?;
        rows.push(SweepRow {
            param: value,
            log10_sigma_limit: result.log10_sigma_limit,
            regime: result.regime,
        });
    }

    let name = run.write_table("sweep", &rows, |out| {
        writeln!(out, "param,log10_sigma_limit,regime")?;
        for row in &rows {
            writeln!(out, "{:?},{:?},{}", row.param, row.log10_sigma_limit, row.regime)?;
        }
        Ok(())
    })?;
    println!("wrote {name} ({} points over {param})", rows.len());
    Ok(())
}

#[derive(Serialize)]
struct NamedSuite {
    name: &'static str,
    report: OracleSuiteReport,
}

#[derive(Serialize)]
struct ValidationReport {
    threshold: f64,
    passed: bool,
    suites: Vec<NamedSuite>,
}

fn cmd_validate(run: &mut RunContext, suite: SuiteArg) -> Result<bool> {
    const THRESHOLD: f64 = 3.0;
    let config = resolved_config(run)?;
    let controls = config.run;

    let mut suites = Vec::new();
    if matches!(suite, SuiteArg::Noise | SuiteArg::All) {
        let params = scenario_noise_params(&config)?;
        let report =
            noise_oracle_suite(&params, controls.ensemble_size, controls.dt, controls.seed, THRESHOLD)?;
        suites.push(NamedSuite { name: "noise", report });
    }
    if matches!(suite, SuiteArg::Dynamics | SuiteArg::All) {
        let report =
            dynamics_oracle_suite(controls.ensemble_size, controls.dt, controls.seed, THRESHOLD)?;
        suites.push(NamedSuite { name: "dynamics", report });
    }

    for s in &suites {
        let base = format!("{}_suite", s.name);
        let report = &s.report;
        run.write_table(&base, report, |out| report.write_csv(out))?;
        let degenerate = report.rows.iter().filter(|row| row.degenerate).count();
        println!(
            "{} suite: {} (max |z| = {:.3} over {} rows{}, N = {}, dt = {:?})",
            s.name,
            if report.passed { "PASS" } else { "FAIL" },
            report.max_abs_z,
            report.rows.len(),
            if degenerate > 0 {
                format!(", {degenerate} degenerate")
            } else {
                String::new()
            },
            report.n_paths,
            report.dt,
        );
    }

    let passed = suites.iter().all(|s| s.report.passed);
    let report = ValidationReport { threshold: THRESHOLD, passed, suites };
    run.write_json("validation.json", &report)?;
    Ok(passed)
}
