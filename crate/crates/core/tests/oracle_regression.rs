//! Regression against an independent high-precision oracle.
//!
//! Every constant below was produced by `scripts/reference_values.py`,
//! which evaluates the same quantities with mpmath at 60 significant
//! digits, sharing no code with this crate. Closed-form outputs must agree
//! to 10 significant figures in log10 representation; quadrature oracles
//! to their own convergence tolerance.

use casimir_core::bound::{
    bound_fast_relaxation, bound_general, bound_slow_relaxation, reflectivity,
    self_consistent_bound, BoundInputs, BoundRegime,
};
use casimir_core::dynamics::{
    acceleration_covariance_quadrature, velocity_covariance_quadrature, DynamicsParams,
};
use casimir_core::photons::{
    ensemble_photon_number, mode_creation_rate, total_creation_rate, ModePair, RateInputs,
};
use casimir_core::thermal::{
    blackbody_pressure, energy_density, pressure_diff_variance, relaxation_rate, NoiseParams,
};
use casimir_core::scenario::PhysicalConstants;

/// |actual − expected| in units of the expected value's 10th significant
/// figure. Both arguments are log10 values.
fn assert_log10_sig_figs(actual: f64, expected: f64, label: &str) {
    let scale = 10f64.powi(expected.abs().log10().floor() as i32 - 9);
    assert!(
        (actual - expected).abs() <= scale,
        "{label}: log10 = {actual}, oracle = {expected} (tolerance {scale:e})"
    );
}

fn assert_rel(actual: f64, expected: f64, tol: f64, label: &str) {
    let denom = expected.abs().max(f64::MIN_POSITIVE);
    assert!(
        ((actual - expected) / denom).abs() <= tol,
        "{label}: {actual} vs oracle {expected} (rel tol {tol:e})"
    );
}

fn nondim_bound_inputs(noise_rate: f64) -> BoundInputs {
    BoundInputs {
        mode_frequency: 1.0,
        vacuum_permittivity: 1.0,
        light_speed: 1.0,
        folding_length: 1.0,
        cavity_length: 2.0,
        displacement: 1.0,
        coupling: 1.0,
        variance: 1.0,
        damping: 1.0,
        noise_rate,
        duration: 10.0,
    }
    .validated()
    .unwrap()
}

fn room_temperature_inputs() -> BoundInputs {
    let constants = PhysicalConstants::si();
    BoundInputs {
        mode_frequency: 1e9,
        vacuum_permittivity: constants.vacuum_permittivity,
        light_speed: constants.light_speed,
        folding_length: 0.1,
        cavity_length: 0.1,
        displacement: 0.025,
        coupling: 1.0,
        variance: pressure_diff_variance(290.0, 1e-3, &constants).unwrap(),
        damping: 1e-3,
        noise_rate: 0.0,
        duration: 3600.0,
    }
    .validated()
    .unwrap()
}

#[test]
fn thermal_chain_matches_oracle() {
    let constants = PhysicalConstants::si();
    assert_rel(
        constants.radiation_constant_alpha,
        7.56573325003392847194308003572e-16,
        1e-12,
        "alpha",
    );
    assert_rel(
        blackbody_pressure(290.0, &constants).unwrap(),
        1.78369979293908232118812453025e-6,
        1e-12,
        "blackbody pressure at 290 K",
    );
    assert_rel(
        energy_density(290.0, &constants).unwrap(),
        5.35109937881724696356437359075e-6,
        1e-12,
        "energy density at 290 K",
    );
    assert_rel(
        pressure_diff_variance(290.0, 1e-3, &constants).unwrap(),
        1.42834473454449961924631650785e-23,
        1e-12,
        "pressure-difference variance at 290 K, 1 L",
    );
    assert_rel(
        relaxation_rate(0.0, 0.2, constants.light_speed).unwrap(),
        2248443435.0,
        1e-12,
        "relaxation rate for a black wall",
    );
    assert_rel(
        relaxation_rate(0.9999655, 0.2, constants.light_speed).unwrap(),
        77571.2985075,
        1e-9,
        "relaxation rate for a good conductor",
    );
    assert_rel(
        reflectivity(1e9, 5.96e7, constants.vacuum_permittivity).unwrap(),
        0.999965525638720771950246369276,
        1e-12,
        "copper-grade reflectivity at 1 GHz",
    );
}

#[test]
fn photon_rates_match_oracle_to_ten_figures() {
    let pinned = RateInputs::new(1.0, 1.0, 1.0, 1.0, 0.5, 10.0, 1.0).unwrap();
    let thermal = RateInputs::new(1.0, 1.0, 2.0 / 3.0, 1.0, 0.5, 10.0, 1.0).unwrap();
    let degenerate = RateInputs::new(1.0, 1.0, 1.0, 1.0, 1.0, 10.0, 1.0).unwrap();
    let pair = ModePair::new(2, 1, 1.0).unwrap();

    assert_log10_sig_figs(
        ensemble_photon_number(&pair, &thermal).log10(),
        -0.852071526471271675541494121215,
        "ensemble photon number, thermal variance",
    );
    assert_log10_sig_figs(
        ensemble_photon_number(&pair, &pinned).log10(),
        -0.675980267415590433460205112684,
        "ensemble photon number, pinned variance",
    );
    assert_log10_sig_figs(
        total_creation_rate(&thermal).total.log10_abs(),
        -2.4529932629085454551381669862,
        "total creation rate, thermal variance",
    );
    assert_log10_sig_figs(
        total_creation_rate(&pinned).total.log10_abs(),
        -2.27690200385286421305687797767,
        "total creation rate, pinned variance",
    );
    assert_log10_sig_figs(
        total_creation_rate(&degenerate).total.log10_abs(),
        0.0128324778183554189864409790839f64.log10(),
        "total creation rate at the equal-rates limit",
    );
    assert_log10_sig_figs(
        mode_creation_rate(1, &pinned, 64).unwrap().rate.log10_abs(),
        -1.64748109079016640618666796898,
        "mode k=1 creation rate",
    );
    assert_rel(
        mode_creation_rate(2, &pinned, 64).unwrap().rate.to_f64(),
        0.0431482046392075570417923183283,
        1e-12,
        "mode k=2 creation rate",
    );
    assert_rel(
        ensemble_photon_number(&pair, &degenerate),
        0.51329538328883965429481369258,
        1e-12,
        "ensemble photon number at the equal-rates limit",
    );
}

#[test]
fn bounds_match_oracle_to_ten_figures() {
    let inputs = nondim_bound_inputs(0.5);
    assert_log10_sig_figs(
        bound_general(&inputs).unwrap().log10_sigma_limit,
        5.45689399469767201175497263951,
        "general bound, order-unity benchmark",
    );
    assert_log10_sig_figs(
        bound_fast_relaxation(&inputs).unwrap().log10_sigma_limit,
        0.729337190061655265115646387585,
        "fast-relaxation bound, order-unity benchmark",
    );
    assert_log10_sig_figs(
        bound_slow_relaxation(&inputs).unwrap().log10_sigma_limit,
        5.57386394099432706169872916693,
        "slow-relaxation bound, order-unity benchmark",
    );
}

#[test]
fn room_temperature_bounds_match_oracle() {
    let inputs = room_temperature_inputs();
    assert_log10_sig_figs(
        bound_slow_relaxation(&inputs).unwrap().log10_sigma_limit,
        147.500398590722325234472572712,
        "slow-relaxation bound, room-temperature scenario",
    );

    let fast = self_consistent_bound(&inputs, BoundRegime::FastRelaxation).unwrap();
    assert_log10_sig_figs(
        fast.log10_sigma_limit,
        65.5056296362115311145635167043,
        "self-consistent fast-relaxation fixed point",
    );
    assert_rel(
        fast.inputs.noise_rate,
        2.11454290850266226209098235883e-24,
        1e-9,
        "relaxation rate at the fast fixed point",
    );

    let general = self_consistent_bound(&inputs, BoundRegime::General).unwrap();
    assert_log10_sig_figs(
        general.log10_sigma_limit,
        147.511011198272425033845191162,
        "self-consistent general fixed point",
    );
}

/// Exact covariances for γ = 1, s = 1, σ_P² = 1, ẋ(0) = 0, frozen from the
/// 60-digit quadrature. Columns: λ, t, t′, C_vv, C_aa.
const COVARIANCE_TABLE: [(f64, f64, f64, f64, f64); 16] = [
    (0.25, 1.0, 1.0, 0.3692368110137447084989, 0.2276444859900488690187),
    (0.25, 5.0, 5.0, 0.7959422310823975334187, 0.1990309577003618682062),
    (0.25, 10.0, 10.0, 0.7999920525547710620866, 0.1999980151998463879602),
    (0.25, 5.0, 10.0, 0.3032049075418852902708, -0.01745408383257638668259),
    (0.5, 1.0, 1.0, 0.3423234727440791732993, 0.3064970196086522785436),
    (0.5, 5.0, 5.0, 0.6652825748724640801481, 0.3326866873659945249256),
    (0.5, 10.0, 10.0, 0.6666658550494525733417, 0.3333329295858799091094),
    (0.5, 5.0, 10.0, 0.1048898098598696677832, -0.02290184079255799235553),
    (2.0, 1.0, 1.0, 0.2311894290086299367589, 0.5977141412538725654118),
    (2.0, 5.0, 5.0, 0.3332881373384511830323, 0.6666216746066648509162),
    (2.0, 10.0, 10.0, 0.3333333312722420950479, 0.6666666646056378125344),
    (2.0, 5.0, 10.0, 0.004476526145496170055964, -0.004431735945333122552484),
    (4.0, 1.0, 1.0, 0.1557866318543404983149, 0.7584818106539746851535),
    (4.0, 5.0, 5.0, 0.1999848666919308975648, 0.7999848666974860751108),
    (4.0, 10.0, 10.0, 0.1999999993129487925205, 0.7999999993129487925206),
    (4.0, 5.0, 10.0, 0.001796683761578620871824, -0.001796885635274140897687),
];

#[test]
fn covariance_quadrature_matches_oracle_table() {
    for &(rate, t, t_prime, cvv, caa) in &COVARIANCE_TABLE {
        let params =
            DynamicsParams::new(1.0, 1.0, 0.0, NoiseParams::new(1.0, rate).unwrap()).unwrap();
        assert_rel(
            velocity_covariance_quadrature(t, t_prime, &params).unwrap(),
            cvv,
            1e-7,
            &format!("C_vv(lambda={rate}, t={t}, t'={t_prime})"),
        );
        assert_rel(
            acceleration_covariance_quadrature(t, t_prime, &params).unwrap(),
            caa,
            1e-7,
            &format!("C_aa(lambda={rate}, t={t}, t'={t_prime})"),
        );
    }
}

#[test]
fn covariance_quadrature_with_initial_velocity() {
    let params =
        DynamicsParams::new(1.0, 1.0, 2.0, NoiseParams::new(1.0, 0.5).unwrap()).unwrap();
    assert_rel(
        velocity_covariance_quadrature(2.0, 3.0, &params).unwrap(),
        0.53919823774899224494319407082,
        1e-7,
        "C_vv(2, 3) with v0 = 2",
    );
    assert_rel(
        acceleration_covariance_quadrature(2.0, 3.0, &params).unwrap(),
        0.0511617413305614217532294291629,
        1e-7,
        "C_aa(2, 3) with v0 = 2",
    );
}
