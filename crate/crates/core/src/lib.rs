//! Library for a fluctuation-driven cavity-plate model: blackbody pressure
//! fluctuations drive a damped plate, whose random motion creates photons;
//! the requirement that the cavity walls absorb at least as fast as the
//! motion creates puts an upper limit on the wall conductivity.
//!
//! The crate is organized as a chain:
//! [`thermal`] (pressure statistics and the exactly discretized noise
//! process) → [`dynamics`] (plate integration, published correlation
//! formulas, and independent quadrature oracles) → [`photons`] (creation
//! rates per mode and in closed form) → [`bound`] (reflectivity,
//! absorption, conductivity ceilings, and the self-consistent solve).
//! [`ensemble`] runs Monte Carlo validation against the oracles,
//! [`scenario`] and [`config`] define and parse run descriptions, and
//! [`logdomain`], [`quadrature`], [`stats`] supply the numeric
//! infrastructure. Every closed-form result has an independent check:
//! correlation functions against adaptive quadrature, rates and bounds
//! against high-precision regression values, and samplers against their
//! stationary statistics.

pub mod bound;
pub mod config;
pub mod dynamics;
pub mod ensemble;
pub mod error;
pub mod logdomain;
pub mod photons;
pub mod quadrature;
pub mod scenario;
pub mod stats;
pub mod thermal;

pub use error::{Error, Result};
pub use logdomain::LogVal;
pub use scenario::ScenarioConfig;
