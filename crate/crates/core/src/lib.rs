//! Simulation of a dual-chamber Fabry-Perot interferometer filled with a
//! bi-frequency-pumped Raman gain medium.
//!
//! The crate is organised bottom-up:
//!
//! * [`medium`] computes the susceptibility of the Raman gain doublet, the
//!   derived index, gain and analytic dispersion, and tunes the pump
//!   parameters onto a target dispersion slope.
//! * [`cavity`] holds the shared-mirror resonator and the exact resonance
//!   solver used as the reference for the closed-form predictions.
//! * [`sensitivity`] contains the closed-form enhancement algebra.
//! * [`noise`] gives the shot-noise floor of the beat-note measurement.
//! * [`pipeline`] ties everything into scenarios, sweeps and CSV output.
//!
//! All physical quantities are SI; angular frequencies are in rad/s.

pub mod cavity;
pub mod constants;
pub mod error;
pub mod kramers_kronig;
pub mod medium;
pub mod noise;
pub mod pipeline;
pub mod root;
pub mod sensitivity;

pub use cavity::{CavityConfig, PerturbationModel};
pub use error::{Error, Result};
pub use medium::{DispersionSample, RamanMediumParams, TuningKnob};
pub use noise::DetectionParams;
pub use pipeline::{
    config::{ScenarioConfig, SweepSpec},
    scenario::{run_scenario, EnhancementReport},
    sweep::run_sweep,
    table::ResultTable,
};
pub use sensitivity::Branch;

/// Crate version, stamped into CSV provenance headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
