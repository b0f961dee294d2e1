//! End-to-end scenario execution, sweeps and tabular output.

pub mod config;
pub mod scenario;
pub mod sweep;
pub mod table;

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::medium::{dispersion_derivatives, RamanMediumParams};

/// Minimum number of uniform samples used by [`band_second_dispersion`].
pub const BAND_SAMPLES: usize = 1001;

/// Largest |∂²n/∂ω²| over `center ± π·bandwidth_hz`, i.e. a band of
/// `2π·bandwidth_hz` rad/s centred on `center`.
pub fn band_second_dispersion(p: &RamanMediumParams, center: f64, bandwidth_hz: f64) -> Result<f64> {
    band_second_dispersion_with(p, center, bandwidth_hz, BAND_SAMPLES)
}

pub fn band_second_dispersion_with(
    p: &RamanMediumParams,
    center: f64,
    bandwidth_hz: f64,
    samples: usize,
) -> Result<f64> {
    if !(bandwidth_hz >= 0.0 && bandwidth_hz.is_finite()) {
        return Err(Error::invalid("bandwidth_hz", "must be non-negative and finite"));
    }
    if samples < 2 {
        return Err(Error::invalid("samples", "need at least two samples"));
    }
    let half = PI * bandwidth_hz;
    let mut best = 0.0f64;
    for k in 0..samples {
        let x = -half + 2.0 * half * k as f64 / (samples - 1) as f64;
        let (_, d2n) = dispersion_derivatives(center + x, p)?;
        best = best.max(d2n.abs());
    }
    Ok(best)
}
