//! Shared-mirror dual-chamber Fabry-Perot resonator.
//!
//! Both chambers see the same mirror spacing `L`. A longitudinal mode `m`
//! resonates where `n(ω)·ω·L = m·π·c`; with a flat index this gives
//! `ω = mπc / (nL)`. The test chamber carries an extra, frequency
//! independent index offset `σ·ΔS`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{RESONANCE_BRACKET_LINEWIDTHS, SMALLNESS_LIMIT, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::root;

/// Relative tolerance on `n₀ω₀L` against `mπc`.
const MODE_CONSISTENCY_RTOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavityConfig {
    /// Mirror separation, m.
    #[serde(rename = "length_L")]
    pub length_l: f64,
    /// Longitudinal mode number.
    pub mode_index: u64,
    /// Resonance linewidth Δf_c, Hz.
    pub linewidth_hz: f64,
    /// Mean index of both chambers at the carrier.
    pub n0: f64,
    /// Carrier angular frequency, rad/s.
    pub omega0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationModel {
    /// ∂n/∂S, index units per unit of S.
    pub sigma: f64,
    /// Applied perturbation ΔS.
    #[serde(rename = "delta_S")]
    pub delta_s: f64,
}

impl CavityConfig {
    /// Config whose mirror spacing places mode `mode_index` exactly at
    /// `omega0` for a flat index `n0`.
    pub fn matched(omega0: f64, n0: f64, mode_index: u64, linewidth_hz: f64) -> Self {
        CavityConfig {
            length_l: mode_index as f64 * PI * SPEED_OF_LIGHT / (n0 * omega0),
            mode_index,
            linewidth_hz,
            n0,
            omega0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("cavity.length_L", self.length_l),
            ("cavity.linewidth_hz", self.linewidth_hz),
            ("cavity.n0", self.n0),
            ("cavity.omega0", self.omega0),
        ];
        for (name, v) in checks {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, "must be positive and finite"));
            }
        }
        if self.mode_index == 0 {
            return Err(Error::invalid("cavity.mode_index", "must be a positive integer"));
        }
        let phase = self.mode_phase();
        let mismatch = (self.n0 * self.omega0 * self.length_l - phase).abs() / phase;
        if mismatch >= MODE_CONSISTENCY_RTOL {
            return Err(Error::invalid(
                "cavity.mode_index",
                format!(
                    "n0*omega0*L differs from m*pi*c by {mismatch:.3e} (relative); \
                     mode {} does not sit at the carrier",
                    self.mode_index
                ),
            ));
        }
        Ok(())
    }

    /// `m·π·c`, the right-hand side of the resonance condition.
    pub fn mode_phase(&self) -> f64 {
        self.mode_index as f64 * PI * SPEED_OF_LIGHT
    }

    /// Half-width of the resonance search bracket, rad/s.
    pub fn bracket_half_width(&self) -> f64 {
        RESONANCE_BRACKET_LINEWIDTHS * 2.0 * PI * self.linewidth_hz
    }
}

impl PerturbationModel {
    /// Index offset `σ·ΔS` seen by the test chamber.
    pub fn index_shift(&self) -> f64 {
        self.sigma * self.delta_s
    }

    pub fn validate(&self, n0: f64) -> Result<()> {
        if !self.sigma.is_finite() || !self.delta_s.is_finite() {
            return Err(Error::invalid(
                "perturbation.sigma",
                "sigma and delta_S must be finite",
            ));
        }
        let ratio = (self.index_shift() / n0).abs();
        if ratio >= SMALLNESS_LIMIT {
            return Err(Error::SmallnessViolation { ratio });
        }
        Ok(())
    }
}

/// Test-chamber base index `n′ = n₀ + σΔS`.
pub fn perturbed_base_index(n0: f64, pert: &PerturbationModel) -> Result<f64> {
    pert.validate(n0)?;
    Ok(n0 + pert.index_shift())
}

/// Beat note without dispersion, `Δω₀ = ω₀σΔS/n₀`.
///
/// Signed as `ω_reference − ω_test`: an index increase in the test chamber
/// lowers its resonance and gives a positive beat.
pub fn dispersionless_beat(cav: &CavityConfig, pert: &PerturbationModel) -> Result<f64> {
    pert.validate(cav.n0)?;
    Ok(cav.omega0 * pert.index_shift() / cav.n0)
}

/// Resonance of mode `cav.mode_index` for a chamber with index `index_fn`.
///
/// Searches `ω₀ ± 10³·2π·Δf_c` for a root of `n(ω)·ω − mπc/L` and refines it
/// to the limit of binary64 resolution.
pub fn resonance_solve<F>(index_fn: F, cav: &CavityConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let half = cav.bracket_half_width();
    resonance_solve_in(index_fn, cav, cav.omega0 - half, cav.omega0 + half)
}

/// As [`resonance_solve`] over an explicit bracket.
pub fn resonance_solve_in<F>(index_fn: F, cav: &CavityConfig, lo: f64, hi: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let target = cav.mode_phase() / cav.length_l;
    let residual = |w: f64| index_fn(w) * w - target;
    root::solve_bracketed(residual, lo, hi, 0.0, "resonance condition").map(|r| r.x)
}
