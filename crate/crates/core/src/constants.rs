//! Physical constants and fixed numerical thresholds.

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Largest |χ| for which `n = 1 + Re χ / 2` is accepted.
pub const DILUTE_CHI_LIMIT: f64 = 1e-2;

/// Largest |σΔS / n₀| accepted by the perturbation model.
pub const SMALLNESS_LIMIT: f64 = 1e-2;

/// First-order formula is refused when |n_g| ≤ this fraction of n₀.
pub const CAD_SINGULARITY_FRACTION: f64 = 1e-3;

/// |Q| above which the quadratic closure is flagged in the log.
pub const Q_WARN_LIMIT: f64 = 1e-3;

/// Relative tolerance on the centre slope reached by CAD tuning.
pub const CAD_TUNING_RTOL: f64 = 1e-9;

/// Search interval for the pump separation, in units of Γ.
pub const SEPARATION_SEARCH_MIN: f64 = 2.01;
pub const SEPARATION_SEARCH_MAX: f64 = 1e3;

/// Half-width of the resonance search bracket in units of 2π·linewidth.
pub const RESONANCE_BRACKET_LINEWIDTHS: f64 = 1e3;

/// Default evaluation band for the second-order dispersion, Hz.
pub const DEFAULT_BANDWIDTH_HZ: f64 = 1e6;
