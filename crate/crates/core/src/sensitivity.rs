//! Closed-form enhancement of the beat note by dispersion.
//!
//! First order: `Δω = Δω₀·ξ` with `ξ = n₀/n_g`. Second order, with
//! `Q = f·n″·ω₀²`:
//!
//! ```text
//! η = | ±2ξ / (1 ± √(1 + Qξ²)) |
//! ```
//!
//! The upper (+,+) branch collapses to |ξ| as Q → 0 and saturates at
//! `2/√|Q|` as ξ → ∞. Internally both branches are evaluated through the
//! ratio `r = n_g/n₀ = 1/ξ`, where the upper branch reads `2/(r + √(r² + Q))`
//! and stays finite at `r = 0`.

use serde::{Deserialize, Serialize};

use crate::constants::{CAD_SINGULARITY_FRACTION, Q_WARN_LIMIT};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// (+, +) signs.
    Upper,
    /// (−, −) signs.
    Lower,
}

impl Branch {
    /// Branch used for a given sign of the group index.
    pub fn for_group_index(n_g: f64) -> Self {
        if n_g >= 0.0 {
            Branch::Upper
        } else {
            Branch::Lower
        }
    }
}

/// `ñ = (ω₀/n₀)·∂n/∂ω`.
pub fn n_tilde(n0: f64, omega0: f64, dn_domega: f64) -> f64 {
    omega0 * dn_domega / n0
}

/// Self-consistent first-order beat. Returns `(Δω, ξ)`.
pub fn first_order_beat(beat0: f64, n0: f64, omega0: f64, dn_domega: f64) -> Result<(f64, f64)> {
    let n_g = n0 + omega0 * dn_domega;
    if n_g.abs() <= CAD_SINGULARITY_FRACTION * n0.abs() {
        return Err(Error::CadSingularity { n_g });
    }
    let xi = n0 / n_g;
    Ok((beat0 * xi, xi))
}

/// `Q = f·n″·ω₀²`, with `n″` already divided by n₀.
pub fn q_factor(f_frac: f64, n_dd: f64, omega0: f64) -> Result<f64> {
    if f_frac.is_nan() || f_frac <= 0.0 {
        return Err(Error::invalid("f_frac", "fractional bandwidth must be positive"));
    }
    let q = f_frac * n_dd * omega0 * omega0;
    if q.abs() > Q_WARN_LIMIT {
        log::warn!(
            "|Q| = {:.3e} exceeds {Q_WARN_LIMIT:e}; the quadratic closure is unreliable",
            q.abs()
        );
    }
    Ok(q)
}

/// Enhancement factor `η` for `ξ = 1/ratio`, `ratio = n_g/n₀`.
///
/// `ratio = 0` is the CAD point itself; the upper branch is finite there.
pub fn eta_from_ratio(ratio: f64, q: f64, branch: Branch) -> Result<f64> {
    let disc = ratio * ratio + q;
    let xi = if ratio == 0.0 { f64::INFINITY } else { 1.0 / ratio };
    if disc < 0.0 {
        // 1 + Qξ² has the sign of r² + Q
        return Err(Error::ComplexRoot {
            discriminant: if xi.is_finite() { disc * xi * xi } else { q },
        });
    }
    let root = disc.sqrt();
    let r = ratio.abs();
    let eta = match branch {
        Branch::Upper => {
            let denom = r + root;
            if denom == 0.0 {
                return Err(Error::SingularBranch { q, xi });
            }
            2.0 / denom
        }
        Branch::Lower => {
            if q == 0.0 || xi == 0.0 {
                return Err(Error::SingularBranch { q, xi });
            }
            2.0 * (root + r) / q.abs()
        }
    };
    Ok(eta)
}

/// Second-order enhancement `η` as a function of ξ.
pub fn second_order_eta(xi: f64, q: f64, branch: Branch) -> Result<f64> {
    if xi.is_infinite() {
        return eta_from_ratio(0.0, q, branch);
    }
    let x = q * xi * xi;
    if 1.0 + x < 0.0 {
        return Err(Error::ComplexRoot {
            discriminant: 1.0 + x,
        });
    }
    let s = (1.0 + x).sqrt();
    let a = xi.abs();
    match branch {
        Branch::Upper => Ok(2.0 * a / (1.0 + s)),
        Branch::Lower => {
            // 1 − √(1+x) = −x / (1 + √(1+x))
            if q == 0.0 || xi == 0.0 {
                return Err(Error::SingularBranch { q, xi });
            }
            Ok(2.0 * (1.0 + s) / (q.abs() * a))
        }
    }
}

/// Second-order beat. Returns `(Δω, η)`.
///
/// `η` is a magnitude. The beat keeps the sign of `beat0` times the sign of
/// ξ, i.e. the direction in which the test resonance is pulled.
pub fn second_order_beat(beat0: f64, xi: f64, q: f64, branch: Branch) -> Result<(f64, f64)> {
    let eta = second_order_eta(xi, q, branch)?;
    Ok((beat0 * eta * xi.signum(), eta))
}

/// Saturation bound `2/√|Q|`.
pub fn eta_max(q: f64) -> Result<f64> {
    if q == 0.0 {
        return Err(Error::ZeroQ);
    }
    Ok(2.0 / q.abs().sqrt())
}

/// One sample of the enhancement curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    /// `n_g / n₀`.
    pub ratio: f64,
    pub branch: Branch,
    pub eta: Result<f64>,
}

/// Half-width of the exclusion zone around branch singularities.
pub const SINGULARITY_EXCLUSION: f64 = 1e-12;

/// Samples η against `n_g/n₀` on `num_samples` uniform points of `range`
/// (inclusive), using the upper branch for `n_g ≥ 0` and the lower one for
/// `n_g < 0`. Failed samples carry their error instead of a value.
pub fn figure3_curve(q: f64, range: (f64, f64), num_samples: usize) -> Result<Vec<CurvePoint>> {
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::invalid("range", "need finite bounds with lo <= hi"));
    }
    if num_samples == 0 {
        return Err(Error::invalid("num_samples", "need at least one sample"));
    }
    let step = if num_samples > 1 {
        (hi - lo) / (num_samples - 1) as f64
    } else {
        0.0
    };
    Ok((0..num_samples)
        .map(|k| {
            let ratio = if k + 1 == num_samples && num_samples > 1 {
                hi
            } else {
                lo + step * k as f64
            };
            let branch = Branch::for_group_index(ratio);
            let eta = if q == 0.0 && ratio.abs() <= SINGULARITY_EXCLUSION {
                Err(Error::SingularBranch { q, xi: f64::INFINITY })
            } else {
                eta_from_ratio(ratio, q, branch)
            };
            CurvePoint { ratio, branch, eta }
        })
        .collect())
}
