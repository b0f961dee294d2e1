//! Shot-noise floor of the heterodyne beat-note measurement.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectionParams {
    /// Mean photon arrival rate at the detector, 1/s.
    pub photon_rate: f64,
    /// Detector quantum efficiency in (0, 1].
    pub quantum_eff: f64,
    /// Cavity resonance linewidth Δf_c, Hz.
    pub cavity_linewidth_hz: f64,
    /// Integration time τ, s.
    pub integration_time_s: f64,
}

impl DetectionParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("detection.photon_rate", self.photon_rate),
            ("detection.quantum_eff", self.quantum_eff),
            ("detection.cavity_linewidth_hz", self.cavity_linewidth_hz),
            ("detection.integration_time_s", self.integration_time_s),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, "must be positive and finite"));
            }
        }
        if self.quantum_eff > 1.0 {
            return Err(Error::invalid("detection.quantum_eff", "must not exceed 1"));
        }
        Ok(())
    }
}

/// `δf = Δf_c / √(N_ph·η_D·τ)`, Hz.
pub fn beat_uncertainty(d: &DetectionParams) -> Result<f64> {
    d.validate()?;
    Ok(d.cavity_linewidth_hz / (d.photon_rate * d.quantum_eff * d.integration_time_s).sqrt())
}

/// Sensing uncertainty in units of S.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensingUncertainty {
    /// `2π·δf·n₀/σ`.
    pub literal: f64,
    /// `literal / enhancement`, present only when an enhancement is given.
    pub enhanced: Option<f64>,
}

/// `δS = 2π·δf·n₀/σ`, plus the same value divided by `enhancement` when one
/// is supplied. The literal value is always reported.
pub fn sensing_uncertainty(
    delta_f: f64,
    n0: f64,
    sigma: f64,
    enhancement: Option<f64>,
) -> Result<SensingUncertainty> {
    if sigma == 0.0 {
        return Err(Error::ZeroSigma);
    }
    let literal = 2.0 * PI * delta_f * n0 / sigma;
    let enhanced = match enhancement {
        Some(e) if !(e > 0.0 && e.is_finite()) => {
            return Err(Error::invalid("enhancement", "must be positive and finite"))
        }
        Some(e) => Some(literal / e),
        None => None,
    };
    Ok(SensingUncertainty { literal, enhanced })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn det() -> DetectionParams {
        DetectionParams {
            photon_rate: 1e15,
            quantum_eff: 0.8,
            cavity_linewidth_hz: 1e5,
            integration_time_s: 1.0,
        }
    }

    #[test]
    fn unit_counts_give_linewidth() {
        let d = DetectionParams {
            photon_rate: 4.0,
            quantum_eff: 0.5,
            integration_time_s: 0.5,
            ..det()
        };
        assert_eq!(beat_uncertainty(&d).unwrap(), 1e5);
    }

    #[test]
    fn hundredfold_integration_gives_tenfold_reduction() {
        let a = beat_uncertainty(&det()).unwrap();
        let b = beat_uncertainty(&DetectionParams {
            integration_time_s: 100.0,
            ..det()
        })
        .unwrap();
        assert_relative_eq!(b, a / 10.0, max_relative = 1e-15);
    }

    #[test]
    fn worked_point() {
        // 1e5 / sqrt(8e14)
        assert_relative_eq!(
            beat_uncertainty(&det()).unwrap(),
            3.535_533_905_932_738e-3,
            max_relative = 1e-14
        );
    }

    #[test]
    fn invalid_detection_rejected() {
        assert!(beat_uncertainty(&DetectionParams {
            quantum_eff: 1.2,
            ..det()
        })
        .is_err());
        assert!(beat_uncertainty(&DetectionParams {
            photon_rate: 0.0,
            ..det()
        })
        .is_err());
    }

    #[test]
    fn sensing_examples() {
        assert_eq!(sensing_uncertainty(0.0, 1.0, 1e-6, None).unwrap().literal, 0.0);
        let s = sensing_uncertainty(1.0, 1.0, 2.0 * PI, None).unwrap();
        assert_relative_eq!(s.literal, 1.0, max_relative = 1e-15);
        assert_eq!(s.enhanced, None);
        let e = sensing_uncertainty(1.0, 1.0, 2.0 * PI, Some(1e4)).unwrap();
        assert_relative_eq!(e.enhanced.unwrap(), 1e-4 * e.literal, max_relative = 1e-15);
        assert_eq!(sensing_uncertainty(1.0, 1.0, 0.0, None), Err(Error::ZeroSigma));
    }

    #[test]
    fn linear_in_delta_f_inverse_in_sigma() {
        let a = sensing_uncertainty(0.3, 1.0, 1e-6, None).unwrap().literal;
        let b = sensing_uncertainty(0.6, 1.0, 1e-6, None).unwrap().literal;
        let c = sensing_uncertainty(0.3, 1.0, 2e-6, None).unwrap().literal;
        assert_relative_eq!(b, 2.0 * a, max_relative = 1e-15);
        assert_relative_eq!(c, 0.5 * a, max_relative = 1e-15);
    }
}
