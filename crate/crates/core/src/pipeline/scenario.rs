//! One full pass from medium parameters to the beat-note report.

use serde::Serialize;

use crate::cavity::{self, resonance_solve};
use crate::error::{Error, Result};
use crate::medium::{self, RamanMediumParams};
use crate::noise;
use crate::pipeline::band_second_dispersion;
use crate::pipeline::config::{FracMode, ScenarioConfig};
use crate::sensitivity::{self, Branch};

/// Scenario after validation and optional CAD tuning.
#[derive(Debug, Clone)]
pub struct PreparedScenario {
    pub config: ScenarioConfig,
    /// Medium actually used (tuned when a target slope was given).
    pub medium: RamanMediumParams,
}

impl PreparedScenario {
    pub fn new(cfg: &ScenarioConfig) -> Result<Self> {
        cfg.validate().map_err(|e| e.in_stage("config"))?;
        let medium = match cfg.cad_target_slope {
            Some(target) => medium::tune_to_cad(&cfg.medium, target, cfg.cad_knob)
                .map_err(|e| e.in_stage("tune_to_cad"))?,
            None => cfg.medium,
        };
        Ok(PreparedScenario {
            config: cfg.clone(),
            medium,
        })
    }

    /// As [`PreparedScenario::new`] with the tuning result supplied by the
    /// caller, who guarantees it came from the same medium and target.
    pub fn with_tuned_medium(cfg: &ScenarioConfig, medium: RamanMediumParams) -> Result<Self> {
        cfg.validate().map_err(|e| e.in_stage("config"))?;
        Ok(PreparedScenario {
            config: cfg.clone(),
            medium,
        })
    }

    /// Chamber index without perturbation: n₀ plus the medium's deviation
    /// from its midpoint value.
    pub fn reference_index(&self) -> impl Fn(f64) -> f64 + '_ {
        let n0 = self.config.cavity.n0;
        let flat = self.config.flat_index;
        let p = &self.medium;
        let center_offset = medium::index_offset(p.center(), p);
        move |w| {
            if flat {
                n0
            } else {
                n0 + (medium::index_offset(w, p) - center_offset)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnhancementReport {
    /// ξ = n₀/n_g.
    pub xi: f64,
    /// ñ = (ω₀/n₀)·∂n/∂ω.
    pub n_tilde: f64,
    #[serde(rename = "Q")]
    pub q: f64,
    pub f_frac: f64,
    /// n″ = band max |∂²n/∂ω²| / n₀.
    pub n_dd: f64,
    pub eta: f64,
    /// `None` when Q = 0 and the enhancement is unbounded.
    pub eta_max: Option<f64>,
    pub branch: Branch,
    /// Δω₀, the dispersionless beat.
    pub beat0: f64,
    /// `None` inside the CAD singularity window.
    pub beat_first_order: Option<f64>,
    pub beat_second_order: f64,
    pub beat_oracle: f64,
    pub omega_reference: f64,
    pub omega_test: f64,
    /// Chamber group index n₀ + ω₀·∂n/∂ω at the doublet midpoint.
    pub n_g: f64,
    pub dn_domega: f64,
    pub d2n_domega2: f64,
    pub delta_f: f64,
    #[serde(rename = "delta_S_literal")]
    pub delta_s_literal: f64,
    #[serde(rename = "delta_S_enhanced")]
    pub delta_s_enhanced: Option<f64>,
    pub medium: RamanMediumParams,
}

/// Runs medium → cavity → sensitivity → noise for one configuration.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<EnhancementReport> {
    PreparedScenario::new(cfg)?.report()
}

impl PreparedScenario {
    pub fn report(&self) -> Result<EnhancementReport> {
        let cfg = &self.config;
        let cav = &cfg.cavity;
        let pert = &cfg.perturbation;
        let (n0, omega0) = (cav.n0, cav.omega0);
        let p = &self.medium;
        let center = p.center();

        let (dn, d2n, n_dd) = if cfg.flat_index {
            (0.0, 0.0, 0.0)
        } else {
            let s = medium::sample(center, p).map_err(|e| e.in_stage("medium"))?;
            let band = band_second_dispersion(p, center, cfg.bandwidth_hz)
                .map_err(|e| e.in_stage("band_second_dispersion"))?;
            (s.dn_domega, s.d2n_domega2, band / n0)
        };

        let beat0 = cavity::dispersionless_beat(cav, pert).map_err(|e| e.in_stage("cavity"))?;
        let n_g = n0 + omega0 * dn;
        let ratio = n_g / n0;
        let xi = if n_g == 0.0 { f64::INFINITY } else { n0 / n_g };
        let beat_first_order = match sensitivity::first_order_beat(beat0, n0, omega0, dn) {
            Ok((b, _)) => Some(b),
            Err(Error::CadSingularity { .. }) => None,
            Err(e) => return Err(e.in_stage("first_order")),
        };

        let f_frac = match cfg.f_mode {
            FracMode::Bandwidth => 2.0 * std::f64::consts::PI * cfg.bandwidth_hz / omega0,
            FracMode::Perturbation => beat0.abs() / omega0,
        };
        let q = if f_frac > 0.0 {
            sensitivity::q_factor(f_frac, n_dd, omega0).map_err(|e| e.in_stage("q_factor"))?
        } else {
            0.0
        };
        let branch = Branch::for_group_index(n_g);
        let eta = sensitivity::eta_from_ratio(ratio, q, branch).map_err(|e| e.in_stage("second_order"))?;
        let beat_second_order = beat0 * eta * if ratio < 0.0 { -1.0 } else { 1.0 };
        let eta_max = sensitivity::eta_max(q).ok();

        let reference = self.reference_index();
        let shift = pert.index_shift();
        let omega_reference =
            resonance_solve(&reference, cav).map_err(|e| e.in_stage("resonance_reference"))?;
        let omega_test =
            resonance_solve(|w| reference(w) + shift, cav).map_err(|e| e.in_stage("resonance_test"))?;

        let delta_f = noise::beat_uncertainty(&cfg.detection).map_err(|e| e.in_stage("noise"))?;
        let enhancement = (eta > 0.0 && eta.is_finite()).then_some(eta);
        let ds = noise::sensing_uncertainty(delta_f, n0, pert.sigma, enhancement)
            .map_err(|e| e.in_stage("noise"))?;

        Ok(EnhancementReport {
            xi,
            n_tilde: sensitivity::n_tilde(n0, omega0, dn),
            q,
            f_frac,
            n_dd,
            eta,
            eta_max,
            branch,
            beat0,
            beat_first_order,
            beat_second_order,
            beat_oracle: omega_reference - omega_test,
            omega_reference,
            omega_test,
            n_g,
            dn_domega: dn,
            d2n_domega2: d2n,
            delta_f,
            delta_s_literal: ds.literal,
            delta_s_enhanced: ds.enhanced,
            medium: *p,
        })
    }
}

fn fmt_opt(v: Option<f64>, none: &str) -> String {
    v.map_or_else(|| none.to_string(), |x| format!("{x:.16e}"))
}

impl EnhancementReport {
    /// `key: value` lines, one per field.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(": ");
            out.push_str(&v);
            out.push('\n');
        };
        let f = |x: f64| format!("{x:.16e}");
        line("xi", f(self.xi));
        line("n_tilde", f(self.n_tilde));
        line("n_g", f(self.n_g));
        line("dn_domega", f(self.dn_domega));
        line("d2n_domega2", f(self.d2n_domega2));
        line("n_dd", f(self.n_dd));
        line("f_frac", f(self.f_frac));
        line("Q", f(self.q));
        line("branch", format!("{:?}", self.branch).to_lowercase());
        line("eta", f(self.eta));
        line("eta_max", fmt_opt(self.eta_max, "unbounded"));
        line("beat0", f(self.beat0));
        line(
            "beat_first_order",
            fmt_opt(self.beat_first_order, "unavailable (CAD singularity)"),
        );
        line("beat_second_order", f(self.beat_second_order));
        line("beat_oracle", f(self.beat_oracle));
        line("omega_reference", f(self.omega_reference));
        line("omega_test", f(self.omega_test));
        line("delta_f", f(self.delta_f));
        line("delta_S_literal", f(self.delta_s_literal));
        line("delta_S_enhanced", fmt_opt(self.delta_s_enhanced, "unavailable"));
        line("medium.pump_separation", f(self.medium.pump_separation));
        line("medium.omega1_rabi", f(self.medium.omega1_rabi));
        line("medium.omega2_rabi", f(self.medium.omega2_rabi));
        line("medium.omega_res1", f(self.medium.omega_res1));
        out
    }

    /// Numeric value of a named report field, if available.
    pub fn field(&self, name: &str) -> Option<f64> {
        Some(match name {
            "xi" => self.xi,
            "n_tilde" => self.n_tilde,
            "Q" => self.q,
            "f_frac" => self.f_frac,
            "n_dd" => self.n_dd,
            "eta" => self.eta,
            "eta_max" => return self.eta_max,
            "beat0" => self.beat0,
            "beat_first_order" => return self.beat_first_order,
            "beat_second_order" => self.beat_second_order,
            "beat_oracle" => self.beat_oracle,
            "omega_reference" => self.omega_reference,
            "omega_test" => self.omega_test,
            "chamber_n_g" => self.n_g,
            "delta_f" => self.delta_f,
            "delta_S_literal" => self.delta_s_literal,
            "delta_S_enhanced" => return self.delta_s_enhanced,
            "tuned_separation" => self.medium.pump_separation,
            "tuned_rabi" => self.medium.omega1_rabi,
            _ => return None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cavity::PerturbationModel;

    #[test]
    fn zero_perturbation_gives_zero_beats() {
        let mut cfg = ScenarioConfig::default();
        cfg.perturbation.delta_s = 0.0;
        let r = run_scenario(&cfg).unwrap();
        assert_eq!(r.beat0, 0.0);
        assert_eq!(r.beat_first_order, Some(0.0));
        assert_eq!(r.beat_second_order, 0.0);
        assert_eq!(r.beat_oracle, 0.0);
    }

    #[test]
    fn flat_index_recovers_dispersionless_beat() {
        let cfg = ScenarioConfig {
            flat_index: true,
            ..ScenarioConfig::default()
        };
        let r = run_scenario(&cfg).unwrap();
        for b in [r.beat_first_order.unwrap(), r.beat_second_order, r.beat_oracle] {
            assert!(((b - r.beat0) / r.beat0).abs() < 1e-9, "{b} vs {}", r.beat0);
        }
    }

    #[test]
    fn default_scenario_oracle_matches_closed_form() {
        let r = run_scenario(&ScenarioConfig::default()).unwrap();
        assert!((r.n_g - 0.2467).abs() < 1e-6);
        let ratio = r.beat_oracle / r.beat0;
        assert!(((ratio - r.eta) / r.eta).abs() < 1e-2, "{ratio} vs {}", r.eta);
        assert!(r.eta <= r.eta_max.unwrap());
    }

    #[test]
    fn errors_carry_their_stage() {
        let mut cfg = ScenarioConfig::default();
        cfg.cavity.linewidth_hz = 1.0;
        cfg.perturbation = PerturbationModel {
            sigma: 1e-6,
            delta_s: 1e2,
        };
        let err = run_scenario(&cfg).unwrap_err();
        match err {
            Error::Stage { stage, .. } => assert_eq!(stage, "resonance_test"),
            other => panic!("{other:?}"),
        }
        assert!(err_is_numeric(&cfg));
    }

    fn err_is_numeric(cfg: &ScenarioConfig) -> bool {
        run_scenario(cfg).unwrap_err().is_numeric()
    }

    #[test]
    fn report_text_lists_fields() {
        let r = run_scenario(&ScenarioConfig::default()).unwrap();
        let text = r.to_text();
        for key in ["eta:", "eta_max:", "beat_oracle:", "delta_S_literal:"] {
            assert!(text.contains(key), "{key}");
        }
    }
}
