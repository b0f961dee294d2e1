//! Bi-frequency-pumped Raman gain doublet.
//!
//! Each pump produces one Lorentzian gain line. With detunings
//! `δ₁ = ω − ω₁` and `δ₂ = ω − ω₁ + Δ` the susceptibility is
//!
//! ```text
//! χ(ω) = A · [ Ω₁² / (δ₁ + iΓ) + Ω₂² / (δ₂ + iΓ) ]
//! ```
//!
//! so Im χ < 0 everywhere (gain). The index is taken in the dilute limit,
//! `n = 1 + Re χ / 2`, and its derivatives follow from
//! `dᵏ/dωᵏ (δ + iΓ)⁻¹ = (−1)ᵏ k! (δ + iΓ)^−(k+1)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{
    CAD_TUNING_RTOL, DILUTE_CHI_LIMIT, SEPARATION_SEARCH_MAX, SEPARATION_SEARCH_MIN, SPEED_OF_LIGHT,
};
use crate::error::{Error, Result};
use crate::root;

/// Pump and medium parameters of the Raman doublet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RamanMediumParams {
    /// Susceptibility amplitude `A`, standing in for N|d₃₂|²/(4πħε₀Δ₀²).
    /// Carries units of seconds so that `A·Ω²/Γ` is dimensionless.
    #[serde(rename = "coupling_A")]
    pub coupling_a: f64,
    /// Rabi frequency of the first pump, rad/s.
    pub omega1_rabi: f64,
    /// Rabi frequency of the second pump, rad/s.
    pub omega2_rabi: f64,
    /// Gain-peak frequency of the first line, rad/s.
    pub omega_res1: f64,
    /// Separation of the two gain lines, rad/s. The second line sits at
    /// `omega_res1 − pump_separation`.
    pub pump_separation: f64,
    /// Inverse Raman transition lifetime, rad/s.
    pub gamma: f64,
}

/// Which pump parameter [`tune_to_cad`] adjusts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TuningKnob {
    /// Scale both Rabi frequencies by a common factor.
    RabiScale,
    /// Move the two lines apart or together about a fixed midpoint.
    #[default]
    Separation,
}

/// Medium response at one probe frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispersionSample {
    pub omega: f64,
    pub chi_re: f64,
    pub chi_im: f64,
    pub n: f64,
    /// Intensity gain coefficient, 1/m.
    pub gain: f64,
    pub dn_domega: f64,
    pub d2n_domega2: f64,
    pub n_g: f64,
}

impl RamanMediumParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("medium.coupling_A", self.coupling_a),
            ("medium.omega1_rabi", self.omega1_rabi),
            ("medium.omega2_rabi", self.omega2_rabi),
            ("medium.omega_res1", self.omega_res1),
            ("medium.pump_separation", self.pump_separation),
            ("medium.gamma", self.gamma),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
        }
        if self.coupling_a <= 0.0 {
            return Err(Error::invalid("medium.coupling_A", "must be positive"));
        }
        if self.gamma <= 0.0 {
            return Err(Error::invalid("medium.gamma", "must be positive"));
        }
        if self.pump_separation <= 0.0 {
            return Err(Error::invalid("medium.pump_separation", "must be positive"));
        }
        if self.omega1_rabi < 0.0 || self.omega2_rabi < 0.0 {
            return Err(Error::invalid(
                "medium.omega1_rabi",
                "Rabi frequencies must be non-negative",
            ));
        }
        if self.omega1_rabi == 0.0 && self.omega2_rabi == 0.0 {
            return Err(Error::invalid(
                "medium.omega1_rabi",
                "at least one pump must be on",
            ));
        }
        if self.omega_res1 <= 0.0 {
            return Err(Error::invalid("medium.omega_res1", "must be positive"));
        }
        Ok(())
    }

    /// Midpoint of the doublet, `ω₁ − Δ/2`.
    pub fn center(&self) -> f64 {
        self.omega_res1 - 0.5 * self.pump_separation
    }

    /// Frequency of the second gain line, `ω₁ − Δ`.
    pub fn omega_res2(&self) -> f64 {
        self.omega_res1 - self.pump_separation
    }

    /// Same medium with the separation changed and the midpoint held fixed.
    pub fn with_separation(&self, separation: f64) -> Self {
        let center = self.center();
        RamanMediumParams {
            pump_separation: separation,
            omega_res1: center + 0.5 * separation,
            ..*self
        }
    }

    /// Applies `f` to the complex pole factors of both lines and sums.
    fn line_sum(&self, omega: f64, f: impl Fn(Complex64) -> Complex64) -> Complex64 {
        let d1 = omega - self.omega_res1;
        let d2 = d1 + self.pump_separation;
        let w1 = self.omega1_rabi * self.omega1_rabi;
        let w2 = self.omega2_rabi * self.omega2_rabi;
        (f(Complex64::new(d1, self.gamma)) * w1 + f(Complex64::new(d2, self.gamma)) * w2) * self.coupling_a
    }
}

/// Converts SI medium quantities into the susceptibility amplitude `A`.
///
/// `density` in m⁻³, `dipole_sq` = |d₃₂|² in C²·m², `detuning` = Δ₀ in rad/s.
/// The result is N|d|²/(4πħε₀Δ₀²), in seconds.
pub fn coupling_from_si(density: f64, dipole_sq: f64, detuning: f64) -> f64 {
    const HBAR: f64 = 1.054_571_817e-34;
    const EPSILON_0: f64 = 8.854_187_812_8e-12;
    density * dipole_sq / (4.0 * std::f64::consts::PI * HBAR * EPSILON_0 * detuning * detuning)
}

/// Complex susceptibility χ(ω). Total over valid parameters.
pub fn susceptibility(omega: f64, p: &RamanMediumParams) -> Complex64 {
    p.line_sum(omega, |z| z.inv())
}

fn check_dilute(omega: f64, chi: Complex64) -> Result<()> {
    let chi_abs = chi.norm();
    if chi_abs >= DILUTE_CHI_LIMIT || !chi_abs.is_finite() {
        return Err(Error::DiluteRegimeViolation { omega, chi_abs });
    }
    Ok(())
}

/// `Re χ / 2`, the index offset from unity, without the dilute check.
pub fn index_offset(omega: f64, p: &RamanMediumParams) -> f64 {
    0.5 * susceptibility(omega, p).re
}

pub fn refractive_index(omega: f64, p: &RamanMediumParams) -> Result<f64> {
    let chi = susceptibility(omega, p);
    check_dilute(omega, chi)?;
    Ok(1.0 + 0.5 * chi.re)
}

/// Intensity gain coefficient `g = −(ω/c)·Im χ`, in 1/m.
pub fn gain_coefficient(omega: f64, p: &RamanMediumParams) -> Result<f64> {
    let chi = susceptibility(omega, p);
    check_dilute(omega, chi)?;
    Ok(-(omega / SPEED_OF_LIGHT) * chi.im)
}

/// Closed-form `(∂n/∂ω, ∂²n/∂ω²)`.
pub fn dispersion_derivatives(omega: f64, p: &RamanMediumParams) -> Result<(f64, f64)> {
    check_dilute(omega, susceptibility(omega, p))?;
    Ok(dispersion_derivatives_unchecked(omega, p))
}

pub(crate) fn dispersion_derivatives_unchecked(omega: f64, p: &RamanMediumParams) -> (f64, f64) {
    let first = p.line_sum(omega, |z| -(z * z).inv());
    let second = p.line_sum(omega, |z| (z * z * z).inv() * 2.0);
    (0.5 * first.re, 0.5 * second.re)
}

/// Group index `n + ω·∂n/∂ω`.
pub fn group_index(omega: f64, p: &RamanMediumParams) -> Result<f64> {
    Ok(sample(omega, p)?.n_g)
}

/// All medium quantities at `omega`.
pub fn sample(omega: f64, p: &RamanMediumParams) -> Result<DispersionSample> {
    let chi = susceptibility(omega, p);
    check_dilute(omega, chi)?;
    let (dn, d2n) = dispersion_derivatives_unchecked(omega, p);
    let n = 1.0 + 0.5 * chi.re;
    Ok(DispersionSample {
        omega,
        chi_re: chi.re,
        chi_im: chi.im,
        n,
        gain: -(omega / SPEED_OF_LIGHT) * chi.im,
        dn_domega: dn,
        d2n_domega2: d2n,
        n_g: n + omega * dn,
    })
}

/// ∂n/∂ω at the doublet midpoint.
pub fn center_slope(p: &RamanMediumParams) -> Result<f64> {
    Ok(dispersion_derivatives(p.center(), p)?.0)
}

/// Log-spaced scan resolution for the separation search.
const SEPARATION_SCAN_POINTS: usize = 4000;

/// Adjusts the pumps so that ∂n/∂ω at the doublet midpoint equals
/// `target_slope` (negative).
///
/// `RabiScale` rescales both Rabi frequencies by `√(target/current)` and
/// requires `Ω₁ = Ω₂`. `Separation` scans Δ over `[2.01Γ, 10³Γ]` for sign
/// changes of `slope(Δ) − target`, takes the crossing closest to the current
/// Δ and bisects it; the midpoint frequency is kept fixed.
pub fn tune_to_cad(p: &RamanMediumParams, target_slope: f64, knob: TuningKnob) -> Result<RamanMediumParams> {
    p.validate()?;
    if target_slope >= 0.0 || !target_slope.is_finite() {
        return Err(Error::invalid(
            "cad_target_slope",
            "target slope must be negative and finite",
        ));
    }
    let tuned = match knob {
        TuningKnob::RabiScale => tune_rabi(p, target_slope)?,
        TuningKnob::Separation => tune_separation(p, target_slope)?,
    };
    let reached = center_slope(&tuned)?;
    if ((reached - target_slope) / target_slope).abs() > CAD_TUNING_RTOL {
        return Err(Error::NoConvergence {
            what: "centre dispersion slope",
            iterations: 0,
        });
    }
    Ok(tuned)
}

fn tune_rabi(p: &RamanMediumParams, target: f64) -> Result<RamanMediumParams> {
    if p.omega1_rabi != p.omega2_rabi {
        return Err(Error::invalid(
            "medium.omega2_rabi",
            "rabi_scale tuning needs equal Rabi frequencies",
        ));
    }
    let current = center_slope(p)?;
    if current.is_nan() || current >= 0.0 {
        return Err(Error::SlopeSignMismatch { current, target });
    }
    let scale = (target / current).sqrt();
    Ok(RamanMediumParams {
        omega1_rabi: p.omega1_rabi * scale,
        omega2_rabi: p.omega2_rabi * scale,
        ..*p
    })
}

fn tune_separation(p: &RamanMediumParams, target: f64) -> Result<RamanMediumParams> {
    let lo = SEPARATION_SEARCH_MIN * p.gamma;
    let hi = SEPARATION_SEARCH_MAX * p.gamma;
    // Normalised residual; the slope itself spans many decades over the scan.
    let residual = |sep: f64| {
        let q = p.with_separation(sep);
        dispersion_derivatives_unchecked(q.center(), &q).0 / target - 1.0
    };
    let cells = root::sign_change_cells(residual, lo, hi, SEPARATION_SCAN_POINTS);
    let here = p.pump_separation.ln();
    let log_distance = |(a, b): (f64, f64)| {
        if here >= a.ln() && here <= b.ln() {
            0.0
        } else {
            (a.ln() - here).abs().min((b.ln() - here).abs())
        }
    };
    let (a, b) = cells
        .into_iter()
        .min_by(|x, y| log_distance(*x).total_cmp(&log_distance(*y)))
        .ok_or(Error::NotBracketed {
            what: "centre slope vs pump separation",
            lo,
            hi,
        })?;
    let sep = if a == b {
        a
    } else {
        root::solve_bracketed(residual, a, b, 1e-15, "centre slope vs pump separation")?.x
    };
    let tuned = p.with_separation(sep);
    tuned.validate()?;
    Ok(tuned)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn small_set() -> RamanMediumParams {
        RamanMediumParams {
            coupling_a: 1e-9,
            omega1_rabi: 2.0 * PI * 1e6,
            omega2_rabi: 2.0 * PI * 1e6,
            omega_res1: 2.43e15,
            pump_separation: 2.0 * PI * 4e6,
            gamma: 2.0 * PI * 5e5,
        }
    }

    // |χ| stays below the dilute limit everywhere for this coupling
    fn weak_set() -> RamanMediumParams {
        RamanMediumParams {
            coupling_a: 1e-10,
            ..small_set()
        }
    }

    #[test]
    fn single_line_on_resonance_is_pure_gain() {
        let p = RamanMediumParams {
            omega2_rabi: 0.0,
            ..small_set()
        };
        let chi = susceptibility(p.omega_res1, &p);
        assert_eq!(chi.re, 0.0);
        assert_relative_eq!(
            chi.im,
            -p.coupling_a * p.omega1_rabi.powi(2) / p.gamma,
            max_relative = 1e-15
        );
    }

    #[test]
    fn real_part_cancels_at_symmetric_center() {
        let p = small_set();
        let p = RamanMediumParams {
            coupling_a: 1e-10,
            ..p
        };
        let scale = p.coupling_a * p.omega1_rabi.powi(2) / p.gamma;
        let chi = susceptibility(p.center(), &p);
        // the midpoint is rounded to binary64, so symmetry holds to ~ulp(ω)/Γ
        assert!(chi.re.abs() < 1e-6 * scale);
        assert!(chi.im < 0.0);
        assert!((refractive_index(p.center(), &p).unwrap() - 1.0).abs() < 1e-6 * scale);
    }

    #[test]
    fn single_line_gain_and_slope() {
        let p = RamanMediumParams {
            omega2_rabi: 0.0,
            ..weak_set()
        };
        let w = p.omega_res1;
        let g = gain_coefficient(w, &p).unwrap();
        assert_relative_eq!(
            g,
            w / SPEED_OF_LIGHT * p.coupling_a * p.omega1_rabi.powi(2) / p.gamma,
            max_relative = 1e-14
        );
        let (dn, _) = dispersion_derivatives(w, &p).unwrap();
        assert_relative_eq!(
            dn,
            p.coupling_a * p.omega1_rabi.powi(2) / (2.0 * p.gamma * p.gamma),
            max_relative = 1e-14
        );
    }

    #[test]
    fn single_line_slope_matches_lorentzian_formula_off_resonance() {
        let p = RamanMediumParams {
            omega2_rabi: 0.0,
            ..weak_set()
        };
        for k in [-7.0, -1.5, -0.2, 0.4, 1.3, 3.0] {
            let delta = k * p.gamma;
            let (dn, _) = dispersion_derivatives(p.omega_res1 + delta, &p).unwrap();
            let g2 = p.gamma * p.gamma;
            let expected = 0.5 * p.coupling_a * p.omega1_rabi.powi(2) * (g2 - delta * delta)
                / (delta * delta + g2).powi(2);
            assert_relative_eq!(dn, expected, max_relative = 1e-6, epsilon = 1e-30);
        }
    }

    #[test]
    fn second_derivative_vanishes_at_symmetric_center() {
        let p = weak_set();
        let (_, d2n) = dispersion_derivatives(p.center(), &p).unwrap();
        let scale = p.coupling_a * p.omega1_rabi.powi(2) / p.gamma.powi(3);
        assert!(d2n.abs() < 1e-6 * scale);
    }

    #[test]
    fn group_index_examples() {
        let p = small_set();
        let s = sample(p.center() + 1.7 * p.gamma, &p).unwrap();
        assert_eq!(s.n_g, s.n + s.omega * s.dn_domega);
        // slope -3.1e-16 at the 2.43e15 carrier, n ≈ 1
        let n_g = 1.0 + 2.43e15 * -3.1e-16;
        assert_relative_eq!(n_g, 0.2467, max_relative = 1e-12);
    }

    #[test]
    fn imaginary_part_negative_everywhere() {
        let p = RamanMediumParams {
            omega2_rabi: 0.3 * small_set().omega1_rabi,
            ..small_set()
        };
        for k in -2000..=2000 {
            let w = p.center() + k as f64 * 0.05 * p.gamma;
            assert!(susceptibility(w, &p).im < 0.0);
        }
    }

    #[test]
    fn dilute_guard_trips() {
        let p = RamanMediumParams {
            coupling_a: 1e-6,
            ..small_set()
        };
        let err = refractive_index(p.omega_res1, &p).unwrap_err();
        assert!(matches!(err, Error::DiluteRegimeViolation { .. }));
        assert!(gain_coefficient(p.omega_res1, &p).is_err());
        assert!(dispersion_derivatives(p.omega_res1, &p).is_err());
    }

    #[test]
    fn anomalous_center_iff_resolved_doublet() {
        let base = weak_set();
        for ratio in [1.2, 1.9, 1.99, 2.01, 2.1, 3.0, 8.0] {
            let p = base.with_separation(ratio * base.gamma);
            let s = center_slope(&p).unwrap();
            assert_eq!(s < 0.0, ratio > 2.0, "ratio {ratio}");
        }
    }

    #[test]
    fn rabi_scaling_quadruples_slope_by_doubling() {
        let p = small_set();
        let s = center_slope(&p).unwrap();
        let tuned = tune_to_cad(&p, 4.0 * s, TuningKnob::RabiScale).unwrap();
        assert_relative_eq!(tuned.omega1_rabi, 2.0 * p.omega1_rabi, max_relative = 1e-15);
        assert_relative_eq!(tuned.omega2_rabi, 2.0 * p.omega2_rabi, max_relative = 1e-15);
    }

    #[test]
    fn tuning_to_current_slope_is_identity() {
        let p = small_set();
        let s = center_slope(&p).unwrap();
        for knob in [TuningKnob::RabiScale, TuningKnob::Separation] {
            let tuned = tune_to_cad(&p, s, knob).unwrap();
            assert_relative_eq!(tuned.pump_separation, p.pump_separation, max_relative = 1e-9);
            assert_relative_eq!(tuned.omega1_rabi, p.omega1_rabi, max_relative = 1e-9);
        }
    }

    #[test]
    fn rabi_knob_rejects_normal_dispersion() {
        let p = weak_set().with_separation(1.5 * weak_set().gamma);
        let err = tune_to_cad(&p, -1e-16, TuningKnob::RabiScale).unwrap_err();
        assert!(matches!(err, Error::SlopeSignMismatch { .. }));
    }

    #[test]
    fn separation_knob_reports_unreachable_target() {
        let p = small_set();
        // far steeper than the strongest anomalous slope this doublet can produce
        let err = tune_to_cad(&p, -1.0, TuningKnob::Separation).unwrap_err();
        assert!(matches!(err, Error::NotBracketed { .. }));
    }

    #[test]
    fn separation_tuning_keeps_midpoint() {
        let p = small_set();
        let s = center_slope(&p).unwrap();
        let tuned = tune_to_cad(&p, 0.9 * s, TuningKnob::Separation).unwrap();
        assert!((tuned.center() - p.center()).abs() <= 1.0);
        assert_relative_eq!(center_slope(&tuned).unwrap(), 0.9 * s, max_relative = 1e-9);
    }

    #[test]
    fn coupling_helper_scales_as_documented() {
        let a = coupling_from_si(1e17, 1e-58, 2.0 * PI * 1e9);
        let b = coupling_from_si(2e17, 1e-58, 2.0 * PI * 1e9);
        let c = coupling_from_si(1e17, 1e-58, 4.0 * PI * 1e9);
        assert_relative_eq!(b, 2.0 * a, max_relative = 1e-15);
        assert_relative_eq!(c, 0.25 * a, max_relative = 1e-15);
        assert!(a > 0.0);
    }

    // integer-valued frequencies keep the midpoint and its mirror images exact
    fn exact_set(sep: u32, gamma: u32, rabi: u32) -> RamanMediumParams {
        RamanMediumParams {
            coupling_a: 1e-12,
            omega1_rabi: rabi as f64,
            omega2_rabi: rabi as f64,
            omega_res1: 1e12,
            pump_separation: 2.0 * sep as f64,
            gamma: gamma as f64,
        }
    }

    proptest! {
        #[test]
        fn symmetric_about_center(sep in 1u32..1_000_000, gamma in 1u32..1_000_000, rabi in 1u32..10_000, x in 0u32..10_000_000) {
            let p = exact_set(sep, gamma, rabi);
            let (lo, hi) = (p.center() - x as f64, p.center() + x as f64);
            let (a, b) = (susceptibility(lo, &p), susceptibility(hi, &p));
            prop_assert!((a.im - b.im).abs() <= 1e-12 * a.im.abs());
            prop_assert!((a.re + b.re).abs() <= 1e-12 * a.re.abs().max(f64::MIN_POSITIVE));
        }

        #[test]
        fn always_gain(sep in 1u32..1_000_000, gamma in 1u32..1_000_000, rabi in 1u32..10_000, x in -1e8f64..1e8) {
            let p = exact_set(sep, gamma, rabi);
            prop_assert!(susceptibility(p.center() + x, &p).im < 0.0);
        }

        #[test]
        fn anomalous_iff_resolved(ratio in 0.1f64..50.0) {
            let p = weak_set().with_separation(ratio * weak_set().gamma);
            prop_assume!((ratio - 2.0).abs() > 1e-6);
            prop_assert_eq!(center_slope(&p).unwrap() < 0.0, ratio > 2.0);
        }

        #[test]
        fn tuning_is_idempotent(ratio in 2.5f64..20.0, scale in 0.5f64..2.0, rabi_knob in any::<bool>()) {
            let p = weak_set().with_separation(ratio * weak_set().gamma);
            let knob = if rabi_knob { TuningKnob::RabiScale } else { TuningKnob::Separation };
            let target = scale * center_slope(&p).unwrap();
            if let Ok(once) = tune_to_cad(&p, target, knob) {
                let twice = tune_to_cad(&once, target, knob).unwrap();
                prop_assert!((twice.pump_separation / once.pump_separation - 1.0).abs() <= 1e-9);
                prop_assert!((twice.omega1_rabi / once.omega1_rabi - 1.0).abs() <= 1e-9);
            }
        }
    }
}
