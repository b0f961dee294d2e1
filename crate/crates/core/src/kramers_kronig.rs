//! Principal-value Hilbert transform used to check Kramers-Kronig
//! consistency of the susceptibility.
//!
//! For a response analytic in the upper half plane,
//! `Re χ(ω) = (1/π) P∫ Im χ(ω′)/(ω′ − ω) dω′`. The singularity is removed by
//! subtraction,
//!
//! ```text
//! P∫ₐᵇ f(x)/(x − y) dx = ∫ₐᵇ (f(x) − f(y))/(x − y) dx + f(y)·ln((b − y)/(y − a))
//! ```
//!
//! and the regular remainder is integrated with the trapezoid rule.

use std::f64::consts::PI;

use crate::medium::{susceptibility, RamanMediumParams};

/// Uniform integration grid on `[lo, hi]`.
#[derive(Debug, Clone)]
pub struct HilbertGrid {
    lo: f64,
    step: f64,
    values: Vec<f64>,
}

impl HilbertGrid {
    /// Tabulates `f` on `points` uniform nodes (endpoints included).
    pub fn tabulate(f: impl Fn(f64) -> f64, lo: f64, hi: f64, points: usize) -> Self {
        assert!(points >= 3 && hi > lo);
        let step = (hi - lo) / (points - 1) as f64;
        let values = (0..points).map(|k| f(lo + step * k as f64)).collect();
        HilbertGrid { lo, step, values }
    }

    fn hi(&self) -> f64 {
        self.lo + self.step * (self.values.len() - 1) as f64
    }

    /// `(1/π) P∫ f(x)/(x − y) dx` over the tabulated interval. `f_at_y` is
    /// `f(y)` evaluated exactly; `y` must lie strictly inside the grid.
    pub fn principal_value(&self, y: f64, f_at_y: f64) -> f64 {
        let (lo, hi) = (self.lo, self.hi());
        assert!(y > lo && y < hi, "evaluation point outside the grid");
        let n = self.values.len();
        let mut sum = 0.0;
        for (k, &fx) in self.values.iter().enumerate() {
            let x = lo + self.step * k as f64;
            let dx = x - y;
            let term = if dx.abs() < 1e-9 * self.step {
                // removable point: the integrand tends to f'(y)
                (self.values[k + 1] - self.values[k - 1]) / (2.0 * self.step)
            } else {
                (fx - f_at_y) / dx
            };
            let weight = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
            sum += weight * term;
        }
        (sum * self.step + f_at_y * ((hi - y) / (y - lo)).ln()) / PI
    }
}

/// Re χ reconstructed from Im χ at each of `at`, integrating over
/// `center ± half_width` on `points` nodes.
pub fn reconstruct_real_part(
    p: &RamanMediumParams,
    center: f64,
    half_width: f64,
    points: usize,
    at: &[f64],
) -> Vec<f64> {
    // integrate in detuning coordinates to keep the grid well resolved
    let im = |x: f64| susceptibility(center + x, p).im;
    let grid = HilbertGrid::tabulate(im, -half_width, half_width, points);
    at.iter()
        .map(|&w| {
            let y = w - center;
            grid.principal_value(y, im(y))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lorentzian_pair() {
        // Im part of 1/(x + i) is -1/(x²+1); its real part is x/(x²+1)
        let grid = HilbertGrid::tabulate(|x| -1.0 / (x * x + 1.0), -2000.0, 2000.0, 200_001);
        for y in [-3.0, -0.5, 0.013, 1.0, 4.2] {
            let got = grid.principal_value(y, -1.0 / (y * y + 1.0));
            let want = y / (y * y + 1.0);
            assert!((got - want).abs() < 1e-5, "{y}: {got} vs {want}");
        }
    }

    #[test]
    fn evaluation_on_a_node() {
        let grid = HilbertGrid::tabulate(|x| -1.0 / (x * x + 1.0), -1000.0, 1000.0, 100_001);
        let got = grid.principal_value(0.5, -1.0 / 1.25);
        assert!((got - 0.4).abs() < 1e-5);
    }
}
