//! Bracketed scalar root finding.
//!
//! The solver keeps a sign-changing bracket at all times. Each iteration
//! proposes a secant point from the bracket ends and falls back to the
//! midpoint whenever the secant point leaves the bracket or fails to halve
//! it within two consecutive steps, so the bracket width never increases.

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 400;

/// Outcome of a bracketed solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub iterations: usize,
    /// Final bracket width.
    pub width: f64,
}

/// Finds a root of `f` in `[lo, hi]`.
///
/// Stops once the bracket is narrower than `rel_tol * |x|` or cannot be
/// split any further in binary64. `what` names the quantity in errors.
pub fn solve_bracketed<F>(f: F, lo: f64, hi: f64, rel_tol: f64, what: &'static str) -> Result<Root>
where
    F: Fn(f64) -> f64,
{
    solve_bracketed_traced(f, lo, hi, rel_tol, what, |_, _| {})
}

/// As [`solve_bracketed`], reporting every intermediate bracket to `trace`.
pub fn solve_bracketed_traced<F, T>(
    f: F,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    what: &'static str,
    mut trace: T,
) -> Result<Root>
where
    F: Fn(f64) -> f64,
    T: FnMut(f64, f64),
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(Root {
            x: a,
            iterations: 0,
            width: 0.0,
        });
    }
    if fb == 0.0 {
        return Ok(Root {
            x: b,
            iterations: 0,
            width: 0.0,
        });
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::NotBracketed { what, lo: a, hi: b });
    }
    trace(a, b);

    let mut slow_steps = 0;
    for it in 1..=MAX_ITERATIONS {
        let width = b - a;
        let mid = a + 0.5 * width;
        if mid <= a || mid >= b || width <= rel_tol * mid.abs().max(a.abs()).max(b.abs()) {
            return Ok(Root {
                x: pick(a, fa, b, fb),
                iterations: it - 1,
                width,
            });
        }

        let secant = b - fb * (b - a) / (fb - fa);
        let x = if slow_steps < 2 && secant > a && secant < b && secant.is_finite() {
            secant
        } else {
            mid
        };
        let fx = f(x);
        if fx == 0.0 {
            trace(x, x);
            return Ok(Root {
                x,
                iterations: it,
                width: 0.0,
            });
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        slow_steps = if b - a > 0.5 * width { slow_steps + 1 } else { 0 };
        trace(a, b);
    }
    Err(Error::NoConvergence {
        what,
        iterations: MAX_ITERATIONS,
    })
}

fn pick(a: f64, fa: f64, b: f64, fb: f64) -> f64 {
    if fa.abs() <= fb.abs() {
        a
    } else {
        b
    }
}

/// Scans `f` on `points` log-spaced abscissae in `[lo, hi]` (both > 0) and
/// returns every cell `(x_k, x_{k+1})` across which `f` changes sign.
pub fn sign_change_cells<F>(f: F, lo: f64, hi: f64, points: usize) -> Vec<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    debug_assert!(lo > 0.0 && hi > lo && points >= 2);
    let (llo, lhi) = (lo.ln(), hi.ln());
    let at = |k: usize| {
        if k == 0 {
            lo
        } else if k == points - 1 {
            hi
        } else {
            (llo + (lhi - llo) * k as f64 / (points - 1) as f64).exp()
        }
    };
    let mut cells = Vec::new();
    let mut x_prev = at(0);
    let mut f_prev = f(x_prev);
    for k in 1..points {
        let x = at(k);
        let fx = f(x);
        if f_prev == 0.0 || (fx != 0.0 && fx.signum() != f_prev.signum()) {
            cells.push((x_prev, x));
        }
        x_prev = x;
        f_prev = fx;
    }
    if f_prev == 0.0 {
        cells.push((x_prev, x_prev));
    }
    cells
}
