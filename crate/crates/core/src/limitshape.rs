//! First-order theory of the constrained polymer.
//!
//! The constant `c_α > 0` solves `f(c) = 1/2 + α` with
//! `f(c) = (1+c)/c · (1 − ln(1+c)/c)`, which increases from `1/2` to `1`.
//! The limit curve is `ψ_α(x) = (1+c)x / (1+cx)` and the normalized length
//! constant is `w_α = √(1+c) · ln(1+c)/c = J(ψ_α)`, where
//! `J(φ) = ∫₀¹ √φ'(s) ds`.
//!
//! Both `f` and `w` cancel catastrophically near `c = 0`; below
//! [`SERIES_CROSSOVER`] six-term Taylor expansions are used instead.

use crate::error::{Error, Result};
use crate::geometry::{hausdorff_distance, IncreasingPath, Polyline};

/// Below this `c` the series branches of `f` and `w` are used.
pub const SERIES_CROSSOVER: f64 = 1e-4;

/// Required residual of the defining equation.
pub const ROOT_RESIDUAL: f64 = 1e-10;

fn f_direct(c: f64) -> f64 {
    (1.0 + c) / c * (1.0 - c.ln_1p() / c)
}

/// `f(c) = 1/2 + Σ_{k≥1} (−1)^{k+1} c^k / ((k+1)(k+2))`, six terms.
fn f_series(c: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = 1.0;
    for k in 1..=6 {
        pow *= c;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        sum += sign * pow / ((k + 1) * (k + 2)) as f64;
    }
    0.5 + sum
}

/// The area functional `f(c)`; `f(0) = 1/2`.
pub fn area_fraction(c: f64) -> f64 {
    if c < SERIES_CROSSOVER {
        f_series(c)
    } else {
        f_direct(c)
    }
}

fn w_direct(c: f64) -> f64 {
    (1.0 + c).sqrt() * c.ln_1p() / c
}

/// Product of the six-term series of `√(1+c)` and `ln(1+c)/c`.
fn w_series(c: f64) -> f64 {
    const SQRT: [f64; 6] = [1.0, 0.5, -0.125, 0.0625, -0.0390625, 0.02734375];
    let log: [f64; 6] = std::array::from_fn(|k| {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sign / (k + 1) as f64
    });
    let mut out = 0.0;
    let mut pow = 1.0;
    for k in 0..6 {
        let coef: f64 = (0..=k).map(|i| SQRT[i] * log[k - i]).sum();
        out += coef * pow;
        pow *= c;
    }
    out
}

/// `w(c) = √(1+c)·ln(1+c)/c`.
pub fn w_of(c: f64) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::invalid(format!("c must be positive, got {c}")));
    }
    Ok(if c < SERIES_CROSSOVER { w_series(c) } else { w_direct(c) })
}

/// Root of `f(c) = 1/2 + α` by bisection.
pub fn solve_c(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::invalid(format!("alpha must lie in (0, 1/2), got {alpha}")));
    }
    let target = 0.5 + alpha;
    let g = |c: f64| area_fraction(c) - target;
    let (mut lo, mut hi) = (1e-8, 1.0);
    while g(lo) > 0.0 {
        lo *= 0.5;
        if lo < f64::MIN_POSITIVE {
            return Err(Error::invalid(format!("alpha {alpha} too small to resolve")));
        }
    }
    while g(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::invalid(format!("alpha {alpha} too close to 1/2")));
        }
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let c = if g(lo).abs() <= g(hi).abs() { lo } else { hi };
    if g(c).abs() > ROOT_RESIDUAL {
        return Err(Error::invalid(format!(
            "alpha {alpha}: residual {} above {ROOT_RESIDUAL}",
            g(c).abs()
        )));
    }
    Ok(c)
}

/// `(α, c_α, w_α)` with the limit curve evaluator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitShape {
    pub alpha: f64,
    pub c: f64,
    pub w: f64,
}

impl LimitShape {
    pub fn new(alpha: f64) -> Result<Self> {
        let c = solve_c(alpha)?;
        Ok(LimitShape {
            alpha,
            c,
            w: w_of(c)?,
        })
    }

    /// `ψ_α(x)` without domain checks.
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (1.0 + self.c) * x / (1.0 + self.c * x)
    }

    /// `ψ_{α,n}` sampled on `segments + 1` evenly spaced abscissae.
    pub fn scaled_polyline(&self, n: f64, segments: usize) -> Polyline {
        Polyline::from_fn(0.0, n, segments, |x| n * self.eval(x / n)).expect("ψ is finite")
    }
}

pub fn psi(shape: &LimitShape, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::invalid(format!("x = {x} is outside [0, 1]")));
    }
    Ok(shape.eval(x))
}

/// `ψ_{α,n}(x) = n ψ_α(x / n)`.
pub fn psi_scaled(shape: &LimitShape, n: f64, x: f64) -> Result<f64> {
    if !(n > 0.0) || !(0.0..=n).contains(&x) {
        return Err(Error::invalid(format!("x = {x} is outside [0, {n}]")));
    }
    Ok(n * shape.eval(x / n))
}

/// `J(φ) = ∫ √φ'`, exact on piecewise-linear input: each segment contributes
/// `√(Δx·Δy)`.
#[allow(non_snake_case)]
pub fn J_functional(phi: &Polyline) -> Result<f64> {
    let pts = phi.points();
    let (first, last) = (pts[0], pts[pts.len() - 1]);
    if first.x.abs() > 1e-12 || (last.x - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!(
            "x-range must be [0, 1], got [{}, {}]",
            first.x, last.x
        )));
    }
    let mut total = 0.0;
    for (a, b) in phi.segments() {
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        if dy < 0.0 {
            return Err(Error::InvalidInput(format!(
                "decreasing segment from ({}, {}) to ({}, {})",
                a.x, a.y, b.x, b.y
            )));
        }
        total += (dx * dy).sqrt();
    }
    Ok(total)
}

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// Hausdorff distance between the path and `ψ_{α,n}` at sampling step `ds`.
///
/// The curve is replaced by an inscribed polyline. With `k` equal x-steps its
/// chord error is at most `(n/k)² max|ψ_n''| / 8 = n c (1+c) / (4k²)`, so
/// `k = ⌈√(n c (1+c) / ds)⌉` keeps it below `ds / 4` and the total error
/// below `5 ds / 4`.
pub fn deviation_from_limit(path: &IncreasingPath, shape: &LimitShape, n: f64, ds: f64) -> Result<f64> {
    if !(ds > 0.0 && ds.is_finite()) {
        return Err(Error::invalid(format!("sampling step must be positive, got {ds}")));
    }
    let c = shape.c;
    let segments = (n * c * (1.0 + c) / ds).sqrt().ceil().clamp(8.0, 1e7) as usize;
    let curve = shape.scaled_polyline(n, segments);
    hausdorff_distance(&path.to_polyline(), &curve, ds)
}
