//! The area-trapping polymer: longest directed path from `(0,0)` to `(n,n)`
//! whose trapped area is at least `(1/2 + α) n²`.
//!
//! Two solvers are provided.
//!
//! * **Exact** (`N ≤ exact_cap`): `g(p, ℓ)` is the largest area trapped by a
//!   path from the origin to `p` through exactly `ℓ` points. The answer is
//!   the largest `ℓ` with `g(sink, ℓ) ≥ threshold`, and the reported path
//!   traps the most area among paths of that length.
//! * **Lagrangian**: for a multiplier `λ ≥ 0` the relaxed problem
//!   `max |γ| + λ·A(γ)` is a longest-path DP over the sorted cloud. Every
//!   `λ` yields the weak-duality bound `score(λ) − λ·threshold ≥ L_α`. The
//!   multiplier is searched by intersecting the score lines of the current
//!   feasible and infeasible optimizers (falling back to bisection), which
//!   lands on the dual minimizer after a handful of DP passes. Infeasible
//!   optimizers are repaired by greedily dropping the vertices whose removal
//!   gains the most area. The best feasible path is reported together with
//!   the integer gap to the dual bound.
//!
//! DP ties are broken toward larger area, then toward the predecessor with
//! larger y.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{segment_area, trapped_area, IncreasingPath, Point};
use crate::sampler::PointCloud;

const SOURCE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Lagrangian,
    Exact,
    #[default]
    Auto,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Lagrangian => "lagrangian",
            Method::Exact => "exact",
            Method::Auto => "auto",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lagrangian" => Ok(Method::Lagrangian),
            "exact" => Ok(Method::Exact),
            "auto" => Ok(Method::Auto),
            _ => Err(Error::invalid(format!("unknown solver mode `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverOptions {
    pub mode: Method,
    /// Absolute multiplier tolerance; `None` means `1e-6 / n`.
    pub lambda_tol: Option<f64>,
    /// Initial upper multiplier; `None` means `4 / n`.
    pub lambda_max: Option<f64>,
    pub max_bisect: usize,
    pub exact_cap: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            mode: Method::Auto,
            lambda_tol: None,
            lambda_max: None,
            max_bisect: 60,
            exact_cap: 4000,
        }
    }
}

impl SolverOptions {
    pub fn with_mode(mode: Method) -> Self {
        SolverOptions {
            mode,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [("lambda_tol", self.lambda_tol), ("lambda_max", self.lambda_max)] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::invalid(format!("{name} must be positive, got {v}")));
                }
            }
        }
        if self.max_bisect == 0 {
            return Err(Error::invalid("max_bisect must be at least 1"));
        }
        Ok(())
    }
}

/// Optimizer of the relaxed objective `|γ| + λ·A(γ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianOutcome {
    pub lambda: f64,
    pub score: f64,
    pub length: usize,
    pub area: f64,
    pub path: IncreasingPath,
}

/// One multiplier evaluation of the Lagrangian search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualSample {
    pub lambda: f64,
    pub score: f64,
    pub length: usize,
    pub area: f64,
}

impl DualSample {
    /// Weak-duality bound on `L_α` from this multiplier.
    pub fn bound(&self, threshold: f64) -> f64 {
        self.score - self.lambda * threshold
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstrainedSolution {
    pub alpha: f64,
    pub threshold: f64,
    pub length: usize,
    pub path: IncreasingPath,
    pub achieved_area: f64,
    pub upper_bound: f64,
    pub gap: usize,
    /// Solver that produced the answer (never `Auto`).
    pub method: Method,
    /// Multipliers visited by the Lagrangian search (empty for exact).
    pub dual_samples: Vec<DualSample>,
}

/// `(1/2 + α) n²`.
pub fn area_threshold(n: f64, alpha: f64) -> f64 {
    (0.5 + alpha) * n * n
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::invalid(format!("alpha must lie in (0, 1/2), got {alpha}")));
    }
    Ok(())
}

fn check_n(cloud: &PointCloud, n: f64) -> Result<()> {
    if !(n.is_finite() && n > 0.0) {
        return Err(Error::invalid(format!("box side must be positive, got {n}")));
    }
    if let Some(p) = cloud
        .points()
        .iter()
        .find(|p| p.x > n || p.y > n || p.x < 0.0 || p.y < 0.0)
    {
        return Err(Error::invalid(format!("point ({}, {}) lies outside [0,{n}]²", p.x, p.y)));
    }
    Ok(())
}

fn rebuild(pts: &[Point], pred: &[u32], last: u32, n: f64) -> IncreasingPath {
    let mut chain = Vec::new();
    let mut cur = last;
    while cur != SOURCE {
        chain.push(pts[cur as usize]);
        cur = pred[cur as usize];
    }
    chain.reverse();
    IncreasingPath::from_interior(n, &chain).expect("DP chains are monotone")
}

#[inline]
fn better(score: f64, area: f64, y: f64, best: (f64, f64, f64)) -> bool {
    score > best.0 || (score == best.0 && (area > best.1 || (area == best.1 && y > best.2)))
}

/// Maximizes `|γ| + λ·A(γ)` over all directed paths `(0,0) → (n,n)`.
pub fn lagrangian_best(cloud: &PointCloud, n: f64, lambda: f64) -> Result<LagrangianOutcome> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::invalid(format!("lambda must be >= 0, got {lambda}")));
    }
    check_n(cloud, n)?;
    Ok(lagrangian_kernel(cloud.points(), n, lambda))
}

fn lagrangian_kernel(pts: &[Point], n: f64, lambda: f64) -> LagrangianOutcome {
    let m = pts.len();
    let xs: Vec<f64> = pts.iter().map(|p| p.x).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.y).collect();
    let mut score = vec![0.0f64; m];
    let mut area = vec![0.0f64; m];
    let mut len = vec![0u32; m];
    let mut pred = vec![SOURCE; m];

    for i in 0..m {
        let (px, py) = (xs[i], ys[i]);
        let a0 = segment_area(Point::ORIGIN, pts[i]);
        let mut best = (1.0 + lambda * a0, a0, 0.0f64);
        let mut arg = SOURCE;
        for j in 0..i {
            let qy = ys[j];
            if qy > py {
                continue;
            }
            let seg = (px - xs[j]) * (qy + py) * 0.5;
            let s = score[j] + 1.0 + lambda * seg;
            if s >= best.0 {
                let a = area[j] + seg;
                if better(s, a, qy, best) {
                    best = (s, a, qy);
                    arg = j as u32;
                }
            }
        }
        score[i] = best.0;
        area[i] = best.1;
        len[i] = if arg == SOURCE { 1 } else { len[arg as usize] + 1 };
        pred[i] = arg;
    }

    let sink = Point::new(n, n);
    let a0 = segment_area(Point::ORIGIN, sink);
    let mut best = (lambda * a0, a0, 0.0f64);
    let mut arg = SOURCE;
    for j in 0..m {
        let seg = segment_area(pts[j], sink);
        let s = score[j] + lambda * seg;
        let a = area[j] + seg;
        if better(s, a, ys[j], best) {
            best = (s, a, ys[j]);
            arg = j as u32;
        }
    }
    let path = rebuild(pts, &pred, arg, n);
    LagrangianOutcome {
        lambda,
        score: best.0,
        length: if arg == SOURCE { 0 } else { len[arg as usize] as usize },
        area: best.1,
        path,
    }
}

/// Largest area trapped by a path, and one path attaining it.
fn max_area_path(pts: &[Point], n: f64) -> (f64, IncreasingPath) {
    let m = pts.len();
    let mut area = vec![0.0f64; m];
    let mut pred = vec![SOURCE; m];
    for i in 0..m {
        let p = pts[i];
        let mut best = (segment_area(Point::ORIGIN, p), 0.0f64);
        let mut arg = SOURCE;
        for j in 0..i {
            let q = pts[j];
            if q.y > p.y {
                continue;
            }
            let a = area[j] + segment_area(q, p);
            if a > best.0 || (a == best.0 && q.y > best.1) {
                best = (a, q.y);
                arg = j as u32;
            }
        }
        area[i] = best.0;
        pred[i] = arg;
    }
    let sink = Point::new(n, n);
    let mut best = segment_area(Point::ORIGIN, sink);
    let mut arg = SOURCE;
    for j in 0..m {
        let a = area[j] + segment_area(pts[j], sink);
        if a > best {
            best = a;
            arg = j as u32;
        }
    }
    (best, rebuild(pts, &pred, arg, n))
}

/// Largest trapped area over all directed paths `(0,0) → (n,n)`.
pub fn max_trappable_area(cloud: &PointCloud, n: f64) -> Result<f64> {
    check_n(cloud, n)?;
    Ok(max_area_path(cloud.points(), n).0)
}

/// Exact per-length max-area DP. `g[ℓ]` at the sink is returned along with
/// the reconstruction tables.
struct LengthAreaTable {
    /// Offsets into the per-length slots: point `i` owns lengths `1..=levels[i]`.
    offset: Vec<usize>,
    levels: Vec<u32>,
    pred: Vec<u32>,
    sink_g: Vec<f64>,
    sink_pred: Vec<u32>,
}

impl LengthAreaTable {
    fn build(pts: &[Point], n: f64) -> Self {
        let m = pts.len();
        let levels = crate::lpp::chain_levels(pts);
        let mut offset = Vec::with_capacity(m + 1);
        let mut total = 0usize;
        for &l in &levels {
            offset.push(total);
            total += l as usize;
        }
        offset.push(total);
        // slot k of point i holds length k + 1
        let mut g = vec![f64::NEG_INFINITY; total];
        let mut pred = vec![SOURCE; total];
        let mut pred_y = vec![f64::NEG_INFINITY; total];

        for i in 0..m {
            let p = pts[i];
            let base = offset[i];
            let li = levels[i] as usize;
            g[base] = segment_area(Point::ORIGIN, p);
            pred_y[base] = 0.0;
            for j in 0..i {
                let q = pts[j];
                if q.y > p.y {
                    continue;
                }
                let seg = segment_area(q, p);
                let qb = offset[j];
                // length ℓ at p extends length ℓ-1 at q
                let upto = li.min(levels[j] as usize + 1);
                let (head, tail) = g.split_at_mut(base);
                let gi = &mut tail[..li];
                let gj = &head[qb..qb + levels[j] as usize];
                for k in 1..upto {
                    let cand = gj[k - 1] + seg;
                    let slot = base + k;
                    if cand > gi[k] || (cand == gi[k] && q.y > pred_y[slot]) {
                        gi[k] = cand;
                        pred[slot] = j as u32;
                        pred_y[slot] = q.y;
                    }
                }
            }
        }

        let sink = Point::new(n, n);
        let top = levels.iter().copied().max().unwrap_or(0) as usize;
        let mut sink_g = vec![f64::NEG_INFINITY; top + 1];
        let mut sink_pred = vec![SOURCE; top + 1];
        let mut sink_y = vec![f64::NEG_INFINITY; top + 1];
        sink_g[0] = segment_area(Point::ORIGIN, sink);
        for j in 0..m {
            let seg = segment_area(pts[j], sink);
            let qb = offset[j];
            for l in 1..=levels[j] as usize {
                let cand = g[qb + l - 1] + seg;
                if cand > sink_g[l] || (cand == sink_g[l] && pts[j].y > sink_y[l]) {
                    sink_g[l] = cand;
                    sink_pred[l] = j as u32;
                    sink_y[l] = pts[j].y;
                }
            }
        }
        LengthAreaTable {
            offset,
            levels,
            pred,
            sink_g,
            sink_pred,
        }
    }

    fn path(&self, pts: &[Point], n: f64, length: usize) -> IncreasingPath {
        let mut chain = Vec::with_capacity(length);
        let mut cur = self.sink_pred[length];
        let mut l = length;
        while cur != SOURCE {
            chain.push(pts[cur as usize]);
            debug_assert!(l >= 1 && l <= self.levels[cur as usize] as usize);
            let slot = self.offset[cur as usize] + l - 1;
            cur = self.pred[slot];
            l -= 1;
        }
        debug_assert_eq!(l, 0);
        chain.reverse();
        IncreasingPath::from_interior(n, &chain).expect("DP chains are monotone")
    }
}

/// Maximum trapped area for every exact path length `0..=L(0, (n,n))`.
/// Exposed for diagnostics and tests.
pub fn area_by_length(cloud: &PointCloud, n: f64, cap: usize) -> Result<Vec<f64>> {
    check_n(cloud, n)?;
    check_cap(cloud, cap)?;
    Ok(LengthAreaTable::build(cloud.points(), n).sink_g)
}

/// Exact solver with the default size cap.
pub fn exact_length_area_dp(cloud: &PointCloud, n: f64, alpha: f64) -> Result<ConstrainedSolution> {
    exact_with_cap(cloud, n, alpha, SolverOptions::default().exact_cap)
}

fn check_cap(cloud: &PointCloud, cap: usize) -> Result<()> {
    if cloud.count() > cap {
        return Err(Error::SizeCapExceeded {
            size: cloud.count(),
            cap,
        });
    }
    Ok(())
}

fn exact_with_cap(cloud: &PointCloud, n: f64, alpha: f64, cap: usize) -> Result<ConstrainedSolution> {
    check_alpha(alpha)?;
    check_n(cloud, n)?;
    check_cap(cloud, cap)?;
    let table = LengthAreaTable::build(cloud.points(), n);
    exact_answer(&table, cloud.points(), n, alpha)
}

/// Reads `L_α` and a maximizer off a finished table; the table itself does
/// not depend on α.
fn exact_answer(table: &LengthAreaTable, pts: &[Point], n: f64, alpha: f64) -> Result<ConstrainedSolution> {
    let threshold = area_threshold(n, alpha);
    let length = match table.sink_g.iter().rposition(|&a| a >= threshold) {
        Some(l) => l,
        None => {
            return Err(Error::Infeasible {
                threshold,
                max_trappable_area: table.sink_g.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            })
        }
    };
    let path = table.path(pts, n, length);
    let achieved_area = trapped_area(&path);
    debug_assert_eq!(achieved_area, table.sink_g[length]);
    Ok(ConstrainedSolution {
        alpha,
        threshold,
        length,
        path,
        achieved_area,
        upper_bound: length as f64,
        gap: 0,
        method: Method::Exact,
        dual_samples: Vec::new(),
    })
}

/// Drops vertices one at a time, always the one whose removal gains the
/// most area, until the path traps `threshold`. `None` if no removal gains
/// area before the threshold is met.
fn greedy_repair(path: &IncreasingPath, threshold: f64) -> Option<IncreasingPath> {
    let n = path.n();
    let mut v = path.vertices().to_vec();
    let mut area = trapped_area(path);
    while area < threshold {
        let mut best: Option<(usize, f64)> = None;
        for i in 1..v.len() - 1 {
            let gain = segment_area(v[i - 1], v[i + 1])
                - segment_area(v[i - 1], v[i])
                - segment_area(v[i], v[i + 1]);
            if gain > 0.0 && best.is_none_or(|(_, g)| gain > g) {
                best = Some((i, gain));
            }
        }
        let (i, gain) = best?;
        v.remove(i);
        area += gain;
    }
    let repaired = IncreasingPath::new(n, v).ok()?;
    (trapped_area(&repaired) >= threshold).then_some(repaired)
}

/// Best Lagrangian score of any path through each point: the forward
/// score of a chain from the source ending at the point plus the backward
/// score from the point to the sink.
fn through_scores(pts: &[Point], n: f64, lambda: f64) -> Vec<f64> {
    let m = pts.len();
    let mut fwd = vec![0.0f64; m];
    for i in 0..m {
        let p = pts[i];
        let mut best = 1.0 + lambda * segment_area(Point::ORIGIN, p);
        for j in 0..i {
            if pts[j].y <= p.y {
                best = best.max(fwd[j] + 1.0 + lambda * segment_area(pts[j], p));
            }
        }
        fwd[i] = best;
    }
    let sink = Point::new(n, n);
    let mut bwd = vec![0.0f64; m];
    for i in (0..m).rev() {
        let p = pts[i];
        let mut best = lambda * segment_area(p, sink);
        for j in i + 1..m {
            if pts[j].y >= p.y {
                best = best.max(bwd[j] + 1.0 + lambda * segment_area(p, pts[j]));
            }
        }
        bwd[i] = best;
    }
    fwd.iter().zip(&bwd).map(|(f, b)| f + b).collect()
}

/// Closes a duality gap by reduced-cost fixing. A feasible path longer than
/// `incumbent` scores at least `incumbent + 1 + λ·threshold` at every
/// multiplier, so each of its points has a through-score at least that
/// large. The exact length/area DP on the surviving points therefore finds
/// it if it exists.
///
/// Returns `None` when too many points survive to run the DP, `Some(None)`
/// when the incumbent is proven optimal, and `Some(Some(c))` for a longer
/// path.
fn close_gap(
    pts: &[Point],
    n: f64,
    threshold: f64,
    lambda: f64,
    incumbent: usize,
    cap: usize,
) -> Option<Option<Candidate>> {
    let cutoff = (incumbent + 1) as f64 + lambda * threshold;
    let slack = 1e-9 * (1.0 + cutoff.abs());
    let through = through_scores(pts, n, lambda);
    let survivors: Vec<Point> = pts
        .iter()
        .zip(&through)
        .filter(|(_, &t)| t >= cutoff - slack)
        .map(|(p, _)| *p)
        .collect();
    if survivors.len() > cap {
        return None;
    }
    let table = LengthAreaTable::build(&survivors, n);
    let length = match table.sink_g.iter().rposition(|&a| a >= threshold) {
        Some(l) if l > incumbent => l,
        _ => return Some(None),
    };
    let path = table.path(&survivors, n, length);
    Some(Some(Candidate {
        length,
        area: trapped_area(&path),
        path,
    }))
}

struct Candidate {
    length: usize,
    area: f64,
    path: IncreasingPath,
}

fn lagrangian_solve(
    cloud: &PointCloud,
    n: f64,
    alpha: f64,
    opts: &SolverOptions,
) -> Result<ConstrainedSolution> {
    let pts = cloud.points();
    let threshold = area_threshold(n, alpha);
    let tol = opts.lambda_tol.unwrap_or(1e-6 / n);
    let mut samples: Vec<DualSample> = Vec::new();
    let mut feasible: Vec<Candidate> = Vec::new();
    let mut infeasible: Vec<IncreasingPath> = Vec::new();

    let eval = |lambda: f64,
                    samples: &mut Vec<DualSample>,
                    feasible: &mut Vec<Candidate>,
                    infeasible: &mut Vec<IncreasingPath>| {
        let o = lagrangian_kernel(pts, n, lambda);
        samples.push(DualSample {
            lambda,
            score: o.score,
            length: o.length,
            area: o.area,
        });
        let s = *samples.last().unwrap();
        if o.area >= threshold {
            feasible.push(Candidate {
                length: o.length,
                area: o.area,
                path: o.path,
            });
        } else {
            infeasible.push(o.path);
        }
        s
    };

    let mut lo = eval(0.0, &mut samples, &mut feasible, &mut infeasible);
    if lo.area < threshold {
        let mut hi_lambda = opts.lambda_max.unwrap_or(4.0 / n);
        let mut hi = eval(hi_lambda, &mut samples, &mut feasible, &mut infeasible);
        let mut doublings = 0;
        while hi.area < threshold && doublings < 40 {
            lo = hi;
            hi_lambda *= 2.0;
            hi = eval(hi_lambda, &mut samples, &mut feasible, &mut infeasible);
            doublings += 1;
        }
        if hi.area < threshold {
            let (max_area, path) = max_area_path(pts, n);
            if max_area < threshold {
                return Err(Error::Infeasible {
                    threshold,
                    max_trappable_area: max_area,
                });
            }
            feasible.push(Candidate {
                length: path.len(),
                area: trapped_area(&path),
                path,
            });
        } else {
            let mut iterations = 0;
            while iterations < opts.max_bisect && hi.lambda - lo.lambda > tol {
                iterations += 1;
                // the score lines of the two optimizers meet at the only
                // multiplier where a new optimizer can appear between them
                let (ll, lh) = (lo.length as f64, hi.length as f64);
                let mut lambda = (ll - lh) / (hi.area - lo.area);
                let interior = lambda > lo.lambda && lambda < hi.lambda;
                if !interior || !lambda.is_finite() {
                    lambda = 0.5 * (lo.lambda + hi.lambda);
                }
                let s = eval(lambda, &mut samples, &mut feasible, &mut infeasible);
                let support = (ll + lambda * lo.area).max(lh + lambda * hi.area);
                if interior && s.score <= support + 1e-9 * (1.0 + support.abs()) {
                    break;
                }
                if s.area >= threshold {
                    hi = s;
                } else {
                    lo = s;
                }
            }
        }
    }

    for path in &infeasible {
        if let Some(p) = greedy_repair(path, threshold) {
            feasible.push(Candidate {
                length: p.len(),
                area: trapped_area(&p),
                path: p,
            });
        }
    }

    let mut best = feasible
        .into_iter()
        .max_by(|a, b| a.length.cmp(&b.length).then(a.area.total_cmp(&b.area)))
        .expect("a feasible candidate exists");
    let dual = samples
        .iter()
        .min_by(|a, b| a.bound(threshold).total_cmp(&b.bound(threshold)))
        .copied()
        .expect("at least one multiplier was evaluated");
    let mut upper_bound = dual.bound(threshold);
    if integer_gap(upper_bound, best.length) > 0 {
        if let Some(closed) = close_gap(pts, n, threshold, dual.lambda, best.length, opts.exact_cap) {
            if let Some(better) = closed {
                best = better;
            }
            upper_bound = best.length as f64;
        }
    }
    debug_assert!(best.length as f64 <= upper_bound + 1e-7 * (1.0 + upper_bound));
    let gap = integer_gap(upper_bound, best.length);
    let achieved_area = trapped_area(&best.path);
    debug_assert!(achieved_area >= threshold);
    Ok(ConstrainedSolution {
        alpha,
        threshold,
        length: best.length,
        achieved_area,
        path: best.path,
        upper_bound,
        gap,
        method: Method::Lagrangian,
        dual_samples: samples,
    })
}

/// `floor(upper_bound) − length`, with a small slack so that a bound equal
/// to an integer up to rounding is not floored one step down.
pub fn integer_gap(upper_bound: f64, length: usize) -> usize {
    let ub = (upper_bound + 1e-7 * (1.0 + upper_bound.abs())).floor();
    (ub as i64 - length as i64).max(0) as usize
}

/// Solves for `L_α(n)` and a maximizing path.
pub fn solve_constrained(
    cloud: &PointCloud,
    n: f64,
    alpha: f64,
    opts: &SolverOptions,
) -> Result<ConstrainedSolution> {
    check_alpha(alpha)?;
    check_n(cloud, n)?;
    opts.validate()?;
    match opts.mode {
        Method::Exact => exact_with_cap(cloud, n, alpha, opts.exact_cap),
        Method::Lagrangian => lagrangian_solve(cloud, n, alpha, opts),
        Method::Auto if cloud.count() <= opts.exact_cap => {
            exact_with_cap(cloud, n, alpha, opts.exact_cap)
        }
        Method::Auto => lagrangian_solve(cloud, n, alpha, opts),
    }
}

/// Solves one cloud at several α. Exact mode builds the α-independent
/// length/area table once; Lagrangian mode solves each α in parallel.
/// Infeasible α come back as `Err(Infeasible)` entries; other errors abort.
pub fn solve_constrained_many(
    cloud: &PointCloud,
    n: f64,
    alphas: &[f64],
    opts: &SolverOptions,
) -> Result<Vec<Result<ConstrainedSolution>>> {
    for &a in alphas {
        check_alpha(a)?;
    }
    check_n(cloud, n)?;
    opts.validate()?;
    let exact = match opts.mode {
        Method::Exact => {
            check_cap(cloud, opts.exact_cap)?;
            true
        }
        Method::Auto => cloud.count() <= opts.exact_cap,
        Method::Lagrangian => false,
    };
    let out: Vec<Result<ConstrainedSolution>> = if exact {
        let table = LengthAreaTable::build(cloud.points(), n);
        alphas
            .iter()
            .map(|&a| exact_answer(&table, cloud.points(), n, a))
            .collect()
    } else {
        alphas
            .par_iter()
            .map(|&a| lagrangian_solve(cloud, n, a, opts))
            .collect()
    };
    let fatal = |r: &Result<ConstrainedSolution>| matches!(r, Err(e) if !matches!(e, Error::Infeasible { .. }));
    if let Some(pos) = out.iter().position(fatal) {
        return Err(out.into_iter().nth(pos).and_then(|r| r.err()).expect("position found an error"));
    }
    Ok(out)
}

const PATH_MAGIC: &str = "# areatrap-path v1";

/// Renders a solution in the `areatrap-path v1` format.
pub fn format_solution(sol: &ConstrainedSolution) -> String {
    use std::fmt::Write as _;
    let mut s = String::new();
    writeln!(s, "{PATH_MAGIC}").unwrap();
    writeln!(
        s,
        "# n={} alpha={} length={} area={} gap={} method={}",
        sol.path.n(),
        sol.alpha,
        sol.length,
        sol.achieved_area,
        sol.gap,
        sol.method
    )
    .unwrap();
    s.push_str("x,y\n");
    for p in sol.path.vertices() {
        writeln!(s, "{},{}", p.x, p.y).unwrap();
    }
    s
}

pub fn save_solution(sol: &ConstrainedSolution, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_solution(sol)).map_err(|e| Error::io(path, e))
}

/// Reads the path vertices back from a solved-path file.
pub fn load_path(path: impl AsRef<Path>) -> Result<IncreasingPath> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let perr = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
    if lines.next().map(|(_, l)| l) != Some(PATH_MAGIC) {
        return Err(perr(1, format!("expected `{PATH_MAGIC}`")));
    }
    let (ln, header) = lines.next().ok_or_else(|| perr(2, "missing header".into()))?;
    let n: f64 = header
        .split_whitespace()
        .find_map(|f| f.strip_prefix("n="))
        .ok_or_else(|| perr(ln, "missing n".into()))?
        .parse()
        .map_err(|_| perr(ln, "bad n".into()))?;
    match lines.next() {
        Some((_, "x,y")) => {}
        _ => return Err(perr(3, "expected column header `x,y`".into())),
    }
    let mut vertices = Vec::new();
    for (ln, line) in lines.filter(|(_, l)| !l.is_empty()) {
        let (x, y) = line
            .split_once(',')
            .ok_or_else(|| perr(ln, format!("expected `x,y`, got `{line}`")))?;
        let x = x.parse().map_err(|_| perr(ln, format!("bad x `{x}`")))?;
        let y = y.parse().map_err(|_| perr(ln, format!("bad y `{y}`")))?;
        vertices.push(Point::new(x, y));
    }
    IncreasingPath::new(n, vertices).map_err(|e| Error::Validation(e.to_string()))
}
