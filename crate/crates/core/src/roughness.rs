//! Facet and roughness statistics of constrained geodesics.
//!
//! # Anchor-angle convention
//!
//! With `O = (n, 0)`, walk the majorant clockwise, i.e. from `(n,n)` down to
//! `(0,0)`. For a facet, the endpoint met first (the one nearer `(n,n)`)
//! is measured against the vertical through `O`, the other endpoint
//! (nearer `(0,0)`) against the horizontal:
//!
//! ```text
//!   (0,n) +----------------* (n,n)      theta_upper = angle(O->b, vertical)
//!         |          b  _-'|            theta_lower = angle(O->a, horizontal)
//!         |        _-*'    |
//!         |    a *'        |
//!         |   _-'          |
//!   (0,0) *----------------+ O = (n,0)
//! ```
//!
//! A facet is δ-interior when `min(theta_lower, theta_upper) ≥ δ`. The
//! first facet always starts at `(0,0)` (horizontal angle 0) and the last
//! always ends at `(n,n)` (vertical angle 0), so for `δ > 0` neither corner
//! facet is ever interior.

use crate::constrained::{integer_gap, solve_constrained_many, ConstrainedSolution, SolverOptions};
use crate::error::{Error, Result};
use crate::geometry::{
    anchor_angles, point_polyline_distance, upper_hull_indices, IncreasingPath, Point, Polyline,
};
use crate::sampler::PointCloud;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Facet {
    pub a: Point,
    pub b: Point,
    pub euclid_length: f64,
    pub angle_to_x: f64,
    pub theta_lower: f64,
    pub theta_upper: f64,
    pub interior: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoughnessReport {
    pub facets: Vec<Facet>,
    pub mfl_all: f64,
    pub mfl_interior: f64,
    pub mlr_all: f64,
    pub mlr_interior: f64,
    pub delta: f64,
}

impl RoughnessReport {
    pub fn interior_facets(&self) -> impl Iterator<Item = &Facet> {
        self.facets.iter().filter(|f| f.interior)
    }

    pub fn has_interior(&self) -> bool {
        self.facets.iter().any(|f| f.interior)
    }
}

/// Facet decomposition of the least concave majorant with MFL and MLR,
/// overall and restricted to the δ-interior part.
pub fn analyze(path: &IncreasingPath, n: f64, delta: f64) -> Result<RoughnessReport> {
    if !(0.0..std::f64::consts::FRAC_PI_4).contains(&delta) {
        return Err(Error::invalid(format!("delta must lie in [0, π/4), got {delta}")));
    }
    let verts = path.vertices();
    let hull = upper_hull_indices(verts);
    let majorant = Polyline::new(hull.iter().map(|&i| verts[i]).collect())?;

    let mut facets = Vec::with_capacity(hull.len() - 1);
    for w in hull.windows(2) {
        let (a, b) = (verts[w[0]], verts[w[1]]);
        let (_, theta_lower) = anchor_angles(a, n)?;
        let (theta_upper, _) = anchor_angles(b, n)?;
        facets.push(Facet {
            a,
            b,
            euclid_length: a.dist(&b),
            angle_to_x: (b.y - a.y).atan2(b.x - a.x),
            theta_lower,
            theta_upper,
            interior: theta_lower.min(theta_upper) >= delta,
        });
    }

    // roughness per vertex; hull corners are exactly zero
    let mut on_hull = vec![false; verts.len()];
    for &i in &hull {
        on_hull[i] = true;
    }
    let rough: Vec<f64> = verts
        .iter()
        .enumerate()
        .map(|(i, &v)| if on_hull[i] { 0.0 } else { point_polyline_distance(v, &majorant) })
        .collect();

    let max = |it: &mut dyn Iterator<Item = f64>| it.fold(0.0, f64::max);
    let mfl_all = max(&mut facets.iter().map(|f| f.euclid_length));
    let mfl_interior = max(&mut facets.iter().filter(|f| f.interior).map(|f| f.euclid_length));
    let mlr_all = max(&mut rough.iter().copied());

    // interior facets are contiguous (θ is monotone along the hull); the
    // sub-path runs between the first and last interior hull corners
    let first = facets.iter().position(|f| f.interior);
    let last = facets.iter().rposition(|f| f.interior);
    let mlr_interior = match (first, last) {
        (Some(f), Some(l)) => max(&mut rough[hull[f]..=hull[l + 1]].iter().copied()),
        _ => 0.0,
    };

    Ok(RoughnessReport {
        facets,
        mfl_all,
        mfl_interior,
        mlr_all,
        mlr_interior,
        delta,
    })
}

/// True iff every δ-interior facet makes an angle in `(ω, π/2 − ω)` with
/// the x-axis.
pub fn facet_angle_check(report: &RoughnessReport, omega: f64) -> Result<bool> {
    if !(omega > 0.0 && omega < std::f64::consts::FRAC_PI_4) {
        return Err(Error::invalid(format!("omega must lie in (0, π/4), got {omega}")));
    }
    let upper = std::f64::consts::FRAC_PI_2 - omega;
    Ok(report
        .interior_facets()
        .all(|f| f.angle_to_x > omega && f.angle_to_x < upper))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GoodStatus {
    pub good: bool,
    /// No δ-interior facet exists, so the bound holds trivially.
    pub vacuous: bool,
}

/// `(n, ε, δ)`-goodness: `mfl_interior ≤ n^{3/4 + ε}`.
pub fn is_good_alpha(report: &RoughnessReport, n: f64, epsilon: f64) -> Result<GoodStatus> {
    if !(epsilon > 0.0) {
        return Err(Error::invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    let vacuous = !report.has_interior();
    Ok(GoodStatus {
        good: vacuous || report.mfl_interior <= n.powf(0.75 + epsilon),
        vacuous,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanEntry {
    pub alpha: f64,
    /// `None` when the instance is infeasible at this α.
    pub solution: Option<ConstrainedSolution>,
    pub report: Option<RoughnessReport>,
    pub status: Option<GoodStatus>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaScan {
    pub entries: Vec<ScanEntry>,
}

impl AlphaScan {
    /// Whether some grid α is good.
    pub fn has_good(&self) -> bool {
        self.entries
            .iter()
            .any(|e| e.status.is_some_and(|s| s.good))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanParams {
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    pub grid_count: usize,
    pub epsilon: f64,
    pub delta: f64,
}

pub fn alpha_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    (0..count)
        .map(|i| {
            if i + 1 == count {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (count - 1) as f64
            }
        })
        .collect()
}

/// Solves the constrained problem at each grid α on one cloud and evaluates
/// goodness.
///
/// A path feasible at some α is feasible at every smaller α, so after the
/// per-α solves the best path found at any larger α is carried down the
/// grid (and dual bounds are carried up). This makes the reported lengths
/// nonincreasing in α even when the Lagrangian solver leaves a gap.
pub fn scan_good_alphas(
    cloud: &PointCloud,
    n: f64,
    params: &ScanParams,
    opts: &SolverOptions,
) -> Result<AlphaScan> {
    let ScanParams {
        alpha_lo,
        alpha_hi,
        grid_count,
        epsilon,
        delta,
    } = *params;
    if !(alpha_lo > 0.0 && alpha_lo < alpha_hi && alpha_hi < 0.5) {
        return Err(Error::invalid(format!(
            "need 0 < alpha_lo < alpha_hi < 1/2, got [{alpha_lo}, {alpha_hi}]"
        )));
    }
    if grid_count == 0 {
        return Err(Error::invalid("grid_count must be at least 1"));
    }
    if !(0.0..std::f64::consts::FRAC_PI_4).contains(&delta) || !(epsilon > 0.0) {
        return Err(Error::invalid("delta must lie in [0, π/4) and epsilon be positive"));
    }
    let alphas = alpha_grid(alpha_lo, alpha_hi, grid_count);
    let mut solved: Vec<Option<ConstrainedSolution>> = solve_constrained_many(cloud, n, &alphas, opts)?
        .into_iter()
        .map(Result::ok)
        .collect();

    // carry feasible paths toward smaller α
    let mut carried: Option<ConstrainedSolution> = None;
    for s in solved.iter_mut().rev().flatten() {
        if let Some(c) = &carried {
            if c.length > s.length {
                s.length = c.length;
                s.path = c.path.clone();
                s.achieved_area = c.achieved_area;
            }
        }
        if carried.as_ref().is_none_or(|c| s.length >= c.length) {
            carried = Some(s.clone());
        }
    }
    // L_α is nonincreasing, so a bound at a smaller α also bounds larger α
    let mut bound = f64::INFINITY;
    for s in solved.iter_mut().flatten() {
        bound = bound.min(s.upper_bound);
        s.upper_bound = bound;
        s.gap = integer_gap(bound, s.length);
    }

    let mut entries = Vec::with_capacity(alphas.len());
    for (alpha, sol) in alphas.into_iter().zip(solved) {
        let (report, status) = match &sol {
            Some(s) => {
                let r = analyze(&s.path, n, delta)?;
                let g = is_good_alpha(&r, n, epsilon)?;
                (Some(r), Some(g))
            }
            None => (None, None),
        };
        entries.push(ScanEntry {
            alpha,
            solution: sol,
            report,
            status,
        });
    }
    let lengths: Vec<usize> = entries
        .iter()
        .map(|e| e.solution.as_ref().map_or(0, |s| s.length))
        .collect();
    debug_assert!(lengths.windows(2).all(|w| w[0] >= w[1]));
    Ok(AlphaScan { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constrained::{solve_constrained, Method};
    use crate::geometry::{cross, least_concave_majorant, vertex_roughness};
    use crate::sampler::{sample_poisson_square, SeedSpec};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

    fn path(n: f64, pts: &[(f64, f64)]) -> IncreasingPath {
        let v: Vec<Point> = pts.iter().map(|&(x, y)| Point::new(x, y)).collect();
        IncreasingPath::from_interior(n, &v).unwrap()
    }

    #[test]
    fn diagonal_path() {
        let n = 5.0;
        let p = path(n, &[(1.0, 1.0), (2.5, 2.5), (4.0, 4.0)]);
        let r = analyze(&p, n, 0.2).unwrap();
        assert_eq!(r.facets.len(), 1);
        assert!((r.mfl_all - n * SQRT_2).abs() < 1e-12);
        assert_eq!(r.mlr_all, 0.0);
        let f = r.facets[0];
        assert!((f.angle_to_x - FRAC_PI_4).abs() < 1e-15);
        // both endpoints sit on the corner rays through O
        assert_eq!((f.theta_lower, f.theta_upper), (0.0, 0.0));
        assert!(!f.interior);
        assert!(analyze(&p, n, 0.0).unwrap().facets[0].interior);
        let near = analyze(&p, n, FRAC_PI_4 - 1e-9).unwrap();
        assert!(!near.facets[0].interior);
        assert_eq!(near.mfl_interior, 0.0);
    }

    #[test]
    fn delta_range() {
        let p = path(2.0, &[]);
        assert!(analyze(&p, 2.0, -0.1).is_err());
        assert!(analyze(&p, 2.0, FRAC_PI_4).is_err());
    }

    /// Hull from scratch: a vertex is a corner iff no pair of other vertices
    /// straddles it with it on or below their chord.
    fn brute_hull(v: &[Point]) -> Vec<Point> {
        let mut out = Vec::new();
        for (i, &p) in v.iter().enumerate() {
            let mut corner = true;
            for (j, &a) in v.iter().enumerate() {
                for (k, &b) in v.iter().enumerate() {
                    if j == i || k == i || !(a.x <= p.x && p.x <= b.x) || a.x == b.x {
                        continue;
                    }
                    if cross(a, b, p) <= 0.0 {
                        corner = false;
                    }
                }
            }
            if corner {
                out.push(p);
            }
        }
        out
    }

    #[test]
    fn two_vertex_fixture_matches_brute_hull() {
        let n = 4.0;
        let p = path(n, &[(1.0, 3.0), (3.0, 3.9)]);
        let hull = brute_hull(p.vertices());
        assert_eq!(hull, p.vertices().to_vec());
        let r = analyze(&p, n, 0.1).unwrap();
        let corners: Vec<Point> = std::iter::once(r.facets[0].a)
            .chain(r.facets.iter().map(|f| f.b))
            .collect();
        assert_eq!(corners, hull);
        assert!((r.facets[0].euclid_length - 10f64.sqrt()).abs() < 1e-12);
        assert!((r.facets[1].euclid_length - (4.81f64).sqrt()).abs() < 1e-12);
        assert!((r.facets[2].euclid_length - (1.01f64).sqrt()).abs() < 1e-12);
        assert_eq!(r.mlr_all, 0.0);
        // middle facet: a = (1,3), b = (3,3.9)
        let m = r.facets[1];
        assert!((m.theta_lower - (3.0f64).atan2(3.0)).abs() < 1e-12);
        assert!((m.theta_upper - (1.0f64).atan2(3.9)).abs() < 1e-12);
        assert!(m.interior && !r.facets[0].interior && !r.facets[2].interior);
    }

    #[test]
    fn interior_mlr_uses_subpath() {
        let n = 10.0;
        // dent near the origin lies outside the interior sub-path
        let p = path(n, &[(1.0, 0.2), (2.0, 6.0), (5.0, 8.5), (6.0, 8.6), (8.0, 9.5)]);
        let r = analyze(&p, n, 0.3).unwrap();
        let m = least_concave_majorant(&p);
        let rough = vertex_roughness(&p, &m);
        let all = rough.iter().cloned().fold(0.0, f64::max);
        assert!((r.mlr_all - all).abs() < 1e-12);
        assert!(r.mlr_interior <= r.mlr_all);
        assert!(r.mfl_interior <= r.mfl_all);
        assert!(r.mlr_interior < r.mlr_all);
    }

    #[test]
    fn facet_angles() {
        let n = 5.0;
        let diag = analyze(&path(n, &[]), n, 0.0).unwrap();
        assert!(facet_angle_check(&diag, 0.1).unwrap());
        // with δ = 0 every facet counts, including the horizontal one into (n, n)
        let flat = analyze(&path(n, &[(0.5, 5.0)]), n, 0.0).unwrap();
        assert!(flat.facets.iter().any(|f| f.angle_to_x == 0.0 && f.interior));
        assert!(!facet_angle_check(&flat, 0.1).unwrap());
        assert!(facet_angle_check(&flat, 0.0).is_err());
    }

    fn report_with(mfl: f64, interior: bool) -> RoughnessReport {
        let f = Facet {
            a: Point::new(0.0, 0.0),
            b: Point::new(1.0, 1.0),
            euclid_length: mfl,
            angle_to_x: FRAC_PI_4,
            theta_lower: 0.3,
            theta_upper: 0.3,
            interior,
        };
        RoughnessReport {
            facets: vec![f],
            mfl_all: mfl,
            mfl_interior: if interior { mfl } else { 0.0 },
            mlr_all: 0.0,
            mlr_interior: 0.0,
            delta: 0.1,
        }
    }

    #[test]
    fn goodness() {
        let n: f64 = 100.0;
        let threshold = n.powf(0.8);
        assert!((threshold - 39.81).abs() < 0.01);
        assert!(is_good_alpha(&report_with(30.0, true), n, 0.05).unwrap().good);
        assert!(!is_good_alpha(&report_with(60.0, true), n, 0.05).unwrap().good);
        let edge = is_good_alpha(&report_with(threshold, true), n, 0.05).unwrap();
        assert!(edge.good && !edge.vacuous);
        let vac = is_good_alpha(&report_with(500.0, false), n, 0.05).unwrap();
        assert!(vac.good && vac.vacuous);
        assert!(is_good_alpha(&report_with(1.0, true), n, 0.0).is_err());
    }

    #[test]
    fn facet_geometry_invariants() {
        let n = 40.0;
        for seed in 0..5 {
            let c = sample_poisson_square(n, SeedSpec::new(seed, 11)).unwrap();
            let s = solve_constrained(&c, n, 0.25, &SolverOptions::default()).unwrap();
            let r = analyze(&s.path, n, FRAC_PI_2 / 5.0).unwrap();
            let dx: f64 = r.facets.iter().map(|f| f.b.x - f.a.x).sum();
            let dy: f64 = r.facets.iter().map(|f| f.b.y - f.a.y).sum();
            assert!((dx - n).abs() < 1e-9 && (dy - n).abs() < 1e-9);
            for w in r.facets.windows(2) {
                assert!(w[1].angle_to_x < w[0].angle_to_x);
                // the lower anchor angle grows and the upper one shrinks along the hull
                assert!(w[1].theta_lower > w[0].theta_lower);
                assert!(w[1].theta_upper < w[0].theta_upper);
            }
            let interior: Vec<bool> = r.facets.iter().map(|f| f.interior).collect();
            let runs = interior.windows(2).filter(|w| w[0] != w[1]).count();
            assert!(runs <= 2, "interior facets must be contiguous");
            let m = least_concave_majorant(&s.path);
            let rough = vertex_roughness(&s.path, &m);
            assert_eq!(r.mlr_all == 0.0, rough.iter().all(|&d| d == 0.0));
        }
    }

    #[test]
    fn scan_is_monotone() {
        let n = 30.0;
        let c = sample_poisson_square(n, SeedSpec::new(3, 3)).unwrap();
        let params = ScanParams {
            alpha_lo: 0.1,
            alpha_hi: 0.35,
            grid_count: 6,
            epsilon: 0.1,
            delta: 0.3,
        };
        for mode in [Method::Exact, Method::Lagrangian] {
            let scan = scan_good_alphas(&c, n, &params, &SolverOptions::with_mode(mode)).unwrap();
            assert_eq!(scan.entries.len(), 6);
            let lens: Vec<usize> = scan
                .entries
                .iter()
                .map(|e| e.solution.as_ref().map_or(0, |s| s.length))
                .collect();
            assert!(lens.windows(2).all(|w| w[0] >= w[1]), "{lens:?}");
            for e in &scan.entries {
                if let Some(s) = &e.solution {
                    assert!(s.achieved_area >= crate::constrained::area_threshold(n, e.alpha));
                }
            }
        }
    }

    #[test]
    fn single_point_scan_at_inactive_alpha() {
        let n = 4.0;
        let c = PointCloud::new(n, 0, vec![Point::new(1.0, 3.0), Point::new(2.0, 3.5)]).unwrap();
        let params = ScanParams {
            alpha_lo: 0.01,
            alpha_hi: 0.2,
            grid_count: 1,
            epsilon: 0.1,
            delta: 0.1,
        };
        let scan = scan_good_alphas(&c, n, &params, &SolverOptions::default()).unwrap();
        assert_eq!(scan.entries.len(), 1);
        let e = &scan.entries[0];
        assert_eq!(e.solution.as_ref().unwrap().length, 2);
        let direct = analyze(&e.solution.as_ref().unwrap().path, n, 0.1).unwrap();
        assert_eq!(e.status, Some(is_good_alpha(&direct, n, 0.1).unwrap()));
    }
}
