use crate::constrained::{solve_constrained, ConstrainedSolution, Method, SolverOptions};
use crate::error::{Error, Result};
use crate::geometry::{cross, ConvexPolygon, Point};
use crate::lpp::{lpp_above_chord, lpp_in_convex_region, lpp_length};
use crate::oracle::{brute_above_chord, brute_constrained, brute_in_region, brute_lpp, DEFAULT_CAP};
use crate::sampler::{mix, sample_poisson_square, PointCloud, SeedSpec};

const MAX_ATTEMPTS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheckParams {
    pub trials: usize,
    pub max_points: usize,
    pub seed: u64,
    pub n: f64,
    pub alphas: Vec<f64>,
    /// Also compare the unconstrained and region-restricted LPP solvers.
    pub check_lpp: bool,
    /// Also compare the constrained solvers.
    pub check_constrained: bool,
}

impl Default for OracleCheckParams {
    fn default() -> Self {
        OracleCheckParams {
            trials: 500,
            max_points: DEFAULT_CAP,
            seed: 0,
            n: 4.0,
            alphas: vec![0.05, 0.15, 0.25, 0.35],
            check_lpp: true,
            check_constrained: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleMismatch {
    pub trial: usize,
    pub seed: SeedSpec,
    pub what: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OracleReport {
    pub clouds: usize,
    pub lpp_checks: usize,
    pub constrained_checks: usize,
    pub feasible: usize,
    /// Feasible instances where the Lagrangian certificate closed (`gap = 0`).
    pub gap_zero: usize,
    /// Feasible instances where the exact solver's area is not the least
    /// area among maximizers (informational: any maximizer is admissible).
    pub not_least_area: usize,
    pub mismatches: Vec<OracleMismatch>,
}

impl OracleReport {
    pub fn gap_zero_fraction(&self) -> f64 {
        if self.feasible == 0 {
            1.0
        } else {
            self.gap_zero as f64 / self.feasible as f64
        }
    }
}

fn unit(h: u64) -> f64 {
    (h >> 11) as f64 / (1u64 << 53) as f64
}

/// Draws a cloud conditioned on having at most `max_points` points.
fn small_cloud(params: &OracleCheckParams, trial: usize) -> Result<(SeedSpec, PointCloud)> {
    let stream = mix(params.seed, trial as u64);
    for attempt in 0..MAX_ATTEMPTS {
        let seed = SeedSpec::new(stream, attempt);
        let cloud = sample_poisson_square(params.n, seed)?;
        if cloud.count() <= params.max_points {
            return Ok((seed, cloud));
        }
    }
    Err(Error::Validation(format!(
        "no cloud with at most {} points after {MAX_ATTEMPTS} draws at n = {}",
        params.max_points, params.n
    )))
}

fn hull(mut pts: Vec<Point>) -> Vec<Point> {
    pts.sort_by(|a, b| a.lex_cmp(b));
    pts.dedup();
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn check_lpp(cloud: &PointCloud, stream: u64, n: f64, mut fail: impl FnMut(String)) -> Result<usize> {
    let r = |k: u64| unit(mix(stream, k)) * n;
    let (ax, bx) = (r(0).min(r(1)), r(0).max(r(1)));
    let (ay, by) = (r(2).min(r(3)), r(2).max(r(3)));
    let cases = [
        (Point::ORIGIN, Point::new(n, n)),
        (Point::new(ax, ay), Point::new(bx, by)),
    ];
    let mut checks = 0;
    for (u, v) in cases {
        let got = lpp_length(cloud, u, v)?;
        let want = brute_lpp(cloud, u, v, DEFAULT_CAP)?;
        if got != want {
            fail(format!("lpp_length({u:?}, {v:?}) = {got}, brute force {want}"));
        }
        if u.x < v.x {
            let got = lpp_above_chord(cloud, u, v)?.length;
            let want = brute_above_chord(cloud, u, v, DEFAULT_CAP)?;
            if got != want {
                fail(format!("lpp_above_chord({u:?}, {v:?}) = {got}, brute force {want}"));
            }
        }
        let h = hull(vec![u, v, Point::new(r(4), r(5)), Point::new(r(6), r(7))]);
        if h.len() >= 3 {
            let region = ConvexPolygon::new(h)?;
            if region.contains(u) && region.contains(v) {
                let got = lpp_in_convex_region(cloud, u, v, &region)?.length;
                let want = brute_in_region(cloud, u, v, |p| region.contains(p), DEFAULT_CAP)?;
                if got != want {
                    fail(format!("lpp_in_convex_region({u:?}, {v:?}) = {got}, brute force {want}"));
                }
            }
        }
        checks += 1;
    }
    Ok(checks)
}

fn solve(cloud: &PointCloud, n: f64, alpha: f64, mode: Method) -> Result<Option<ConstrainedSolution>> {
    match solve_constrained(cloud, n, alpha, &SolverOptions::with_mode(mode)) {
        Ok(s) => Ok(Some(s)),
        Err(Error::Infeasible { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Cross-checks the production solvers against exhaustive enumeration on
/// seeded tiny clouds.
pub fn oracle_check(params: &OracleCheckParams) -> Result<OracleReport> {
    if params.max_points > DEFAULT_CAP {
        return Err(Error::Validation(format!(
            "max_points {} exceeds the brute-force cap {DEFAULT_CAP}",
            params.max_points
        )));
    }
    if !(params.n > 0.0 && params.n.is_finite()) {
        return Err(Error::Validation("n must be positive".into()));
    }
    let mut report = OracleReport::default();
    for trial in 0..params.trials {
        let (seed, cloud) = small_cloud(params, trial)?;
        report.clouds += 1;
        let mut found = Vec::new();
        if params.check_lpp {
            report.lpp_checks += check_lpp(&cloud, seed.derived(), params.n, |w| found.push(w))?;
        }
        if params.check_constrained {
            for &alpha in &params.alphas {
                report.constrained_checks += 1;
                let brute = match brute_constrained(&cloud, params.n, alpha, DEFAULT_CAP) {
                    Ok(b) => Some(b),
                    Err(Error::Infeasible { .. }) => None,
                    Err(e) => return Err(e),
                };
                let exact = solve(&cloud, params.n, alpha, Method::Exact)?;
                let lag = solve(&cloud, params.n, alpha, Method::Lagrangian)?;
                match (&brute, &exact, &lag) {
                    (None, None, None) => {}
                    (Some(b), Some(e), Some(l)) => {
                        report.feasible += 1;
                        if e.length != b.length {
                            found.push(format!("α={alpha}: exact {} vs brute {}", e.length, b.length));
                        }
                        if l.length > b.length || l.length + l.gap < b.length {
                            found.push(format!(
                                "α={alpha}: lagrangian {} (gap {}) vs brute {}",
                                l.length, l.gap, b.length
                            ));
                        }
                        if l.upper_bound < b.length as f64 - 1e-9 {
                            found.push(format!(
                                "α={alpha}: dual bound {} below optimum {}",
                                l.upper_bound, b.length
                            ));
                        }
                        for s in [e, l] {
                            if s.achieved_area < s.threshold {
                                found.push(format!("α={alpha}: {} path is infeasible", s.method));
                            }
                        }
                        if l.gap == 0 {
                            report.gap_zero += 1;
                        }
                        if (e.achieved_area - b.least_area).abs() > 1e-9 * b.least_area {
                            report.not_least_area += 1;
                        }
                    }
                    _ => found.push(format!(
                        "α={alpha}: feasibility disagrees (brute {}, exact {}, lagrangian {})",
                        brute.is_some(),
                        exact.is_some(),
                        lag.is_some()
                    )),
                }
            }
        }
        report
            .mismatches
            .extend(found.into_iter().map(|what| OracleMismatch { trial, seed, what }));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_agrees() {
        let params = OracleCheckParams {
            trials: 25,
            seed: 42,
            ..Default::default()
        };
        let r = oracle_check(&params).unwrap();
        assert!(r.mismatches.is_empty(), "{:?}", r.mismatches);
        assert_eq!(r.clouds, 25);
        assert_eq!(r.constrained_checks, 100);
    }

    #[test]
    fn cap_is_enforced() {
        let params = OracleCheckParams {
            max_points: 13,
            ..Default::default()
        };
        assert!(matches!(oracle_check(&params), Err(Error::Validation(_))));
    }

    #[test]
    fn conditioned_clouds_respect_the_bound() {
        let params = OracleCheckParams {
            max_points: 5,
            ..Default::default()
        };
        for t in 0..20 {
            assert!(small_cloud(&params, t).unwrap().1.count() <= 5);
        }
    }
}
