//! Brute-force ground truth for tiny instances.
//!
//! Every subset of the admissible points is enumerated as a bitmask; a
//! subset is a chain when, taken in (x, then y) order, its y values never
//! decrease. Areas are recomputed here with the polygon shoelace formula so
//! that nothing is shared with the production solvers except the point
//! type.

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::sampler::PointCloud;

pub const DEFAULT_CAP: usize = 12;

fn sorted(mut pts: Vec<Point>) -> Vec<Point> {
    pts.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap().then(a.y.partial_cmp(&b.y).unwrap()));
    pts
}

fn check_cap(len: usize, cap: usize) -> Result<()> {
    if len > cap {
        return Err(Error::SizeCapExceeded { size: len, cap });
    }
    Ok(())
}

/// Calls `visit` with every nonempty chain of `pts` (which must be sorted).
fn for_each_chain(pts: &[Point], mut visit: impl FnMut(&[Point])) {
    let k = pts.len();
    let mut buf = Vec::with_capacity(k);
    for mask in 1u32..(1u32 << k) {
        buf.clear();
        let mut ok = true;
        for (i, p) in pts.iter().enumerate() {
            if mask & (1 << i) != 0 {
                if let Some(last) = buf.last() {
                    let last: &Point = last;
                    if p.y < last.y || p.x < last.x {
                        ok = false;
                        break;
                    }
                }
                buf.push(*p);
            }
        }
        if ok {
            visit(&buf);
        }
    }
}

/// Number of nonempty chains among the cloud points.
pub fn count_chains(cloud: &PointCloud, cap: usize) -> Result<usize> {
    check_cap(cloud.count(), cap)?;
    let mut count = 0;
    for_each_chain(&sorted(cloud.points().to_vec()), |_| count += 1);
    Ok(count)
}

fn in_rect(p: &Point, u: Point, v: Point) -> bool {
    u.x <= p.x && p.x <= v.x && u.y <= p.y && p.y <= v.y
}

fn longest(pts: Vec<Point>, cap: usize) -> Result<usize> {
    check_cap(pts.len(), cap)?;
    let mut best = 0;
    for_each_chain(&sorted(pts), |c| best = best.max(c.len()));
    Ok(best)
}

/// `L(u, v)` by exhaustive enumeration.
pub fn brute_lpp(cloud: &PointCloud, u: Point, v: Point, cap: usize) -> Result<usize> {
    let pts = cloud.points().iter().copied().filter(|p| in_rect(p, u, v)).collect();
    longest(pts, cap)
}

/// `L^⊟(u, v)`: only points on or above the line through `u` and `v`.
pub fn brute_above_chord(cloud: &PointCloud, u: Point, v: Point, cap: usize) -> Result<usize> {
    let slope = (v.y - u.y) / (v.x - u.x);
    let pts = cloud
        .points()
        .iter()
        .copied()
        .filter(|p| in_rect(p, u, v) && p.y >= u.y + slope * (p.x - u.x))
        .collect();
    longest(pts, cap)
}

/// Last passage restricted to points satisfying `inside`.
pub fn brute_in_region(
    cloud: &PointCloud,
    u: Point,
    v: Point,
    inside: impl Fn(Point) -> bool,
    cap: usize,
) -> Result<usize> {
    let pts = cloud
        .points()
        .iter()
        .copied()
        .filter(|p| in_rect(p, u, v) && inside(*p))
        .collect();
    longest(pts, cap)
}

/// Shoelace area of the polygon `(0,0), chain..., (n,n), (n,0)`.
pub fn shoelace_trapped_area(chain: &[Point], n: f64) -> f64 {
    let mut poly = Vec::with_capacity(chain.len() + 3);
    poly.push(Point::new(0.0, 0.0));
    poly.extend_from_slice(chain);
    poly.push(Point::new(n, n));
    poly.push(Point::new(n, 0.0));
    let k = poly.len();
    let twice: f64 = (0..k)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % k]);
            a.x * b.y - b.x * a.y
        })
        .sum();
    twice.abs() / 2.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct BruteConstrained {
    pub length: usize,
    pub threshold: f64,
    /// Least area among feasible maximizers: the canonical constrained
    /// geodesic at toy scale.
    pub least_area: f64,
    pub least_witness: Vec<Point>,
    pub greatest_area: f64,
    pub greatest_witness: Vec<Point>,
    pub maximizers: usize,
}

/// Exhaustive solution of the area-constrained problem.
pub fn brute_constrained(cloud: &PointCloud, n: f64, alpha: f64, cap: usize) -> Result<BruteConstrained> {
    check_cap(cloud.count(), cap)?;
    let threshold = (0.5 + alpha) * n * n;
    let pts = sorted(cloud.points().to_vec());

    let chord = shoelace_trapped_area(&[], n);
    let mut max_area = chord;
    let mut best: Option<BruteConstrained> = (chord >= threshold).then(|| BruteConstrained {
        length: 0,
        threshold,
        least_area: chord,
        least_witness: Vec::new(),
        greatest_area: chord,
        greatest_witness: Vec::new(),
        maximizers: 1,
    });
    for_each_chain(&pts, |c| {
        let area = shoelace_trapped_area(c, n);
        max_area = max_area.max(area);
        // the shoelace sum can round differently from the incremental one,
        // so feasibility is decided with a relative slack of a few ulps
        if area < threshold * (1.0 - 4.0 * f64::EPSILON) {
            return;
        }
        match &mut best {
            Some(b) if b.length > c.len() => {}
            Some(b) if b.length == c.len() => {
                b.maximizers += 1;
                if area < b.least_area {
                    b.least_area = area;
                    b.least_witness = c.to_vec();
                }
                if area > b.greatest_area {
                    b.greatest_area = area;
                    b.greatest_witness = c.to_vec();
                }
            }
            _ => {
                best = Some(BruteConstrained {
                    length: c.len(),
                    threshold,
                    least_area: area,
                    least_witness: c.to_vec(),
                    greatest_area: area,
                    greatest_witness: c.to_vec(),
                    maximizers: 1,
                })
            }
        }
    });
    best.ok_or(Error::Infeasible {
        threshold,
        max_trappable_area: max_area,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cloud(n: f64, pts: &[(f64, f64)]) -> PointCloud {
        PointCloud::new(n, 0, pts.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
    }

    #[test]
    fn chain_and_antichain_counts() {
        let k = 6;
        let chain: Vec<(f64, f64)> = (1..=k).map(|i| (i as f64, i as f64)).collect();
        let anti: Vec<(f64, f64)> = (1..=k).map(|i| (i as f64, (k + 1 - i) as f64)).collect();
        assert_eq!(count_chains(&cloud(10.0, &chain), 12).unwrap(), (1 << k) - 1);
        assert_eq!(count_chains(&cloud(10.0, &anti), 12).unwrap(), k);
        let o = Point::ORIGIN;
        let top = Point::new(10.0, 10.0);
        assert_eq!(brute_lpp(&cloud(10.0, &chain[..3]), o, top, 12).unwrap(), 3);
        assert_eq!(brute_lpp(&cloud(10.0, &anti[..2]), o, top, 12).unwrap(), 1);
    }

    #[test]
    fn cap_enforced() {
        let pts: Vec<(f64, f64)> = (0..13).map(|i| (0.5 + i as f64 * 0.5, 1.0)).collect();
        let c = cloud(10.0, &pts);
        assert!(matches!(
            brute_lpp(&c, Point::ORIGIN, Point::new(10.0, 10.0), 12),
            Err(Error::SizeCapExceeded { .. })
        ));
    }

    #[test]
    fn above_chord_extremes() {
        let o = Point::ORIGIN;
        let v = Point::new(4.0, 4.0);
        let below = cloud(4.0, &[(1.0, 0.5), (3.0, 2.0)]);
        assert_eq!(brute_above_chord(&below, o, v, 12).unwrap(), 0);
        let above = cloud(4.0, &[(1.0, 2.0), (3.0, 3.5)]);
        assert_eq!(
            brute_above_chord(&above, o, v, 12).unwrap(),
            brute_lpp(&above, o, v, 12).unwrap()
        );
    }

    #[test]
    fn constrained_examples() {
        match brute_constrained(&cloud(2.0, &[]), 2.0, 0.1, 12) {
            Err(Error::Infeasible {
                max_trappable_area, ..
            }) => assert_eq!(max_trappable_area, 2.0),
            other => panic!("{other:?}"),
        }
        let b = brute_constrained(&cloud(2.0, &[(1.0, 2.0)]), 2.0, 0.2, 12).unwrap();
        assert_eq!(b.length, 1);
        assert_eq!(b.least_area, 3.0);
        assert!((b.threshold - 2.8).abs() < 1e-12);
    }

    #[test]
    fn least_area_witness_is_extremal() {
        let c = cloud(
            4.0,
            &[(0.5, 2.0), (1.0, 2.5), (1.5, 1.0), (2.0, 3.0), (2.5, 3.2), (3.0, 2.0), (3.5, 3.9)],
        );
        let b = brute_constrained(&c, 4.0, 0.15, 12).unwrap();
        assert!(b.least_area >= b.threshold * (1.0 - 1e-15));
        assert!(b.least_area <= b.greatest_area);
        assert_eq!(b.least_witness.len(), b.length);
        assert_eq!(shoelace_trapped_area(&b.least_witness, 4.0), b.least_area);
    }

    #[test]
    fn tiny_alpha_matches_lpp() {
        let c = cloud(4.0, &[(0.5, 2.0), (1.0, 2.5), (2.0, 3.0), (3.0, 3.5)]);
        let b = brute_constrained(&c, 4.0, 1e-9, 12).unwrap();
        assert_eq!(b.length, brute_lpp(&c, Point::ORIGIN, Point::new(4.0, 4.0), 12).unwrap());
    }
}
