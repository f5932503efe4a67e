//! Planar primitives shared by every other module.
//!
//! Coordinates are plain `f64`. Orientation tests treat a cross product as
//! zero when it is within a relative `1e-12` of the product of the two edge
//! lengths; Poisson clouds have no exact degeneracies, so the tolerance only
//! matters for hand-built fixtures.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Relative tolerance for orientation tests.
pub const ORIENTATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Weak coordinatewise order `self ⪯ other`.
    #[inline]
    pub fn precedes(&self, other: &Point) -> bool {
        self.x <= other.x && self.y <= other.y
    }

    pub fn dist(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Lexicographic (x, then y) comparison used to sort clouds and paths.
    pub fn lex_cmp(&self, other: &Point) -> std::cmp::Ordering {
        self.x
            .total_cmp(&other.x)
            .then_with(|| self.y.total_cmp(&other.y))
    }
}

/// `(a - o) × (b - o)`; positive for a counter-clockwise turn.
#[inline]
pub fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Orientation of `o → a → b` with the relative collinearity tolerance:
/// `1` left turn, `-1` right turn, `0` collinear.
pub fn orientation(o: Point, a: Point, b: Point) -> i8 {
    let c = cross(o, a, b);
    let scale = o.dist(&a) * o.dist(&b);
    if c.abs() <= ORIENTATION_TOL * scale {
        0
    } else if c > 0.0 {
        1
    } else {
        -1
    }
}

/// Signed area between the segment `a → b`, the x-axis and the two
/// verticals. Every trapped-area computation in the crate goes through this
/// one expression so that incremental sums agree bit for bit.
#[inline]
pub fn segment_area(a: Point, b: Point) -> f64 {
    (b.x - a.x) * (a.y + b.y) * 0.5
}

fn check_monotone(vertices: &[Point]) -> Result<()> {
    if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
        return Err(Error::InvalidInput(format!("non-finite vertex {p:?}")));
    }
    for (i, w) in vertices.windows(2).enumerate() {
        if !w[0].precedes(&w[1]) {
            return Err(Error::InvalidInput(format!(
                "vertices {i} and {} are not increasing: {:?} then {:?}",
                i + 1,
                w[0],
                w[1]
            )));
        }
    }
    Ok(())
}

/// A coordinatewise nondecreasing vertex chain between two arbitrary points.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedPath {
    vertices: Vec<Point>,
}

impl DirectedPath {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidInput(
                "a directed path needs both endpoints".into(),
            ));
        }
        check_monotone(&vertices)?;
        Ok(DirectedPath { vertices })
    }

    /// Builds `u, interior..., v`.
    pub fn through(u: Point, interior: &[Point], v: Point) -> Result<Self> {
        let mut vertices = Vec::with_capacity(interior.len() + 2);
        vertices.push(u);
        vertices.extend_from_slice(interior);
        vertices.push(v);
        Self::new(vertices)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn start(&self) -> Point {
        self.vertices[0]
    }

    pub fn end(&self) -> Point {
        self.vertices[self.vertices.len() - 1]
    }

    /// Vertices strictly between the endpoints.
    pub fn interior(&self) -> &[Point] {
        &self.vertices[1..self.vertices.len() - 1]
    }

    /// Number of collected points (endpoints excluded).
    pub fn len(&self) -> usize {
        self.vertices.len() - 2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A directed path from `(0,0)` to `(n,n)` inside the box `[0,n]²`.
#[derive(Debug, Clone, PartialEq)]
pub struct IncreasingPath {
    n: f64,
    vertices: Vec<Point>,
}

impl IncreasingPath {
    /// Validates a full vertex list, endpoints included.
    pub fn new(n: f64, vertices: Vec<Point>) -> Result<Self> {
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::invalid(format!("box side must be positive, got {n}")));
        }
        if vertices.len() < 2 {
            return Err(Error::InvalidInput("path needs both endpoints".into()));
        }
        if vertices[0] != Point::ORIGIN || vertices[vertices.len() - 1] != Point::new(n, n) {
            return Err(Error::InvalidInput(format!(
                "path must run from (0,0) to ({n},{n})"
            )));
        }
        check_monotone(&vertices)?;
        Ok(IncreasingPath { n, vertices })
    }

    /// Builds `(0,0), interior..., (n,n)`.
    pub fn from_interior(n: f64, interior: &[Point]) -> Result<Self> {
        let mut vertices = Vec::with_capacity(interior.len() + 2);
        vertices.push(Point::ORIGIN);
        vertices.extend_from_slice(interior);
        vertices.push(Point::new(n, n));
        Self::new(n, vertices)
    }

    /// The straight chord with no collected points.
    pub fn chord(n: f64) -> Result<Self> {
        Self::from_interior(n, &[])
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn interior(&self) -> &[Point] {
        &self.vertices[1..self.vertices.len() - 1]
    }

    /// `|γ|`, the number of collected points.
    pub fn len(&self) -> usize {
        self.vertices.len() - 2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_polyline(&self) -> Polyline {
        Polyline {
            points: self.vertices.clone(),
        }
    }
}

impl TryFrom<DirectedPath> for IncreasingPath {
    type Error = Error;

    fn try_from(path: DirectedPath) -> Result<Self> {
        let n = path.end().x;
        Self::new(n, path.vertices)
    }
}

/// An x-monotone polyline.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    points: Vec<Point>,
}

impl Polyline {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidInput("polyline needs at least 2 points".into()));
        }
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite point {p:?}")));
        }
        if points.windows(2).any(|w| w[1].x < w[0].x) {
            return Err(Error::InvalidInput(
                "polyline x-coordinates must be nondecreasing".into(),
            ));
        }
        Ok(Polyline { points })
    }

    /// Samples `f` at `segments + 1` evenly spaced abscissae of `[x0, x1]`.
    pub fn from_fn(x0: f64, x1: f64, segments: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let segments = segments.max(1);
        let points = (0..=segments)
            .map(|i| {
                let x = if i == segments {
                    x1
                } else {
                    x0 + (x1 - x0) * i as f64 / segments as f64
                };
                Point::new(x, f(x))
            })
            .collect();
        Self::new(points)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn arc_length(&self) -> f64 {
        self.segments().map(|(a, b)| a.dist(&b)).sum()
    }
}

/// `A(γ)`: area of the polygon bounded by the path, the x-axis and the
/// vertical segment at `x = n`.
pub fn trapped_area(path: &IncreasingPath) -> f64 {
    path.vertices
        .windows(2)
        .fold(0.0, |acc, w| acc + segment_area(w[0], w[1]))
}

/// Indices of the upper hull of lexicographically sorted points, computed
/// with the monotone chain. Collinear points are dropped so every returned
/// segment is a maximal facet.
pub fn upper_hull_indices(points: &[Point]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::with_capacity(points.len().min(64));
    for (i, &p) in points.iter().enumerate() {
        while hull.len() >= 2 {
            let o = points[hull[hull.len() - 2]];
            let a = points[hull[hull.len() - 1]];
            if orientation(o, a, p) >= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        // exact duplicates would otherwise survive as zero-length facets
        if let Some(&last) = hull.last() {
            if points[last] == p {
                continue;
            }
        }
        hull.push(i);
    }
    hull
}

/// Least concave majorant of the path (upper hull of its vertices).
pub fn least_concave_majorant(path: &IncreasingPath) -> Polyline {
    let idx = upper_hull_indices(&path.vertices);
    Polyline {
        points: idx.iter().map(|&i| path.vertices[i]).collect(),
    }
}

pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return p.dist(&a);
    }
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0);
    p.dist(&Point::new(a.x + t * dx, a.y + t * dy))
}

pub fn point_polyline_distance(p: Point, line: &Polyline) -> f64 {
    line.segments()
        .map(|(a, b)| point_segment_distance(p, a, b))
        .fold(f64::INFINITY, f64::min)
}

/// Distance from every interior path vertex to the majorant.
///
/// Only vertices are inspected: distance to a convex set is convex along a
/// segment, so the maximum over any path segment sits at one of its ends.
pub fn vertex_roughness(path: &IncreasingPath, majorant: &Polyline) -> Vec<f64> {
    path.interior()
        .iter()
        .map(|&v| {
            if majorant.points.contains(&v) {
                0.0
            } else {
                point_polyline_distance(v, majorant)
            }
        })
        .collect()
}

fn arc_samples(line: &Polyline, ds: f64) -> Vec<Point> {
    let mut out = Vec::with_capacity(line.points.len());
    out.push(line.points[0]);
    for (a, b) in line.segments() {
        let len = a.dist(&b);
        let k = (len / ds).ceil().max(1.0) as usize;
        for j in 1..=k {
            let t = j as f64 / k as f64;
            out.push(Point::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)));
        }
    }
    out
}

/// `max_p min_s d(p, s)`, pruned two ways without changing the result.
/// Polyline x is nondecreasing, so segments are ordered by x-extent and a
/// segment whose x-range is farther than the best distance so far cannot
/// win. A sample already within the running maximum of some segment cannot
/// raise it. The scan starts from the previous sample's nearest segment.
fn directed_hausdorff(from: &[Point], to: &Polyline) -> f64 {
    let segs: Vec<(Point, Point)> = to.segments().collect();
    let mut h = 0.0f64;
    let mut last = 0usize;
    for &p in from {
        let d = |i: usize| point_segment_distance(p, segs[i].0, segs[i].1);
        let mut best = d(last);
        let mut best_i = last;
        let mut i = last;
        while best > h && i > 0 {
            i -= 1;
            if segs[i].1.x < p.x - best {
                break;
            }
            let di = d(i);
            if di < best {
                best = di;
                best_i = i;
            }
        }
        for (i, seg) in segs.iter().enumerate().skip(last + 1) {
            if best <= h || seg.0.x > p.x + best {
                break;
            }
            let di = d(i);
            if di < best {
                best = di;
                best_i = i;
            }
        }
        h = h.max(best);
        last = best_i;
    }
    h
}

/// Symmetric Hausdorff distance between two polylines.
///
/// Each polyline is sampled at arc-length spacing at most `ds` and the
/// samples are measured exactly against the other polyline, so the result
/// is within `ds` of the true distance.
pub fn hausdorff_distance(a: &Polyline, b: &Polyline, ds: f64) -> Result<f64> {
    if !(ds > 0.0 && ds.is_finite()) {
        return Err(Error::invalid(format!("sampling step must be positive, got {ds}")));
    }
    let sa = arc_samples(a, ds);
    let sb = arc_samples(b, ds);
    Ok(directed_hausdorff(&sa, b).max(directed_hausdorff(&sb, a)))
}

/// Acute angles `(θ_v, θ_h)` that `p − O`, with `O = (n, 0)`, makes with the
/// vertical and horizontal lines through `O`. They always sum to `π/2`.
pub fn anchor_angles(p: Point, n: f64) -> Result<(f64, f64)> {
    let dx = (p.x - n).abs();
    let dy = p.y.abs();
    if dx == 0.0 && dy == 0.0 {
        return Err(Error::DegenerateAnchor);
    }
    let theta_v = dx.atan2(dy);
    Ok((theta_v, FRAC_PI_2 - theta_v))
}

/// A convex polygon, stored counter-clockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    /// Accepts vertices in either winding; collinear vertices are allowed.
    pub fn new(mut vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidRegion("fewer than 3 vertices".into()));
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidRegion("non-finite vertex".into()));
        }
        let k = vertices.len();
        let mut sign = 0i8;
        for i in 0..k {
            let o = orientation(vertices[i], vertices[(i + 1) % k], vertices[(i + 2) % k]);
            if o == 0 {
                continue;
            }
            if sign == 0 {
                sign = o;
            } else if o != sign {
                return Err(Error::InvalidRegion("turns change direction".into()));
            }
        }
        if sign == 0 {
            return Err(Error::InvalidRegion("all vertices are collinear".into()));
        }
        // a star polygon has consistent turns but winds more than once
        let total: f64 = (0..k)
            .map(|i| {
                let a = vertices[i];
                let b = vertices[(i + 1) % k];
                let c = vertices[(i + 2) % k];
                let h1 = (b.y - a.y).atan2(b.x - a.x);
                let h2 = (c.y - b.y).atan2(c.x - b.x);
                let mut d = h2 - h1;
                while d > std::f64::consts::PI {
                    d -= 2.0 * std::f64::consts::PI;
                }
                while d < -std::f64::consts::PI {
                    d += 2.0 * std::f64::consts::PI;
                }
                d
            })
            .sum();
        if (total.abs() - 2.0 * std::f64::consts::PI).abs() > 1e-6 {
            return Err(Error::InvalidRegion("polygon is self-intersecting".into()));
        }
        if sign < 0 {
            vertices.reverse();
        }
        Ok(ConvexPolygon { vertices })
    }

    /// Axis-aligned rectangle `[u, v]`.
    pub fn rectangle(u: Point, v: Point) -> Result<Self> {
        Self::new(vec![u, Point::new(v.x, u.y), v, Point::new(u.x, v.y)])
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Closed containment with the orientation tolerance.
    pub fn contains(&self, p: Point) -> bool {
        let k = self.vertices.len();
        (0..k).all(|i| orientation(self.vertices[i], self.vertices[(i + 1) % k], p) >= 0)
    }
}
