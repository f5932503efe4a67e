//! Reproducible rate-one Poisson clouds on `[0,n]²` and their text format.
//!
//! # Seeding
//!
//! A trial seed is `mix(master_seed, trial_index)` where `mix` is the
//! SplitMix64 finalizer (constants `0x9E3779B97F4A7C15`, `0xBF58476D1CE4E5B9`,
//! `0x94D049BB133111EB`):
//!
//! ```text
//! z = master + (index + 1) * 0x9E3779B97F4A7C15        (wrapping)
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! z ^ (z >> 31)
//! ```
//!
//! The trial seed initialises a ChaCha8 stream (`rand_chacha`,
//! `SeedableRng::seed_from_u64`). Uniforms use the top 53 bits of each
//! 64-bit word. Transcendentals come from `libm`, so clouds are bitwise
//! identical on every platform.
//!
//! # Poisson counts
//!
//! For mean `μ = n² ≤ 1000` the count is drawn by sequential inversion; the
//! mean is split into chunks of at most 500 (a sum of independent Poisson
//! variables) so `e^{-μ}` never underflows. Above 1000 the PTRS
//! transformed-rejection method is used.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Means up to this value are sampled by inversion.
pub const INVERSION_MAX_MEAN: f64 = 1000.0;
const INVERSION_CHUNK: f64 = 500.0;

const CLOUD_MAGIC: &str = "# areatrap-cloud v1";

/// SplitMix64 finalizer applied to `master + (index + 1)·φ`.
pub fn mix(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub trial_index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, trial_index: u64) -> Self {
        SeedSpec {
            master_seed,
            trial_index,
        }
    }

    pub fn derived(&self) -> u64 {
        mix(self.master_seed, self.trial_index)
    }
}

/// The random environment restricted to the box, sorted by (x, then y).
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    n: f64,
    seed: u64,
    points: Vec<Point>,
}

impl PointCloud {
    /// Validates and sorts an arbitrary point set. Boundary points are
    /// accepted.
    pub fn new(n: f64, seed: u64, mut points: Vec<Point>) -> Result<Self> {
        if !(n.is_finite() && n >= 0.0) {
            return Err(Error::invalid(format!("box side must be >= 0, got {n}")));
        }
        if let Some(p) = points.iter().find(|p| !in_box(p, n)) {
            return Err(Error::Validation(format!("point ({}, {}) is outside [0,{n}]²", p.x, p.y)));
        }
        points.sort_by(Point::lex_cmp);
        Ok(PointCloud { n, seed, points })
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn count(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn in_box(p: &Point, n: f64) -> bool {
    p.is_finite() && (0.0..=n).contains(&p.x) && (0.0..=n).contains(&p.y)
}

struct Stream(ChaCha8Rng);

impl Stream {
    fn new(seed: u64) -> Self {
        Stream(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on the open interval `(0, side)`.
    fn open(&mut self, side: f64) -> f64 {
        loop {
            let v = side * self.uniform();
            if v > 0.0 && v < side {
                return v;
            }
        }
    }
}

fn poisson_inversion(mean: f64, rng: &mut Stream) -> u64 {
    let mut total = 0;
    let mut left = mean;
    while left > 0.0 {
        let mu = left.min(INVERSION_CHUNK);
        left -= mu;
        let u = rng.uniform();
        let mut k = 0u64;
        let mut p = libm::exp(-mu);
        let mut cdf = p;
        while u >= cdf {
            k += 1;
            p *= mu / k as f64;
            let next = cdf + p;
            if next == cdf {
                // tail exhausted in floating point
                break;
            }
            cdf = next;
        }
        total += k;
    }
    total
}

/// PTRS (Hörmann 1993), valid for `mean >= 10`.
fn poisson_ptrs(mean: f64, rng: &mut Stream) -> u64 {
    let slam = libm::sqrt(mean);
    let loglam = libm::log(mean);
    let b = 0.931 + 2.53 * slam;
    let a = -0.059 + 0.02483 * b;
    let inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    let vr = 0.9277 - 3.6224 / (b - 2.0);
    loop {
        let u = rng.uniform() - 0.5;
        let v = rng.uniform();
        let us = 0.5 - u.abs();
        let k = libm::floor((2.0 * a / us + b) * u + mean + 0.43);
        if us >= 0.07 && v <= vr {
            return k as u64;
        }
        if k < 0.0 || (us < 0.013 && v > us) {
            continue;
        }
        let lhs = libm::log(v) + libm::log(inv_alpha) - libm::log(a / (us * us) + b);
        let rhs = -mean + k * loglam - libm::lgamma(k + 1.0);
        if lhs <= rhs {
            return k as u64;
        }
    }
}

fn poisson(mean: f64, rng: &mut Stream) -> u64 {
    if mean <= 0.0 {
        0
    } else if mean <= INVERSION_MAX_MEAN {
        poisson_inversion(mean, rng)
    } else {
        poisson_ptrs(mean, rng)
    }
}

/// Draws a Poisson count with the given mean from a seeded stream. Exposed
/// for distribution tests.
pub fn poisson_count(mean: f64, seed: u64) -> u64 {
    poisson(mean, &mut Stream::new(seed))
}

/// Samples the rate-one Poisson process on `[0,n]²`.
pub fn sample_poisson_square(n: f64, seed: SeedSpec) -> Result<PointCloud> {
    if !(n.is_finite() && n >= 0.0) {
        return Err(Error::invalid(format!("box side must be >= 0, got {n}")));
    }
    let derived = seed.derived();
    let mut rng = Stream::new(derived);
    let count = poisson(n * n, &mut rng) as usize;
    let mut points = Vec::with_capacity(count);
    for _ in 0..count {
        let x = rng.open(n);
        let y = rng.open(n);
        points.push(Point::new(x, y));
    }
    points.sort_by(Point::lex_cmp);
    Ok(PointCloud {
        n,
        seed: derived,
        points,
    })
}

/// Renders the cloud in the `areatrap-cloud v1` text format.
pub fn format_cloud(cloud: &PointCloud) -> String {
    let mut s = String::with_capacity(32 * cloud.count() + 64);
    writeln!(s, "{CLOUD_MAGIC}").unwrap();
    writeln!(s, "# n={} seed={} count={}", cloud.n, cloud.seed, cloud.count()).unwrap();
    s.push_str("x,y\n");
    for p in &cloud.points {
        writeln!(s, "{},{}", p.x, p.y).unwrap();
    }
    s
}

pub fn save_cloud(cloud: &PointCloud, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_cloud(cloud)).map_err(|e| Error::io(path, e))
}

pub fn load_cloud(path: impl AsRef<Path>) -> Result<PointCloud> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_cloud(&text, path)
}

/// Parses the cloud format; `origin` only labels error messages.
pub fn parse_cloud(text: &str, origin: &Path) -> Result<PointCloud> {
    let perr = |line: usize, msg: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        msg,
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, l)) if l.trim_end() == CLOUD_MAGIC => {}
        _ => return Err(perr(1, format!("expected `{CLOUD_MAGIC}`"))),
    }
    let (ln, header) = lines
        .next()
        .ok_or_else(|| perr(2, "missing `# n=.. seed=.. count=..` line".into()))?;
    let header = header
        .strip_prefix('#')
        .ok_or_else(|| perr(ln, "header line must start with `#`".into()))?;
    let (mut n, mut seed, mut count) = (None, None, None);
    for field in header.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| perr(ln, format!("malformed header field `{field}`")))?;
        let bad = || perr(ln, format!("bad value for `{key}`: `{value}`"));
        match key {
            "n" => n = Some(value.parse::<f64>().map_err(|_| bad())?),
            "seed" => seed = Some(value.parse::<u64>().map_err(|_| bad())?),
            "count" => count = Some(value.parse::<usize>().map_err(|_| bad())?),
            _ => return Err(perr(ln, format!("unknown header field `{key}`"))),
        }
    }
    let n = n.ok_or_else(|| perr(ln, "missing n".into()))?;
    let seed = seed.ok_or_else(|| perr(ln, "missing seed".into()))?;
    let count = count.ok_or_else(|| perr(ln, "missing count".into()))?;
    if !(n.is_finite() && n >= 0.0) {
        return Err(Error::Validation(format!("box side must be >= 0, got {n}")));
    }
    match lines.next() {
        Some((_, l)) if l.trim_end() == "x,y" => {}
        Some((ln, _)) => return Err(perr(ln, "expected column header `x,y`".into())),
        None => return Err(perr(ln + 1, "missing column header `x,y`".into())),
    }
    let mut points = Vec::with_capacity(count);
    for (ln, line) in lines {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let (xs, ys) = line
            .split_once(',')
            .ok_or_else(|| perr(ln, format!("expected `x,y`, got `{line}`")))?;
        let x: f64 = xs.trim().parse().map_err(|_| perr(ln, format!("bad x `{xs}`")))?;
        let y: f64 = ys.trim().parse().map_err(|_| perr(ln, format!("bad y `{ys}`")))?;
        let p = Point::new(x, y);
        if !in_box(&p, n) {
            return Err(Error::Validation(format!(
                "line {ln}: point ({x}, {y}) is outside [0,{n}]²"
            )));
        }
        if let Some(prev) = points.last() {
            if p.lex_cmp(prev) == std::cmp::Ordering::Less {
                return Err(Error::Validation(format!("line {ln}: points are not sorted")));
            }
        }
        points.push(p);
    }
    if points.len() != count {
        return Err(Error::Validation(format!(
            "header says count={count} but {} points were read",
            points.len()
        )));
    }
    Ok(PointCloud { n, seed, points })
}
