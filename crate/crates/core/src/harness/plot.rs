//! Minimal deterministic SVG figures.
//!
//! Coordinates are printed with fixed precision so identical inputs give
//! byte-identical files.

use std::fmt::Write as _;
use std::str::FromStr;

use super::fit::{fit_power_law, lln_table, means_by_n};
use super::record::TrialRecord;
use crate::error::{Error, Result};
use crate::geometry::IncreasingPath;
use crate::limitshape::LimitShape;

/// Columns drawn by the exponents figure.
pub const EXPONENT_FIELDS: &[&str] = &["mfl_all", "mfl_interior", "mlr_interior", "tf_unconstrained"];

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    Shape,
    Exponents,
    Lln,
}

impl FromStr for PlotKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shape" => Ok(PlotKind::Shape),
            "exponents" => Ok(PlotKind::Exponents),
            "lln" => Ok(PlotKind::Lln),
            _ => Err(Error::invalid(format!("unknown plot kind `{s}` (shape, exponents, lln)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Line,
    Dashed,
    Markers,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub style: Style,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Figure {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

impl Figure {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Figure {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            series: Vec::new(),
        }
    }

    pub fn push(&mut self, label: impl Into<String>, points: Vec<(f64, f64)>, style: Style) {
        self.series.push(Series {
            label: label.into(),
            points,
            style,
        });
    }

    fn bounds(&self) -> Option<(f64, f64, f64, f64)> {
        let mut it = self
            .series
            .iter()
            .flat_map(|s| s.points.iter())
            .filter(|(x, y)| x.is_finite() && y.is_finite());
        let &(x0, y0) = it.next()?;
        let (mut a, mut b, mut c, mut d) = (x0, x0, y0, y0);
        for &(x, y) in it {
            a = a.min(x);
            b = b.max(x);
            c = c.min(y);
            d = d.max(y);
        }
        let pad = |lo: f64, hi: f64| {
            if hi > lo {
                let m = 0.05 * (hi - lo);
                (lo - m, hi + m)
            } else {
                (lo - 0.5, hi + 0.5)
            }
        };
        let (a, b) = pad(a, b);
        let (c, d) = pad(c, d);
        Some((a, b, c, d))
    }

    pub fn to_svg(&self) -> Result<String> {
        let (x0, x1, y0, y1) = self.bounds().ok_or(Error::EmptyPlot)?;
        let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
        let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        let (l, r, t, b) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
        let _ = writeln!(
            s,
            r#"<rect x="{l:.2}" y="{t:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
            r - l,
            b - t
        );
        for i in 0..=4 {
            let f = i as f64 / 4.0;
            let xv = x0 + f * (x1 - x0);
            let yv = y0 + f * (y1 - y0);
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                sx(xv),
                b + 16.0,
                tick(xv)
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                l - 6.0,
                sy(yv) + 4.0,
                tick(yv)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            HEIGHT - 14.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(&self.y_label)
        );
        for (i, series) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let pts = series.points.iter().filter(|(x, y)| x.is_finite() && y.is_finite());
            match series.style {
                Style::Markers => {
                    for &(x, y) in pts {
                        let _ = writeln!(
                            s,
                            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                            sx(x),
                            sy(y)
                        );
                    }
                }
                Style::Line | Style::Dashed => {
                    let coords: Vec<String> =
                        pts.map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
                    let dash = if series.style == Style::Dashed {
                        r#" stroke-dasharray="6 4""#
                    } else {
                        ""
                    };
                    let _ = writeln!(
                        s,
                        r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>"#,
                        coords.join(" ")
                    );
                }
            }
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" fill="{color}">{}</text>"#,
                l + 10.0,
                t + 16.0 + 15.0 * i as f64,
                escape(&series.label)
            );
        }
        s.push_str("</svg>\n");
        Ok(s)
    }
}

fn tick(v: f64) -> String {
    let t = format!("{v:.3}");
    if t == "-0.000" {
        "0.000".into()
    } else {
        t
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Limit shapes on the unit square, optionally overlaid with rescaled paths.
pub fn shape_figure(alphas: &[f64], paths: &[(String, IncreasingPath)], samples: usize) -> Result<Figure> {
    if samples < 2 {
        return Err(Error::invalid("need at least 2 curve samples"));
    }
    let mut fig = Figure::new("Constrained geodesic shape", "x / n", "y / n");
    if !alphas.is_empty() || !paths.is_empty() {
        fig.push("diagonal", vec![(0.0, 0.0), (1.0, 1.0)], Style::Dashed);
    }
    for &alpha in alphas {
        let shape = LimitShape::new(alpha)?;
        let pts = (0..=samples)
            .map(|i| {
                let x = i as f64 / samples as f64;
                (x, shape.eval(x))
            })
            .collect();
        fig.push(format!("ψ, α = {alpha} (w = {:.3})", shape.w), pts, Style::Line);
    }
    for (label, path) in paths {
        let n = path.n();
        let pts = path.vertices().iter().map(|p| (p.x / n, p.y / n)).collect();
        fig.push(label.clone(), pts, Style::Line);
    }
    Ok(fig)
}

/// Log-log per-n means with their OLS fits.
pub fn exponents_figure(records: &[TrialRecord], fields: &[&str]) -> Result<Figure> {
    let mut fig = Figure::new("Fluctuation exponents", "ln n", "ln mean");
    for field in fields {
        let Ok(fit) = fit_power_law(field, &means_by_n(records, field)) else {
            continue;
        };
        let pts: Vec<(f64, f64)> = fit.points.iter().map(|(n, m)| (n.ln(), m.ln())).collect();
        let (a, b) = (pts[0].0, pts[pts.len() - 1].0);
        fig.push(format!("{field} slope={:.3}", fit.slope), pts, Style::Markers);
        fig.push(
            format!("{field} fit"),
            vec![(a, fit.intercept + fit.slope * a), (b, fit.intercept + fit.slope * b)],
            Style::Dashed,
        );
    }
    if fig.series.is_empty() {
        return Err(Error::EmptyPlot);
    }
    Ok(fig)
}

/// Mean `L_α / (w_α n)` against n, one series per α.
pub fn lln_figure(records: &[TrialRecord]) -> Result<Figure> {
    let rows = lln_table(records)?;
    let mut fig = Figure::new("Law of large numbers", "n", "mean L_α / (2 w_α n)");
    let mut alphas: Vec<f64> = rows.iter().map(|r| r.alpha).collect();
    alphas.sort_by(f64::total_cmp);
    alphas.dedup();
    for alpha in alphas {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.alpha == alpha && r.solved > 0)
            .map(|r| (r.n, r.mean_length_ratio))
            .collect();
        if !pts.is_empty() {
            fig.push(format!("α = {alpha}"), pts, Style::Line);
        }
    }
    if fig.series.is_empty() {
        return Err(Error::EmptyPlot);
    }
    fig.push("1", vec![(rows[0].n, 1.0), (rows[rows.len() - 1].n, 1.0)], Style::Dashed);
    Ok(fig)
}
