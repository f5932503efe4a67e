use std::collections::BTreeMap;

use super::record::{TrialRecord, TrialStatus};
use crate::error::{Error, Result};

/// OLS fit of `ln(mean) = intercept + slope · ln n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    pub field: String,
    pub slope: f64,
    pub intercept: f64,
    pub stderr_slope: f64,
    pub r_squared: f64,
    /// `(n, mean)` pairs that entered the fit.
    pub points: Vec<(f64, f64)>,
    /// n values dropped because their mean was not positive.
    pub excluded: Vec<f64>,
}

/// Fits a power law through `(n, mean)` pairs.
pub fn fit_power_law(field: &str, data: &[(f64, f64)]) -> Result<ExponentFit> {
    let (points, excluded): (Vec<_>, Vec<_>) = data.iter().partition(|(n, m)| *n > 0.0 && *m > 0.0);
    let excluded: Vec<f64> = excluded.into_iter().map(|(n, _)| n).collect();
    let k = points.len();
    if k < 3 {
        return Err(Error::InsufficientData(format!(
            "{field}: {k} usable n values, need at least 3"
        )));
    }
    let xs: Vec<f64> = points.iter().map(|(n, _)| n.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, m)| m.ln()).collect();
    let kf = k as f64;
    let xbar = xs.iter().sum::<f64>() / kf;
    let ybar = ys.iter().sum::<f64>() / kf;
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData(format!("{field}: all n values coincide")));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let sst: f64 = ys.iter().map(|y| (y - ybar).powi(2)).sum();
    let r_squared = if sst > 0.0 { 1.0 - sse / sst } else { 1.0 };
    let stderr_slope = (sse / (kf - 2.0) / sxx).sqrt();
    Ok(ExponentFit {
        field: field.to_string(),
        slope,
        intercept,
        stderr_slope,
        r_squared,
        points,
        excluded,
    })
}

/// Per-n means of a numeric results column, skipping empty cells.
pub(crate) fn means_by_n(records: &[TrialRecord], field: &str) -> Vec<(f64, f64)> {
    let mut acc: BTreeMap<u64, (f64, f64, usize)> = BTreeMap::new();
    for r in records {
        if let Some(v) = r.field(field) {
            // n > 0, so the bit pattern orders like the value
            let e = acc.entry(r.n.to_bits()).or_insert((r.n, 0.0, 0));
            e.1 += v;
            e.2 += 1;
        }
    }
    acc.into_values().map(|(n, s, c)| (n, s / c as f64)).collect()
}

/// Fits the growth exponent of `field` against n.
pub fn fit_exponent(records: &[TrialRecord], field: &str) -> Result<ExponentFit> {
    if !TrialRecord::is_numeric_field(field) {
        return Err(Error::invalid(format!("`{field}` is not a numeric results column")));
    }
    fit_power_law(field, &means_by_n(records, field))
}

/// One `(n, α)` cell of the law-of-large-numbers table.
#[derive(Debug, Clone, PartialEq)]
pub struct LlnRow {
    pub n: f64,
    pub alpha: f64,
    pub trials: usize,
    pub solved: usize,
    /// Mean of `L_α / (2 w_α n)` over solved trials.
    pub mean_length_ratio: f64,
    pub mean_hausdorff_over_n: f64,
}

impl LlnRow {
    pub const HEADER: &'static str = "n,alpha,trials,solved,mean_length_ratio,mean_hausdorff_over_n";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.n, self.alpha, self.trials, self.solved, self.mean_length_ratio, self.mean_hausdorff_over_n
        )
    }
}

pub fn lln_table(records: &[TrialRecord]) -> Result<Vec<LlnRow>> {
    let mut cells: BTreeMap<(u64, u64), Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        cells.entry((r.n.to_bits(), r.alpha.to_bits())).or_default().push(r);
    }
    let mut out = Vec::with_capacity(cells.len());
    for rows in cells.values() {
        let (n, alpha) = (rows[0].n, rows[0].alpha);
        let w = crate::limitshape::LimitShape::new(alpha)?.w;
        let solved: Vec<_> = rows.iter().filter(|r| r.status == TrialStatus::Solved).collect();
        let mean = |f: &dyn Fn(&TrialRecord) -> f64| {
            if solved.is_empty() {
                f64::NAN
            } else {
                solved.iter().map(|r| f(r)).sum::<f64>() / solved.len() as f64
            }
        };
        out.push(LlnRow {
            n,
            alpha,
            trials: rows.len(),
            solved: solved.len(),
            mean_length_ratio: mean(&|r| r.l_alpha.unwrap_or(0) as f64 / (2.0 * w * n)),
            mean_hausdorff_over_n: mean(&|r| r.hausdorff_over_n.unwrap_or(f64::NAN)),
        });
    }
    Ok(out)
}

pub fn format_lln_table(rows: &[LlnRow]) -> String {
    let mut s = String::from(LlnRow::HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.to_csv());
        s.push('\n');
    }
    s
}
