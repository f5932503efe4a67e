use std::io::{Read, Write};

use serde::Deserialize;

use crate::error::{Error, Result};

pub const RESULTS_HEADER: [&str; 17] = [
    "master_seed",
    "trial_index",
    "n",
    "alpha",
    "point_count",
    "status",
    "L_unconstrained",
    "L_alpha",
    "achieved_area_ratio",
    "gap",
    "mfl_all",
    "mfl_interior",
    "mlr_all",
    "mlr_interior",
    "hausdorff_over_n",
    "tf_unconstrained",
    "wall_ms",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrialStatus {
    Solved,
    Infeasible,
}

impl TrialStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            TrialStatus::Solved => "solved",
            TrialStatus::Infeasible => "infeasible",
        }
    }
}

/// One results row. Columns that only exist for a solved constrained
/// problem are `None` on infeasible rows and written as empty cells.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct TrialRecord {
    pub master_seed: u64,
    pub trial_index: u64,
    pub n: f64,
    pub alpha: f64,
    pub point_count: usize,
    pub status: TrialStatus,
    #[serde(rename = "L_unconstrained")]
    pub l_unconstrained: usize,
    #[serde(rename = "L_alpha")]
    pub l_alpha: Option<usize>,
    pub achieved_area_ratio: Option<f64>,
    pub gap: Option<usize>,
    pub mfl_all: Option<f64>,
    pub mfl_interior: Option<f64>,
    pub mlr_all: Option<f64>,
    pub mlr_interior: Option<f64>,
    pub hausdorff_over_n: Option<f64>,
    pub tf_unconstrained: f64,
    pub wall_ms: u64,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl TrialRecord {
    /// Cells in header order; floats use the shortest round-trip decimal.
    pub fn cells(&self) -> [String; 17] {
        [
            self.master_seed.to_string(),
            self.trial_index.to_string(),
            self.n.to_string(),
            self.alpha.to_string(),
            self.point_count.to_string(),
            self.status.as_str().to_string(),
            self.l_unconstrained.to_string(),
            opt(self.l_alpha),
            opt(self.achieved_area_ratio),
            opt(self.gap),
            opt(self.mfl_all),
            opt(self.mfl_interior),
            opt(self.mlr_all),
            opt(self.mlr_interior),
            opt(self.hausdorff_over_n),
            self.tf_unconstrained.to_string(),
            self.wall_ms.to_string(),
        ]
    }

    /// Numeric value of a named column, `None` when empty or non-numeric.
    pub fn field(&self, name: &str) -> Option<f64> {
        match name {
            "n" => Some(self.n),
            "alpha" => Some(self.alpha),
            "point_count" => Some(self.point_count as f64),
            "L_unconstrained" => Some(self.l_unconstrained as f64),
            "L_alpha" => self.l_alpha.map(|v| v as f64),
            "achieved_area_ratio" => self.achieved_area_ratio,
            "gap" => self.gap.map(|v| v as f64),
            "mfl_all" => self.mfl_all,
            "mfl_interior" => self.mfl_interior,
            "mlr_all" => self.mlr_all,
            "mlr_interior" => self.mlr_interior,
            "hausdorff_over_n" => self.hausdorff_over_n,
            "tf_unconstrained" => Some(self.tf_unconstrained),
            "wall_ms" => Some(self.wall_ms as f64),
            _ => None,
        }
    }

    pub fn is_numeric_field(name: &str) -> bool {
        RESULTS_HEADER.contains(&name) && !matches!(name, "status" | "master_seed" | "trial_index")
    }
}

pub(crate) fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

pub fn write_records<W: Write>(w: W, records: &[TrialRecord]) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record(RESULTS_HEADER)?;
    for r in records {
        out.write_record(r.cells())?;
    }
    out.flush().map_err(|e| Error::io("<results>", e))?;
    Ok(())
}

pub fn read_records<R: Read>(r: R) -> Result<Vec<TrialRecord>> {
    let mut rdr = csv::Reader::from_reader(r);
    let headers = rdr.headers()?.clone();
    if headers.iter().ne(RESULTS_HEADER.iter().copied()) {
        return Err(Error::Validation("results header does not match the expected schema".into()));
    }
    rdr.deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> TrialRecord {
        TrialRecord {
            master_seed: 1,
            trial_index: 2,
            n: 40.0,
            alpha: 0.25,
            point_count: 1601,
            status: TrialStatus::Solved,
            l_unconstrained: 71,
            l_alpha: Some(62),
            achieved_area_ratio: Some(0.7512345678901234),
            gap: Some(0),
            mfl_all: Some(12.5),
            mfl_interior: Some(9.25),
            mlr_all: Some(1.0e-7),
            mlr_interior: Some(0.5),
            hausdorff_over_n: Some(0.061),
            tf_unconstrained: 3.3,
            wall_ms: 0,
        }
    }

    #[test]
    fn header_is_exact() {
        let mut buf = Vec::new();
        write_records(&mut buf, &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "master_seed,trial_index,n,alpha,point_count,status,L_unconstrained,L_alpha,achieved_area_ratio,gap,mfl_all,mfl_interior,mlr_all,mlr_interior,hausdorff_over_n,tf_unconstrained,wall_ms\n"
        );
    }

    #[test]
    fn round_trip_with_empty_cells() {
        let a = sample();
        let mut b = sample();
        b.status = TrialStatus::Infeasible;
        b.l_alpha = None;
        b.achieved_area_ratio = None;
        b.gap = None;
        b.mfl_all = None;
        b.mfl_interior = None;
        b.mlr_all = None;
        b.mlr_interior = None;
        b.hausdorff_over_n = None;
        let mut buf = Vec::new();
        write_records(&mut buf, &[a.clone(), b.clone()]).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.contains(",infeasible,71,,,,,,,,,3.3,0\n"));
        assert_eq!(read_records(buf.as_slice()).unwrap(), vec![a, b]);
    }
}
