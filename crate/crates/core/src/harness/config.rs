use std::fs;
use std::path::{Path, PathBuf};

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use super::TrialSpec;
use crate::constrained::SolverOptions;
use crate::error::{Error, Result};

/// Worker count: a fixed number or `"auto"` (all cores).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Threads {
    #[default]
    Auto,
    Fixed(usize),
}

impl<'de> Deserialize<'de> for Threads {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Count(usize),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Count(0) => Err(de::Error::custom("threads must be at least 1")),
            Raw::Count(k) => Ok(Threads::Fixed(k)),
            Raw::Word(w) if w == "auto" => Ok(Threads::Auto),
            Raw::Word(w) => Err(de::Error::custom(format!(
                "threads must be an integer or \"auto\", got \"{w}\""
            ))),
        }
    }
}

impl Serialize for Threads {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Threads::Auto => s.serialize_str("auto"),
            Threads::Fixed(k) => s.serialize_u64(*k as u64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReplicateOverride {
    pub n: f64,
    pub replicates: usize,
}

/// Optional secondary outputs of a sweep, relative to the config file.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Outputs {
    pub results: Option<PathBuf>,
    pub lln_table: Option<PathBuf>,
    pub exponents_svg: Option<PathBuf>,
    pub lln_svg: Option<PathBuf>,
}

fn default_delta() -> f64 {
    std::f64::consts::PI / 10.0
}

fn default_epsilon() -> f64 {
    0.1
}

fn default_ds() -> f64 {
    1e-4
}

fn default_replicates() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub master_seed: u64,
    pub n_values: Vec<f64>,
    pub alpha_values: Vec<f64>,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    /// Per-n replicate counts overriding `replicates`.
    #[serde(default)]
    pub replicate_overrides: Vec<ReplicateOverride>,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub solver: SolverOptions,
    /// Hausdorff sampling step as a fraction of n.
    #[serde(default = "default_ds")]
    pub hausdorff_ds: f64,
    #[serde(default)]
    pub outputs: Outputs,
    #[serde(default)]
    pub threads: Threads,
    /// Record wall-clock time per trial. Off by default because timings
    /// break the byte-identical output contract.
    #[serde(default)]
    pub record_wall_ms: bool,
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)
            .map_err(|e| Error::Validation(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_json(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Validation(m));
        if self.n_values.is_empty() || self.alpha_values.is_empty() {
            return bad("n_values and alpha_values must be nonempty".into());
        }
        if self.n_values.iter().any(|n| !(n.is_finite() && *n > 0.0)) {
            return bad("n_values must be positive".into());
        }
        if self.n_values.windows(2).any(|w| w[0] >= w[1]) {
            return bad("n_values must be strictly increasing".into());
        }
        if let Some(a) = self.alpha_values.iter().find(|a| !(**a > 0.0 && **a < 0.5)) {
            return bad(format!("alpha {a} is outside (0, 1/2)"));
        }
        if self.replicates == 0 || self.replicate_overrides.iter().any(|o| o.replicates == 0) {
            return bad("replicates must be at least 1".into());
        }
        if let Some(o) = self.replicate_overrides.iter().find(|o| !self.n_values.contains(&o.n)) {
            return bad(format!("replicate override for n={} which is not swept", o.n));
        }
        if !(0.0..std::f64::consts::FRAC_PI_4).contains(&self.delta) {
            return bad(format!("delta {} is outside [0, π/4)", self.delta));
        }
        if !(self.epsilon > 0.0) {
            return bad("epsilon must be positive".into());
        }
        if !(self.hausdorff_ds > 0.0 && self.hausdorff_ds < 1.0) {
            return bad("hausdorff_ds must lie in (0, 1)".into());
        }
        if self.solver.max_bisect == 0 {
            return bad("solver.max_bisect must be at least 1".into());
        }
        for v in [self.solver.lambda_tol, self.solver.lambda_max].into_iter().flatten() {
            if !(v > 0.0 && v.is_finite()) {
                return bad("solver multipliers must be positive".into());
            }
        }
        Ok(())
    }

    pub fn replicates_for(&self, n: f64) -> usize {
        self.replicate_overrides
            .iter()
            .find(|o| o.n == n)
            .map_or(self.replicates, |o| o.replicates)
    }

    /// All trials in output order: by n, then α, then replicate.
    pub fn trials(&self) -> Vec<TrialSpec> {
        let mut out = Vec::new();
        for (ni, &n) in self.n_values.iter().enumerate() {
            for (ai, &alpha) in self.alpha_values.iter().enumerate() {
                for rep in 0..self.replicates_for(n) {
                    out.push(TrialSpec {
                        trial_index: out.len() as u64,
                        n_index: ni,
                        alpha_index: ai,
                        replicate: rep,
                        n,
                        alpha,
                    });
                }
            }
        }
        out
    }

    pub fn trial_count(&self) -> usize {
        self.n_values
            .iter()
            .map(|&n| self.replicates_for(n) * self.alpha_values.len())
            .sum()
    }

    /// Resolves an output path against the config file's directory.
    pub fn resolve(&self, p: &Path) -> PathBuf {
        match &self.base_dir {
            Some(base) if p.is_relative() => base.join(p),
            _ => p.to_path_buf(),
        }
    }
}
