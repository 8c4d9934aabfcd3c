//! Experiment configuration. Every field can come from a JSON document
//! (`--config`) or from the matching flag; flags win over the document,
//! the document wins over the `NQA_PRECISION_BITS` environment variable.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const PRECISION_ENV: &str = "NQA_PRECISION_BITS";

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Sequence in the grammar, e.g. powlog:a=1,b=2.
    #[arg(long)]
    pub sequence: Option<String>,
    /// Dyadic truncation 2^j_max.
    #[arg(long)]
    pub j_max: Option<u64>,
    /// Block index for `cx schwarz`.
    #[arg(long)]
    pub j: Option<u64>,
    /// First index of the contradiction sums (default: smallest admissible).
    #[arg(long)]
    pub j0: Option<u64>,
    /// Last index J of the contradiction sums (default: j_max).
    #[arg(long)]
    pub j_top: Option<u64>,
    /// Coefficient degree K, S_k order, β tail terms, or threshold count.
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Power n of |ω|^{2n}.
    #[arg(long)]
    pub n: Option<u32>,
    /// Explicit evaluation points (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub t: Option<Vec<f64>>,
    /// Log grid lower end.
    #[arg(long)]
    pub t_lo: Option<f64>,
    /// Log grid upper end.
    #[arg(long)]
    pub t_hi: Option<f64>,
    /// Log grid size.
    #[arg(long)]
    pub points: Option<usize>,
    /// square-log, loglog-square, log-weight, alpha-doubled or all.
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub c_prime: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Dense-scan points for minimum-modulus searches.
    #[arg(long)]
    pub density: Option<usize>,
    #[arg(long)]
    pub refine_iters: Option<usize>,
    #[arg(long)]
    pub precision_bits: Option<u32>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Write the CSV table here ("-" for stdout).
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Write the JSON summary here instead of stdout.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($f:ident),*) => {
        ExperimentConfig { $($f: $top.$f.or($base.$f)),* }
    };
}

impl ExperimentConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("config JSON: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    /// Fields set in `top` replace those in `self`.
    pub fn overlay(self, top: ExperimentConfig) -> ExperimentConfig {
        let base = self;
        overlay!(
            base, top, sequence, j_max, j, j0, j_top, k_max, n, t, t_lo, t_hi, points, beta, c, c_prime, delta, samples,
            radius, seed, density, refine_iters, precision_bits, trials, eps, csv, json
        )
    }

    /// Effective config: environment, then the JSON document, then flags.
    pub fn resolve(env_precision: Option<&str>, file: Option<ExperimentConfig>, flags: ExperimentConfig) -> Result<Self> {
        let mut base = ExperimentConfig::default();
        if let Some(v) = env_precision {
            let bits = v.trim().parse::<u32>().map_err(|_| Error::Config(format!("{PRECISION_ENV}={v:?} is not an integer")))?;
            base.precision_bits = Some(bits);
        }
        let base = match file {
            Some(f) => base.overlay(f),
            None => base,
        };
        Ok(base.overlay(flags))
    }

    pub fn sequence_text(&self) -> Result<&str> {
        self.sequence.as_deref().ok_or_else(|| Error::Config("this command needs --sequence".into()))
    }
}

/// Range check for a numeric parameter.
pub(crate) fn within<T: PartialOrd + std::fmt::Display + Copy>(name: &str, v: T, lo: T, hi: T) -> Result<T> {
    if v >= lo && v <= hi {
        Ok(v)
    } else {
        Err(Error::Config(format!("{name} = {v} is outside [{lo}, {hi}]")))
    }
}
