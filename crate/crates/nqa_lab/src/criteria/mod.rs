//! Series diagnostics for non-quasianalyticity and mild strong
//! non-quasianalyticity, on dyadic samples a_j = α(2^j) or directly on the
//! zero sequence.
//!
//! A verdict is `ConvergentCertified` only with an analytic tail bound;
//! `DivergentTrend` only when the last partial sum exceeds the threshold
//! (by default 10 times the partial sum at the half-way index).

pub mod conditions;
pub mod integral;
pub mod permanence;
pub mod profiles;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::numeric::CompSum;

pub use conditions::{criteria2_report, msnq_omega_conditions, ConditionsReport, ZeroSideCondition};
pub use integral::{integral_cross_check, IntegralCheck, IntegralKind};
pub use permanence::{permanence_checks, PermanenceReport};
pub use profiles::{sequence_profile, ProfileKind};

/// Samples a_{j_min}, …, a_{j_max} of a nonnegative function at 2^j, with
/// optional certified tails for the three dyadic series beyond j_max.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DyadicProfile {
    pub j_min: u64,
    pub values: Vec<f64>,
    pub source: String,
    /// The samples come from an increasing function.
    pub increasing: bool,
    pub tails: ProfileTails,
}

/// Bounds on Σ_{j>j_max} of the nqa and loglog terms, and on Σ_{j≥j_max} of
/// the msnq terms (whose last formed index is j_max - 1).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ProfileTails {
    pub nqa: Option<f64>,
    pub msnq: Option<f64>,
    pub loglog: Option<f64>,
}

impl DyadicProfile {
    pub fn new(j_min: u64, values: Vec<f64>, source: impl Into<String>, increasing: bool) -> Result<Self> {
        if j_min == 0 {
            return Err(Error::Domain("dyadic profiles start at j ≥ 1".into()));
        }
        if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::Domain(format!("profile value at j = {} is not a finite nonnegative real", j_min + i as u64)));
        }
        if increasing {
            if let Some(i) = values.windows(2).position(|w| w[1] < w[0]) {
                return Err(Error::Domain(format!(
                    "profile flagged increasing decreases at j = {}",
                    j_min + i as u64 + 1
                )));
            }
        }
        Ok(DyadicProfile { j_min, values, source: source.into(), increasing, tails: ProfileTails::default() })
    }

    /// Sample `f` at 2^j for j_min ≤ j ≤ j_max.
    pub fn from_fn<F: FnMut(f64) -> f64>(j_min: u64, j_max: u64, mut f: F, source: impl Into<String>, increasing: bool) -> Result<Self> {
        let values = (j_min..=j_max).map(|j| f(2f64.powi(j as i32))).collect();
        Self::new(j_min, values, source, increasing)
    }

    pub fn with_tails(mut self, tails: ProfileTails) -> Self {
        self.tails = tails;
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Last sampled index (j_min - 1 for an empty profile).
    pub fn j_max(&self) -> u64 {
        self.j_min + self.values.len() as u64 - 1
    }

    pub fn value(&self, j: u64) -> f64 {
        self.values[(j - self.j_min) as usize]
    }

    /// c·a_j; tails follow from the term-wise comparison where available.
    pub fn scaled(&self, c: f64) -> Result<DyadicProfile> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Domain(format!("scale factor must be positive, got {c}")));
        }
        let mut p = DyadicProfile::new(
            self.j_min,
            self.values.iter().map(|v| c * v).collect(),
            format!("{}·{}", c, self.source),
            self.increasing,
        )?;
        // c·x·ln(2^j/(c·y)) = c·x·ln(2^j/y) + c·ln(1/c)·x.
        let msnq = match (self.tails.msnq, self.tails.nqa) {
            (Some(m), _) if c >= 1.0 => Some(c * m),
            (Some(m), Some(n)) => Some(c * m + c * (1.0 / c).ln() * n),
            _ => None,
        };
        p.tails = ProfileTails { nqa: self.tails.nqa.map(|x| c * x), msnq, loglog: self.tails.loglog.map(|x| c * x) };
        Ok(p)
    }

    /// a'_j = a_{j+k}, the samples of α(2^k ·).
    pub fn shifted(&self, k: u64) -> Result<DyadicProfile> {
        if k as usize >= self.values.len() {
            return Err(Error::Domain(format!("shift {k} leaves no samples")));
        }
        let mut p = DyadicProfile::new(
            self.j_min,
            self.values[k as usize..].to_vec(),
            format!("{}(2^{k}·)", self.source),
            self.increasing,
        )?;
        // (a_{j+k}/2^j)·ln(2^j/a_{j+k+1}) ≤ 2^k·(a_{j+k}/2^{j+k})·ln(2^{j+k}/a_{j+k+1}).
        let f = 2f64.powi(k as i32);
        let by = |x: f64| x * f;
        p.tails = ProfileTails {
            nqa: self.tails.nqa.map(by),
            msnq: self.tails.msnq.map(by),
            loglog: self.tails.loglog.map(by),
        };
        Ok(p)
    }
}

/// Three-valued convergence verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ConvergentCertified,
    DivergentTrend,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::ConvergentCertified => "convergent-certified",
            Verdict::DivergentTrend => "divergent-trend",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// How the divergence threshold is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ThresholdPolicy {
    /// factor × the partial sum at the half-way index.
    HalfMultiple(f64),
    Absolute(f64),
}

impl Default for ThresholdPolicy {
    fn default() -> Self {
        ThresholdPolicy::HalfMultiple(10.0)
    }
}

/// Partial sums, optional tail certificate and verdict of one series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesDiagnostic {
    pub condition: String,
    /// Index of the first accumulated term.
    pub j_start: u64,
    pub partial_sums: Vec<f64>,
    pub tail_bound: Option<f64>,
    pub verdict: Verdict,
    pub threshold_used: f64,
    pub onset_index: Option<u64>,
}

impl SeriesDiagnostic {
    /// Accumulate `terms` (indexed from `j_start`) and classify.
    pub fn from_terms(
        condition: impl Into<String>,
        j_start: u64,
        terms: &[f64],
        tail_bound: Option<f64>,
        policy: ThresholdPolicy,
        onset_index: Option<u64>,
    ) -> Self {
        let mut acc = CompSum::new();
        let partial_sums: Vec<f64> = terms
            .iter()
            .map(|&x| {
                acc.add(x);
                acc.value()
            })
            .collect();
        let tail_bound = tail_bound.filter(|t| t.is_finite() && *t >= 0.0);
        let threshold_used = match policy {
            ThresholdPolicy::Absolute(x) => x,
            ThresholdPolicy::HalfMultiple(f) => {
                if partial_sums.is_empty() {
                    f64::INFINITY
                } else {
                    let j_end = j_start + partial_sums.len() as u64 - 1;
                    let half = j_end / 2;
                    let s_half = if half < j_start { 0.0 } else { partial_sums[(half - j_start) as usize] };
                    f * s_half
                }
            }
        };
        let verdict = if partial_sums.is_empty() && tail_bound.is_none() {
            Verdict::Inconclusive
        } else if tail_bound.is_some() {
            Verdict::ConvergentCertified
        } else if partial_sums.last().is_some_and(|&s| s > threshold_used) {
            Verdict::DivergentTrend
        } else {
            Verdict::Inconclusive
        };
        SeriesDiagnostic {
            condition: condition.into(),
            j_start,
            partial_sums,
            tail_bound,
            verdict,
            threshold_used,
            onset_index,
        }
    }

    pub fn last(&self) -> Option<f64> {
        self.partial_sums.last().copied()
    }

    /// Certified upper bound on the full sum, when available.
    pub fn upper_bound(&self) -> Option<f64> {
        self.tail_bound.map(|t| self.last().unwrap_or(0.0) + t)
    }

    /// Partial sums are nondecreasing from the onset index on.
    pub fn is_monotone(&self) -> bool {
        let skip = self.onset_index.map_or(0, |o| o.saturating_sub(self.j_start) as usize);
        let from = skip.saturating_sub(1).min(self.partial_sums.len());
        self.partial_sums[from..].windows(2).all(|w| w[1] >= w[0])
    }

    /// JSON report with at most `max_points` (index, partial sum) pairs.
    pub fn to_json(&self, max_points: usize) -> Value {
        let n = self.partial_sums.len();
        let step = n.div_ceil(max_points.max(1)).max(1);
        let mut pts: Vec<Value> = (0..n)
            .step_by(step)
            .map(|i| json!([self.j_start + i as u64, self.partial_sums[i]]))
            .collect();
        if n > 0 && (n - 1) % step != 0 {
            pts.push(json!([self.j_start + n as u64 - 1, self.partial_sums[n - 1]]));
        }
        json!({
            "condition": self.condition,
            "partial_sums": pts,
            "tail_bound": self.tail_bound,
            "verdict": self.verdict.as_str(),
            "threshold_used": if self.threshold_used.is_finite() { json!(self.threshold_used) } else { Value::Null },
            "onset_index": self.onset_index,
        })
    }
}

fn dyadic(j: u64) -> f64 {
    2f64.powi(j as i32)
}

/// Σ a_j/2^j. `tail` overrides the profile's own certificate.
pub fn nqa_series(p: &DyadicProfile, tail: Option<f64>) -> SeriesDiagnostic {
    nqa_series_with(p, tail, ThresholdPolicy::default())
}

pub fn nqa_series_with(p: &DyadicProfile, tail: Option<f64>, policy: ThresholdPolicy) -> SeriesDiagnostic {
    let terms: Vec<f64> = p.values.iter().enumerate().map(|(i, a)| a / dyadic(p.j_min + i as u64)).collect();
    SeriesDiagnostic::from_terms("nqa", p.j_min, &terms, tail.or(p.tails.nqa), policy, None)
}

/// Σ (a_j/2^j)·ln j.
pub fn loglog_series(p: &DyadicProfile) -> SeriesDiagnostic {
    loglog_series_with(p, ThresholdPolicy::default())
}

pub fn loglog_series_with(p: &DyadicProfile, policy: ThresholdPolicy) -> SeriesDiagnostic {
    let terms: Vec<f64> = p
        .values
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let j = p.j_min + i as u64;
            if *a == 0.0 {
                0.0
            } else {
                a / dyadic(j) * (j as f64).ln()
            }
        })
        .collect();
    let tail = if p.is_empty() { None } else { p.tails.loglog };
    SeriesDiagnostic::from_terms("loglog", p.j_min, &terms, tail, policy, None)
}

/// Σ (a_j/2^j)·ln(2^j/a_{j+1}), from the first j with a_{j+1} ≤ 2^j.
/// Later indices with a_{j+1} > 2^j are skipped (contribute 0).
pub fn msnq_series(p: &DyadicProfile) -> Result<SeriesDiagnostic> {
    msnq_series_with(p, ThresholdPolicy::default())
}

pub fn msnq_series_with(p: &DyadicProfile, policy: ThresholdPolicy) -> Result<SeriesDiagnostic> {
    if !p.increasing {
        return Err(Error::Precondition("msnq_series needs a profile from an increasing function".into()));
    }
    let n = p.len();
    let onset = (0..n.saturating_sub(1)).find(|&i| p.values[i + 1] <= dyadic(p.j_min + i as u64));
    let Some(i0) = onset else {
        return Ok(SeriesDiagnostic::from_terms("msnq", p.j_min, &[], None, policy, None));
    };
    let terms: Vec<f64> = (i0..n - 1)
        .map(|i| {
            let j = p.j_min + i as u64;
            let (a, b) = (p.values[i], p.values[i + 1]);
            if a == 0.0 || b > dyadic(j) {
                0.0
            } else {
                a / dyadic(j) * (dyadic(j) / b).ln()
            }
        })
        .collect();
    let j0 = p.j_min + i0 as u64;
    Ok(SeriesDiagnostic::from_terms("msnq", j0, &terms, p.tails.msnq, policy, Some(j0)))
}

/// b_j = max(a_{j+1} - a_j, 0) for j_min ≤ j < j_max.
pub fn positive_part_diff(p: &DyadicProfile) -> Result<DyadicProfile> {
    if p.len() < 2 {
        return Err(Error::Domain("positive_part_diff needs at least two samples".into()));
    }
    let values = p.values.windows(2).map(|w| (w[1] - w[0]).max(0.0)).collect();
    let mut out = DyadicProfile::new(p.j_min, values, format!("Δ⁺{}", p.source), false)?;
    // Σ_{j>J-1} b_j/2^j ≤ 2·Σ_{i>J} a_i/2^i, and likewise with the ln j weight.
    out.tails = ProfileTails { nqa: p.tails.nqa.map(|t| 2.0 * t), msnq: None, loglog: p.tails.loglog.map(|t| 2.0 * t) };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prof(j_min: u64, v: Vec<f64>) -> DyadicProfile {
        DyadicProfile::new(j_min, v, "test", true).unwrap()
    }

    #[test]
    fn nqa_linear_profile_sums_to_two() {
        // Σ j/2^j = 2; tail beyond J is (J+2)/2^J exactly.
        let p = prof(1, (1..=40).map(|j| j as f64).collect());
        let tail = 42.0 / 2f64.powi(40);
        let d = nqa_series(&p, Some(tail));
        assert_eq!(d.verdict, Verdict::ConvergentCertified);
        assert!((d.upper_bound().unwrap() - 2.0).abs() < 1e-14);
        assert!(d.is_monotone());
    }

    #[test]
    fn constant_terms_cross_an_absolute_threshold() {
        let p = prof(1, (1..=40).map(|j| 2f64.powi(j)).collect());
        let d = nqa_series_with(&p, None, ThresholdPolicy::Absolute(30.0));
        assert_eq!(d.last(), Some(40.0));
        assert_eq!(d.verdict, Verdict::DivergentTrend);
        // Linear growth never reaches ten times its half-way value.
        let d = nqa_series(&p, None);
        assert_eq!(d.threshold_used, 200.0);
        assert_eq!(d.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn zero_profile_with_zero_tail() {
        let p = prof(1, vec![0.0; 10]);
        let d = nqa_series(&p, Some(0.0));
        assert!(d.partial_sums.iter().all(|&s| s == 0.0));
        assert_eq!(d.verdict, Verdict::ConvergentCertified);
        let m = msnq_series(&p).unwrap();
        assert_eq!(m.last(), Some(0.0));
    }

    #[test]
    fn loglog_cases() {
        let p = DyadicProfile::new(2, (2..=50).map(|j| 2f64.powi(j) / (j as f64).ln()).collect(), "t/ln", false).unwrap();
        let d = loglog_series_with(&p, ThresholdPolicy::Absolute(40.0));
        assert!(d.partial_sums.iter().enumerate().all(|(i, s)| (s - (i + 1) as f64).abs() < 1e-12));
        assert_eq!(d.verdict, Verdict::DivergentTrend);
        let e = DyadicProfile::new(1, vec![], "empty", true).unwrap();
        assert_eq!(loglog_series(&e).verdict, Verdict::Inconclusive);
    }

    #[test]
    fn msnq_skips_prefix_above_the_diagonal() {
        // a_2 = 5 > 2 and a_3 = 5 > 4, so the first formed term is j = 3.
        let p = prof(1, vec![1.0, 5.0, 5.0, 6.0]);
        let d = msnq_series(&p).unwrap();
        assert_eq!(d.onset_index, Some(3));
        assert_eq!(d.j_start, 3);
        let t3 = 5.0 / 8.0 * (8.0f64 / 6.0).ln();
        assert_eq!(d.partial_sums.len(), 1);
        assert!((d.partial_sums[0] - t3).abs() < 1e-15);
        let short = prof(1, vec![1.0, 9.0]);
        assert_eq!(msnq_series(&short).unwrap().verdict, Verdict::Inconclusive);
        let dec = DyadicProfile::new(1, vec![2.0, 1.0], "dec", false).unwrap();
        assert!(msnq_series(&dec).is_err());
    }

    #[test]
    fn positive_part_examples() {
        let b = positive_part_diff(&prof(1, vec![1.0, 2.0, 3.0, 4.0])).unwrap();
        assert_eq!(b.values, vec![1.0, 1.0, 1.0]);
        let d = DyadicProfile::new(1, vec![5.0, 1.0, 1.0], "x", false).unwrap();
        assert_eq!(positive_part_diff(&d).unwrap().values, vec![0.0, 0.0]);
        assert!(positive_part_diff(&prof(1, vec![1.0])).is_err());
    }

    #[test]
    fn json_is_decimated_and_keeps_the_last_point() {
        let p = prof(1, (1..=100).map(|j| j as f64).collect());
        let v = nqa_series(&p, None).to_json(8);
        let pts = v["partial_sums"].as_array().unwrap();
        assert!(pts.len() <= 9);
        assert_eq!(pts.last().unwrap()[0], 100);
    }
}
