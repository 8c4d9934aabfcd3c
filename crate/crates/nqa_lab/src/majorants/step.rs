//! The step function f = t_k/ln t_k on [t_k, t_{k+1}) and probes of the
//! necessary limits f(t)/t → 0 and f(t)·ln t/t → 0.

use serde::Serialize;

use crate::criteria::{nqa_series, DyadicProfile, ProfileTails, SeriesDiagnostic};
use crate::error::{Error, Result};
use crate::weight_core::SampledFunction;

/// t_k = e^{k²} for k = 1..=k_max.
pub fn square_exponent_thresholds(k_max: usize) -> Vec<f64> {
    (1..=k_max).map(|k| ((k * k) as f64).exp()).collect()
}

fn is_square_exponent(th: &[f64]) -> bool {
    th.iter().enumerate().all(|(i, t)| {
        let k2 = ((i + 1) * (i + 1)) as f64;
        (t.ln() - k2).abs() <= 1e-12 * k2
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepCounterexample {
    pub thresholds: Vec<f64>,
    /// f on the union of the dyadic grid 2^1..2^j_max and the thresholds.
    pub trace: SampledFunction,
    /// f(t_k)·ln t_k/t_k.
    pub threshold_ratios: Vec<f64>,
    pub profile: DyadicProfile,
    pub nqa: SeriesDiagnostic,
}

/// f(t) for the given thresholds; t beyond the last threshold stays on the
/// last step.
pub fn step_value(thresholds: &[f64], t: f64) -> f64 {
    let k = thresholds.partition_point(|&x| x <= t);
    if k == 0 {
        0.0
    } else {
        let tk = thresholds[k - 1];
        tk / tk.ln()
    }
}

/// Step trace on [2, 2^j_max] and its dyadic nqa diagnostic. For the
/// thresholds e^{k²} (continued past the list) the tail is certified: on a
/// block [t_k, t_{k+1}) the terms f(2^j)/2^j sum to at most 2/ln t_k = 2/k².
pub fn step_counterexample(thresholds: &[f64], j_max: u64) -> Result<StepCounterexample> {
    if thresholds.is_empty() || (thresholds[0] - std::f64::consts::E).abs() > 1e-15 {
        return Err(Error::Domain("thresholds must start at t_1 = e".into()));
    }
    if let Some(i) = thresholds.windows(2).position(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
        return Err(Error::InvalidSequence { index: i + 2, msg: "thresholds must be finite and strictly increasing".into() });
    }
    if !(1..=1000).contains(&j_max) {
        return Err(Error::Domain(format!("j_max must lie in 1..=1000, got {j_max}")));
    }
    let top = 2f64.powi(j_max as i32);
    let mut grid: Vec<f64> = (1..=j_max).map(|j| 2f64.powi(j as i32)).collect();
    grid.extend(thresholds.iter().copied().filter(|&t| t > 2.0 && t < top));
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();
    let values = grid.iter().map(|&t| step_value(thresholds, t)).collect();
    let trace = SampledFunction::new(grid, values, "step t_k/ln t_k")?;
    let threshold_ratios = thresholds.iter().map(|&t| step_value(thresholds, t) * t.ln() / t).collect();

    let profile = DyadicProfile::from_fn(1, j_max, |t| step_value(thresholds, t), "step", true)?;
    let nqa_tail = is_square_exponent(thresholds).then(|| {
        // Block k containing 2^{j_max+1}; its remaining terms are at most
        // (t_k/k²)·2^{-j_max}, later blocks add 2Σ_{i>k} 1/i² ≤ 2(1/(k+1)² + 1/(k+1)).
        let x = (j_max as f64 + 1.0) * std::f64::consts::LN_2;
        let k = x.sqrt().floor().max(1.0);
        let part = (k * k - j_max as f64 * std::f64::consts::LN_2).exp() / (k * k);
        let rest = 2.0 * (1.0 / ((k + 1.0) * (k + 1.0)) + 1.0 / (k + 1.0));
        (part + rest) * (1.0 + 1e-12)
    });
    let profile = profile.with_tails(ProfileTails { nqa: nqa_tail, ..ProfileTails::default() });
    let nqa = nqa_series(&profile, nqa_tail);
    Ok(StepCounterexample { thresholds: thresholds.to_vec(), trace, threshold_ratios, profile, nqa })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitProbe {
    pub label: String,
    /// (t, value) at the dyadic grid points.
    pub samples: Vec<(f64, f64)>,
    /// Largest value over the last quarter of the samples.
    pub tail_max: f64,
    /// First sample from which every later sample is below ε.
    pub settles_at: Option<f64>,
    pub decays: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitsReport {
    pub eps: f64,
    /// f(t)/t.
    pub ratio: LimitProbe,
    /// f(t)·ln t/t.
    pub log_ratio: LimitProbe,
}

fn probe(label: &str, samples: Vec<(f64, f64)>, eps: f64) -> LimitProbe {
    let n = samples.len();
    let tail_max = samples[n - n.div_ceil(4)..].iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
    let settles_at = match samples.iter().rposition(|s| s.1 >= eps) {
        None => Some(samples[0].0),
        Some(i) if i + 1 < n => Some(samples[i + 1].0),
        _ => None,
    };
    LimitProbe { label: label.into(), samples, tail_max, settles_at, decays: tail_max < eps }
}

/// Samples f(t)/t and f(t)·ln t/t at the grid points that are powers of two;
/// a probe decays when its last quarter stays below ε.
pub fn necessary_limits_probe(trace: &SampledFunction, eps: f64) -> Result<LimitsReport> {
    let pts: Vec<(f64, f64)> = trace
        .grid
        .iter()
        .zip(&trace.values)
        .filter(|(t, _)| {
            let l = t.log2();
            (l - l.round()).abs() < 1e-12 && l >= 1.0
        })
        .map(|(&t, &v)| (t, v))
        .collect();
    if pts.len() < 2 {
        return Err(Error::Domain("trace needs at least two dyadic grid points 2^j, j ≥ 1".into()));
    }
    let ratio = probe("f(t)/t", pts.iter().map(|&(t, v)| (t, v / t)).collect(), eps);
    let log_ratio = probe("f(t)·ln t/t", pts.iter().map(|&(t, v)| (t, v * t.ln() / t)).collect(), eps);
    Ok(LimitsReport { eps, ratio, log_ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::Verdict;
    use crate::numeric::log_grid;
    use crate::weight_core::{log_omega_far, ZeroSequence};

    #[test]
    fn thresholds_give_unit_ratio() {
        let th = square_exponent_thresholds(6);
        let s = step_counterexample(&th, 60).unwrap();
        for r in &s.threshold_ratios {
            assert!((r - 1.0).abs() <= 4.0 * f64::EPSILON, "{r}");
        }
        assert_eq!(step_value(&th, 2.0), 0.0);
        assert_eq!(s.nqa.verdict, Verdict::ConvergentCertified);
    }

    #[test]
    fn nqa_tail_bounds_a_longer_sum() {
        // Oracle: the same series summed out to j = 400.
        let th = square_exponent_thresholds(20);
        let short = step_counterexample(&th, 60).unwrap();
        let long = step_counterexample(&th, 400).unwrap();
        let extra = long.nqa.last().unwrap() - short.nqa.last().unwrap();
        assert!(extra <= short.nqa.tail_bound.unwrap(), "{extra} vs {:?}", short.nqa.tail_bound);
    }

    #[test]
    fn malformed_thresholds_rejected() {
        assert!(step_counterexample(&[2.0, 10.0], 10).is_err());
        assert!(step_counterexample(&[std::f64::consts::E, 2.0], 10).is_err());
    }

    #[test]
    fn step_does_not_decay() {
        let s = step_counterexample(&square_exponent_thresholds(6), 60).unwrap();
        let r = necessary_limits_probe(&s.trace, 1e-3).unwrap();
        assert!(!r.log_ratio.decays);
    }

    #[test]
    fn log_omega_decays() {
        let s = ZeroSequence::geometric(2.0).unwrap();
        let grid: Vec<f64> = (1..=30).map(|j| 2f64.powi(j)).collect();
        let f = SampledFunction::from_fn(grid, |t| log_omega_far(&s, t).unwrap().0, "lnω").unwrap();
        let r = necessary_limits_probe(&f, 1e-3).unwrap();
        assert!(r.ratio.decays && r.log_ratio.decays);
    }

    #[test]
    fn constant_decays_like_inverse() {
        let f = SampledFunction::from_fn(log_grid(2.0, 2f64.powi(40), 40), |_| 5.0, "5").unwrap();
        let r = necessary_limits_probe(&f, 1e-3).unwrap();
        for w in r.ratio.samples.windows(2) {
            assert!((w[0].1 * w[0].0 - w[1].1 * w[1].0).abs() < 1e-9);
        }
        assert!(r.ratio.decays && r.log_ratio.decays);
    }
}
