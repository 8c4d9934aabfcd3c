use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{log_grid, CompSum};
use crate::weight_core::coeffs::{ln_sup_poly, CoeffTable};
use crate::weight_core::evaluator::{big_n, WeightEvaluator};
use crate::weight_core::sequence::ZeroSequence;

/// Absolute rounding allowance for a comparison between values of size `scale`.
pub fn rounding_slack(scale: f64) -> f64 {
    1e-12 * (1.0 + scale.abs())
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingPoint {
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingReport {
    pub l: f64,
    pub points: Vec<ScalingPoint>,
    pub worst_margin: f64,
    pub violations: usize,
}

/// ln|ω(Lt)| ≤ L²·ln|ω(t)| at `samples` log-spaced t in [t_lo, t_hi].
pub fn scaling_inequality_check(w: &WeightEvaluator, l: f64, samples: usize, t_lo: f64, t_hi: f64) -> Result<ScalingReport> {
    if !(l >= 1.0 && l.is_finite()) {
        return Err(Error::Precondition(format!("scaling check needs L ≥ 1, got {l}")));
    }
    let mut points = Vec::with_capacity(samples);
    for t in log_grid(t_lo, t_hi, samples) {
        let (lhs, eps) = w.eval(l * t)?;
        let rhs = l * l * w.eval(t)?.0;
        let margin = rhs - lhs;
        points.push(ScalingPoint { t, lhs, rhs, margin, slack: eps + rounding_slack(rhs) });
    }
    let worst_margin = points.iter().map(|p| p.margin).fold(f64::INFINITY, f64::min);
    let violations = points.iter().filter(|p| p.margin < -p.slack).count();
    Ok(ScalingReport { l, points, worst_margin, violations })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrongNqaStatus {
    /// The maximum is attained well inside the scanned range.
    Certified,
    /// The running maximum is still growing at the edge of the range.
    NotCertified,
    /// No tail bound for Σ_{j>J} 1/t_j.
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct StrongNqaReport {
    pub c_min: f64,
    pub argmax_k: u64,
    pub k_max: u64,
    pub terms: u64,
    pub status: StrongNqaStatus,
}

/// c_min = max_{k≤K} (t_k/k)(Σ_{j=k}^{J} 1/t_j + tail), with J = `terms`.
/// Certified when the maximiser lies in the first half of [1, K].
pub fn strong_nqa_tail_check(s: &ZeroSequence, k_max: u64, terms: u64) -> StrongNqaReport {
    let zeros = s.zeros(terms.max(k_max).min(s.j_cut()));
    let tail = s.tail_recip(zeros.len() as u64);
    let Some(tail) = tail else {
        return StrongNqaReport { c_min: f64::NAN, argmax_k: 0, k_max, terms: zeros.len() as u64, status: StrongNqaStatus::Inconclusive };
    };
    let mut suffix = vec![0.0; zeros.len() + 1];
    let mut acc = CompSum::new();
    for i in (0..zeros.len()).rev() {
        acc.add(1.0 / zeros[i]);
        suffix[i] = acc.value();
    }
    let kk = k_max.min(zeros.len() as u64);
    let mut c_min = f64::NEG_INFINITY;
    let mut argmax_k = 0;
    for k in 1..=kk {
        let i = (k - 1) as usize;
        let v = zeros[i] / k as f64 * (suffix[i] + tail);
        if v > c_min {
            c_min = v;
            argmax_k = k;
        }
    }
    let status = if argmax_k * 2 <= kk { StrongNqaStatus::Certified } else { StrongNqaStatus::NotCertified };
    StrongNqaReport { c_min, argmax_k, k_max: kk, terms: zeros.len() as u64, status }
}

#[derive(Debug, Clone, Serialize)]
pub struct LogConvexityReport {
    pub worst_margin: f64,
    pub worst_index: usize,
    pub violations: Vec<usize>,
}

/// 2 ln a_k ≥ ln a_{k-1} + ln a_{k+1} + 3 ln(1 - δ) on indices with nonzero entries.
pub fn log_convexity_check(table: &CoeffTable) -> LogConvexityReport {
    let delta = table.trunc_error_rel;
    let slack3 = if delta < 1.0 { -3.0 * (-delta).ln_1p() } else { f64::INFINITY };
    let mut worst = (f64::INFINITY, 0);
    let mut violations = Vec::new();
    for k in 1..table.k_max {
        let (a, b, c) = (table.ln_a[k - 1], table.ln_a[k], table.ln_a[k + 1]);
        if c == f64::NEG_INFINITY {
            continue;
        }
        let margin = 2.0 * b - a - c;
        let round = 64.0 * f64::EPSILON * (a.abs() + 2.0 * b.abs() + c.abs());
        if margin < worst.0 {
            worst = (margin, k);
        }
        if margin + slack3 + round < 0.0 {
            violations.push(k);
        }
    }
    LogConvexityReport { worst_margin: worst.0, worst_index: worst.1, violations }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SideStatus {
    Holds,
    Violated,
    /// The supremum at √2·t sits at the table edge p = K, so the degree-K
    /// table cannot certify the upper side.
    TableInadequate,
}

#[derive(Debug, Clone, Serialize)]
pub struct SandwichPoint {
    pub t: f64,
    pub ln_sup: f64,
    pub n_log_omega: f64,
    pub ln_sup_sqrt2: f64,
    pub lower: SideStatus,
    pub upper: SideStatus,
    pub argmax_sqrt2: usize,
}

/// ln sup_p a_p t^p ≤ n·ln|ω(t)| ≤ ½ ln 2 + ln sup_p a_p (√2 t)^p.
/// `w` must enumerate no more zeros than the table.
pub fn sandwich_check(table: &CoeffTable, w: &WeightEvaluator, grid: &[f64]) -> Result<Vec<SandwichPoint>> {
    if w.terms() > table.j_used {
        return Err(Error::Precondition("sandwich evaluator enumerates more zeros than the table".into()));
    }
    let n = table.n as f64;
    let mut out = Vec::with_capacity(grid.len());
    for &t in grid {
        let (v, eps) = w.eval(t)?;
        let (ls, _) = ln_sup_poly(table, t.ln());
        let (ls2, p2) = ln_sup_poly(table, (std::f64::consts::SQRT_2 * t).ln());
        let nv = n * v;
        let lower_slack = n * eps + rounding_slack(nv) + table.trunc_error_rel.ln_1p();
        let lower = if ls <= nv + lower_slack { SideStatus::Holds } else { SideStatus::Violated };
        let upper_holds = nv <= 0.5 * std::f64::consts::LN_2 + ls2 + rounding_slack(nv);
        let at_edge = p2 == table.k_max && !table.complete;
        let upper = match (upper_holds, at_edge) {
            (true, _) => SideStatus::Holds,
            (false, true) => SideStatus::TableInadequate,
            (false, false) => SideStatus::Violated,
        };
        out.push(SandwichPoint { t, ln_sup: ls, n_log_omega: nv, ln_sup_sqrt2: ls2, lower, upper, argmax_sqrt2: p2 });
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct ModulusReport {
    pub samples: usize,
    pub violations: usize,
    pub worst_margin: f64,
    /// Points where ln|ω(z)| exceeds ln|ω(|z|)| (allowed by the bound; mostly Im z < 0).
    pub above_real_axis_value: usize,
}

/// ln|ω(z)| ≤ ln ω(-i|z|) at pseudo-random z with log-uniform modulus in
/// [r_lo, r_hi] and uniform argument.
pub fn modulus_bound_check(w: &WeightEvaluator, samples: usize, r_lo: f64, r_hi: f64, seed: u64) -> Result<ModulusReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut above = 0;
    let mut worst = f64::INFINITY;
    for _ in 0..samples {
        let r = (rng.gen::<f64>() * (r_hi / r_lo).ln()).exp() * r_lo;
        let th = rng.gen::<f64>() * std::f64::consts::TAU;
        let (x, y) = (r * th.cos(), r * th.sin());
        let (vz, _) = w.eval_complex(x, y)?;
        let modz = x.hypot(y);
        let vi = w.eval_imag_direct(modz);
        let (vr, _) = w.eval(modz)?;
        let margin = vi - vz;
        worst = worst.min(margin);
        if margin < -rounding_slack(vi) {
            violations += 1;
        }
        if vz > vr + rounding_slack(vr) {
            above += 1;
        }
    }
    Ok(ModulusReport { samples, violations, worst_margin: worst, above_real_axis_value: above })
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioProbe {
    pub t: Vec<f64>,
    pub ratio: Vec<f64>,
    /// True when the ratio increases along the whole grid.
    pub monotone_growth: bool,
}

/// ln ω(-it) / ln|ω(t)| on a grid.
pub fn strong_nqa_ratio_probe(w: &WeightEvaluator, grid: &[f64]) -> Result<RatioProbe> {
    let mut ratio = Vec::with_capacity(grid.len());
    for &t in grid {
        ratio.push(w.eval_imag(t)?.0 / w.eval(t)?.0);
    }
    let monotone_growth = ratio.windows(2).all(|p| p[1] > p[0]);
    Ok(RatioProbe { t: grid.to_vec(), ratio, monotone_growth })
}

#[derive(Debug, Clone, Serialize)]
pub struct OrderingReport {
    pub checked: usize,
    pub violations: usize,
}

/// N(t) ≤ ln|ω(t)| + ε(t) on a grid.
pub fn big_n_below_log_omega(w: &WeightEvaluator, grid: &[f64]) -> Result<OrderingReport> {
    let mut violations = 0;
    for &t in grid {
        let bn = big_n(w.sequence(), t)?.value;
        let (v, e) = w.eval(t)?;
        if bn > v + e + rounding_slack(v) {
            violations += 1;
        }
    }
    Ok(OrderingReport { checked: grid.len(), violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight_core::coeffs::{coeff_table, CoeffOptions};
    use crate::weight_core::evaluator::EvalOptions;

    #[test]
    fn scaling_identity_at_l_one() {
        let s = ZeroSequence::geometric(2.0).unwrap();
        let w = WeightEvaluator::new(&s, EvalOptions::default());
        let r = scaling_inequality_check(&w, 1.0, 20, 1.0, 1e4).unwrap();
        assert_eq!(r.worst_margin, 0.0);
        assert_eq!(r.violations, 0);
    }

    #[test]
    fn scaling_single_zero_closed_form() {
        let s = ZeroSequence::explicit(vec![1.0]).unwrap();
        let w = WeightEvaluator::new(&s, EvalOptions::default());
        let r = scaling_inequality_check(&w, 3.0, 1, 1.0, 1.0).unwrap();
        // ½ ln 10 ≤ 9 · ½ ln 2
        let expect = 4.5 * 2f64.ln() - 0.5 * 10f64.ln();
        assert!((r.worst_margin - expect).abs() < 1e-14);
    }

    #[test]
    fn scaling_geometric_l2() {
        let s = ZeroSequence::geometric(2.0).unwrap();
        let w = WeightEvaluator::new(&s, EvalOptions::default());
        let r = scaling_inequality_check(&w, 2.0, 50, 1.0, 1e4).unwrap();
        assert_eq!(r.violations, 0);
    }

    #[test]
    fn strong_nqa_geometric_constant() {
        let s = ZeroSequence::geometric(2.0).unwrap();
        let r = strong_nqa_tail_check(&s, 40, 200);
        assert!(r.c_min <= 2.0 + 1e-12);
        assert_eq!(r.status, StrongNqaStatus::Certified);
    }

    #[test]
    fn strong_nqa_powlog_not_certified() {
        let s = ZeroSequence::powlog(1.0, 2.0).unwrap();
        let r = strong_nqa_tail_check(&s, 2000, 1 << 16);
        assert_eq!(r.status, StrongNqaStatus::NotCertified);
    }

    #[test]
    fn strong_nqa_finite_list() {
        let s = ZeroSequence::explicit(vec![1.0, 2.0, 4.0]).unwrap();
        let r = strong_nqa_tail_check(&s, 3, 10);
        // k=1: 1·(1.75), k=2: 1·0.75, k=3: (4/3)·0.25
        assert!((r.c_min - 1.75).abs() < 1e-15);
    }

    #[test]
    fn log_convexity_geometric() {
        let s = ZeroSequence::geometric(2.0).unwrap();
        let t = coeff_table(&s, 2, 40, CoeffOptions::default()).unwrap();
        assert!(log_convexity_check(&t).violations.is_empty());
    }

    #[test]
    fn sandwich_geometric_n1() {
        let s = ZeroSequence::geometric(2.0).unwrap();
        let t = coeff_table(&s, 1, 40, CoeffOptions::default()).unwrap();
        let w = WeightEvaluator::with_terms(&s, t.j_used, 64);
        let pts = sandwich_check(&t, &w, &log_grid(0.1, 1e6, 50)).unwrap();
        assert!(pts.iter().all(|p| p.lower == SideStatus::Holds && p.upper == SideStatus::Holds));
    }

    #[test]
    fn modulus_bound_no_violations() {
        let s = ZeroSequence::geometric(2.0).unwrap();
        let w = WeightEvaluator::new(&s, EvalOptions::default());
        let r = modulus_bound_check(&w, 300, 1e-2, 1e4, 7).unwrap();
        assert_eq!(r.violations, 0);
    }

    #[test]
    fn ratio_probe_contrast() {
        let grid = log_grid(1e2, 1e5, 12);
        let g = ZeroSequence::geometric(2.0).unwrap();
        let wg = WeightEvaluator::new(&g, EvalOptions::default());
        let pg = strong_nqa_ratio_probe(&wg, &grid).unwrap();
        assert!(pg.ratio.iter().all(|&r| r < 3.0));
        let p = ZeroSequence::powlog(1.0, 2.0).unwrap();
        let wp = WeightEvaluator::with_terms(&p, 1 << 18, 64);
        let pp = strong_nqa_ratio_probe(&wp, &grid).unwrap();
        assert!(pp.ratio.last().unwrap() > pp.ratio.first().unwrap());
    }

    #[test]
    fn big_n_ordering() {
        let s = ZeroSequence::powlog(3.0, 0.0).unwrap();
        let w = WeightEvaluator::new(&s, EvalOptions { t_max: 1e3, ..Default::default() });
        let r = big_n_below_log_omega(&w, &log_grid(1.0, 1e3, 30)).unwrap();
        assert_eq!(r.violations, 0);
    }
}
