//! The concave series majorant α(t) = ln 3 + 2 ln(1 + Σ_k (4t)^k/(t_1⋯t_k)),
//! the derived β, and the λ that makes β well defined.

use std::f64::consts::{E, LN_2, PI};

use serde::Serialize;

use crate::criteria::{DyadicProfile, ProfileTails};
use crate::error::{Error, Result};
use crate::numeric::log_add;
use crate::tails::{Envelope, Term};
use crate::weight_core::{log_omega_far, rounding_slack, Family, SampledFunction, ZeroSequence};

pub const DEFAULT_K_EVAL: usize = 1 << 16;

/// offset + 2·ln(1 + Σ_{k≥1} (scale·t)^k/(t_1⋯t_k)).
#[derive(Debug, Clone, PartialEq)]
pub struct ConcaveSeriesMajorant {
    sequence: ZeroSequence,
    pub scale: f64,
    pub offset: f64,
    pub k_eval: usize,
    /// Σ_{i≤k} ln t_i for k = 0..=K.
    ln_prefix: Vec<f64>,
    /// ln t_k for k = 1..=K+1 (index 0 unused); +∞ past an explicit list.
    ln_t: Vec<f64>,
}

fn ln_t(s: &ZeroSequence, j: u64) -> f64 {
    match s.family() {
        Family::Geometric { r } => j as f64 * r.ln(),
        Family::Power { a } => a * (j as f64).ln(),
        _ => s.t(j).ln(),
    }
}

impl ConcaveSeriesMajorant {
    pub fn new(sequence: &ZeroSequence, scale: f64, offset: f64, k_eval: usize) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite() && offset.is_finite()) {
            return Err(Error::Domain(format!("need scale > 0 and finite offset, got {scale}, {offset}")));
        }
        if k_eval == 0 {
            return Err(Error::Domain("K_eval must be at least 1".into()));
        }
        let k = match sequence.finite_len() {
            Some(n) => (n as usize).min(k_eval),
            None => k_eval,
        };
        let mut ln_t_v = Vec::with_capacity(k + 2);
        ln_t_v.push(f64::NAN);
        let mut ln_prefix = Vec::with_capacity(k + 1);
        ln_prefix.push(0.0);
        for j in 1..=(k as u64 + 1) {
            ln_t_v.push(ln_t(sequence, j));
        }
        for j in 1..=k {
            ln_prefix.push(ln_prefix[j - 1] + ln_t_v[j]);
        }
        Ok(ConcaveSeriesMajorant { sequence: sequence.clone(), scale, offset, k_eval, ln_prefix, ln_t: ln_t_v })
    }

    /// scale 4, offset ln 3.
    pub fn standard(sequence: &ZeroSequence) -> Result<Self> {
        Self::new(sequence, 4.0, 3f64.ln(), DEFAULT_K_EVAL)
    }

    pub fn sequence(&self) -> &ZeroSequence {
        &self.sequence
    }

    /// Concave (so α(2x) ≤ 2α(x)) when t_k/k is nondecreasing and offset ≥ 0.
    pub fn is_concave(&self) -> bool {
        self.sequence.omega0_flag() && self.offset >= 0.0
    }

    /// (α(t), bound on the truncation error). The series stops once the term
    /// ratio scale·t/t_{k+1} is ≤ 1/2 and the current term is below e^{-50}
    /// of the running sum; the remainder is then ≤ term·r/(1−r).
    pub fn eval(&self, t: f64) -> Result<(f64, f64)> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!("α needs finite t > 0, got {t}")));
        }
        let x = (self.scale * t).ln();
        let k_avail = self.ln_prefix.len() - 1;
        let mut acc = 0.0;
        let mut k = 1;
        let tail_ln = loop {
            if k > k_avail {
                if self.ln_t[k].is_infinite() {
                    break f64::NEG_INFINITY;
                }
                return Err(Error::RaiseKEval { t, k_eval: self.k_eval });
            }
            let lk = k as f64 * x - self.ln_prefix[k];
            acc = log_add(acc, lk);
            let ln_ratio = x - self.ln_t[k + 1];
            if ln_ratio == f64::NEG_INFINITY {
                break f64::NEG_INFINITY;
            }
            if ln_ratio <= -LN_2 && lk - acc < -50.0 {
                break lk + ln_ratio - (-ln_ratio.exp()).ln_1p();
            }
            k += 1;
        };
        Ok((self.offset + 2.0 * acc, 2.0 * (tail_ln - acc).exp()))
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        Ok(self.eval(t)?.0)
    }
}

pub fn eval_alpha_majorant(m: &ConcaveSeriesMajorant, t: f64) -> Result<(f64, f64)> {
    m.eval(t)
}

/// The α that β is built from.
#[derive(Debug, Clone, PartialEq)]
pub enum AlphaFn {
    Series(ConcaveSeriesMajorant),
    /// Interpolated trace; evaluation outside the grid is an error.
    Sampled(SampledFunction),
}

impl AlphaFn {
    pub fn eval(&self, t: f64) -> Result<(f64, f64)> {
        match self {
            AlphaFn::Series(m) => m.eval(t),
            AlphaFn::Sampled(f) => {
                let (lo, hi) = (f.grid[0], *f.grid.last().unwrap());
                if t < lo * (1.0 - 1e-12) || t > hi * (1.0 + 1e-12) {
                    return Err(Error::Domain(format!("α trace covers [{lo}, {hi}], asked for {t}")));
                }
                Ok((f.interp(t), 0.0))
            }
        }
    }

    fn concave(&self) -> bool {
        matches!(self, AlphaFn::Series(m) if m.is_concave())
    }
}

/// β(t) = 6α(2et)·ln((1+t)/(λα(2et))) + 8·Σ_{j≥1} α(2^j e t)/4^j, with the
/// series cut after `tail_terms` terms.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaMajorant {
    pub alpha: AlphaFn,
    pub lambda: f64,
    pub tail_terms: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaValue {
    pub value: f64,
    /// Propagated α truncation error.
    pub err: f64,
    /// Bound on the dropped series terms; None unless α is certified concave.
    pub tail: Option<f64>,
    /// (1+t)/(λα(2et)).
    pub ratio: f64,
}

impl BetaValue {
    pub fn upper(&self) -> Option<f64> {
        self.tail.map(|tl| self.value + self.err + tl)
    }
}

impl BetaMajorant {
    pub fn new(alpha: AlphaFn, lambda: f64, tail_terms: usize) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) || tail_terms == 0 {
            return Err(Error::Domain(format!("need λ > 0 and tail_terms ≥ 1, got {lambda}, {tail_terms}")));
        }
        Ok(BetaMajorant { alpha, lambda, tail_terms })
    }

    /// Largest λ for which (1+t)/(λα(2et)) > 8e holds at t (exclusive).
    pub fn lambda_max_at(&self, t: f64) -> Result<f64> {
        let a = self.alpha.eval(2.0 * E * t)?.0;
        Ok((1.0 + t) / (8.0 * E * a))
    }

    /// For concave α with α(0⁺) ≥ 0, α(2^j x) ≤ 2^{j−J}α(2^J x) for j ≥ J, so
    /// the dropped terms sum to at most 8α(2^J e t)·Σ_{j>J} 2^{j−J}/4^j
    /// = 8α(2^J e t)/4^J.
    pub fn eval(&self, t: f64) -> Result<BetaValue> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!("β needs finite t > 0, got {t}")));
        }
        let (a0, e0) = self.alpha.eval(2.0 * E * t)?;
        let ratio = (1.0 + t) / (self.lambda * a0);
        if !(a0 > 0.0 && ratio > 8.0 * E) {
            return Err(Error::LambdaDomain { t, lambda_max: (1.0 + t) / (8.0 * E * a0) });
        }
        let mut value = 6.0 * a0 * ratio.ln();
        let mut err = 6.0 * e0 * ratio.ln();
        let mut last = 0.0;
        let mut w = 1.0;
        let mut arg = E * t;
        for _ in 0..self.tail_terms {
            w /= 4.0;
            arg *= 2.0;
            let (a, e) = self.alpha.eval(arg)?;
            value += 8.0 * w * a;
            err += 8.0 * w * e;
            last = a + e;
        }
        let tail = self.alpha.concave().then(|| 8.0 * w * last);
        Ok(BetaValue { value, err, tail, ratio })
    }
}

pub fn eval_beta_majorant(b: &BetaMajorant, t: f64) -> Result<BetaValue> {
    b.eval(t)
}

/// λ = (1/(16e))·min (1+t)/α(2et) over the trace points t = g/(2e) in
/// [t_lo, t_hi] and the two endpoints, i.e. half of the largest admissible λ.
pub fn lambda_search(alpha_trace: &SampledFunction, domain: (f64, f64)) -> Result<f64> {
    let (t_lo, t_hi) = domain;
    if !(t_lo > 0.0 && t_hi >= t_lo && t_hi.is_finite()) {
        return Err(Error::Domain(format!("bad domain [{t_lo}, {t_hi}]")));
    }
    let (g_lo, g_hi) = (alpha_trace.grid[0], *alpha_trace.grid.last().unwrap());
    let tol = 1e-12;
    if 2.0 * E * t_lo < g_lo * (1.0 - tol) || 2.0 * E * t_hi > g_hi * (1.0 + tol) {
        return Err(Error::Domain(format!(
            "α trace on [{g_lo}, {g_hi}] does not cover 2e·[{t_lo}, {t_hi}]"
        )));
    }
    let mut ts = vec![t_lo, t_hi];
    ts.extend(alpha_trace.grid.iter().map(|g| g / (2.0 * E)).filter(|&t| t > t_lo && t < t_hi));
    let mut best = f64::INFINITY;
    for t in ts {
        let a = alpha_trace.interp((2.0 * E * t).clamp(g_lo, g_hi));
        if !(a > 0.0) {
            return Err(Error::Domain(format!("α(2et) = {a} at t = {t}: ratio (1+t)/α(2et) is unbounded")));
        }
        best = best.min((1.0 + t) / a);
    }
    Ok(best / (16.0 * E))
}

/// Coefficients c_0 + c_1 j + … of a polynomial in j.
fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (k, y) in b.iter().enumerate() {
            out[i + k] += x * y;
        }
    }
    out
}

/// Envelope for β(2^j)/2^j, j ≥ 1, when α is the series majorant of a
/// geometric sequence t_k = r^k. With x = ln(scale·t), every series term is
/// at most e^G where G = (x − ½ln r)²/(2 ln r) is the maximum of the
/// exponent over real k, and a unimodal lattice sum is at most its maximum
/// plus its integral, so α(t) ≤ offset + 2 ln(2 + √(2π/ln r)) + 2G.
pub fn beta_dyadic_envelope(b: &BetaMajorant) -> Option<Envelope> {
    let AlphaFn::Series(m) = &b.alpha else { return None };
    let Family::Geometric { r } = m.sequence().family() else { return None };
    if !(m.offset > 0.0) {
        return None;
    }
    let lr = r.ln();
    let c0 = m.offset + 2.0 * (2.0 + (2.0 * PI / lr).sqrt()).ln();
    // α(2^m·c) ≤ Q(m) = c0 + (m ln2 + |u|)²/ln r with u = ln(scale·c) − ½ln r.
    let quad = |c: f64| {
        let u = ((m.scale * c).ln() - 0.5 * lr).abs();
        [c0 + u * u / lr, 2.0 * LN_2 * u / lr, LN_2 * LN_2 / lr]
    };
    let q1 = quad(2.0 * E);
    // ln((1+2^j)/(λα)) ≤ (j+1) ln2 − ln(λ·offset), as α ≥ offset.
    let l = [(LN_2 - (b.lambda * m.offset).ln()).max(0.0), LN_2];
    let mut poly = poly_mul(&q1, &l).into_iter().map(|x| 6.0 * x).collect::<Vec<_>>();
    // 8·Σ_{i≥1} Q(i+j)/4^i with Σ 4^{-i} = 1/3, Σ i4^{-i} = 4/9, Σ i²4^{-i} = 20/27.
    let [a0, a1, a2] = quad(E);
    let s = [a2 * 20.0 / 27.0 + a1 * 4.0 / 9.0 + a0 / 3.0, a2 * 8.0 / 9.0 + a1 / 3.0, a2 / 3.0];
    for (i, x) in s.iter().enumerate() {
        poly[i] += 8.0 * x;
    }
    let terms = poly
        .iter()
        .enumerate()
        .filter(|(_, c)| **c > 0.0)
        .map(|(p, &c)| Term::expo(c, p as f64, 0.0, LN_2))
        .collect();
    Some(Envelope::new(terms, 1))
}

/// a_j = β(2^j) for j = 1..=j_max, with the nqa tail from
/// [`beta_dyadic_envelope`] when one applies.
pub fn beta_profile(b: &BetaMajorant, j_max: u64) -> Result<DyadicProfile> {
    let mut values = Vec::with_capacity(j_max as usize);
    for j in 1..=j_max {
        values.push(b.eval(2f64.powi(j as i32))?.value);
    }
    let increasing = values.windows(2).all(|w| w[1] >= w[0]);
    let p = DyadicProfile::new(1, values, "β", increasing)?;
    let nqa = beta_dyadic_envelope(b).and_then(|e| e.tail(j_max)).map(|x| x * (1.0 + 1e-12));
    Ok(p.with_tails(ProfileTails { nqa, ..ProfileTails::default() }))
}

/// 2·f[t_{i−1}, t_i, t_{i+1}], the divided-difference estimate of f''.
pub fn second_divided_differences(grid: &[f64], values: &[f64]) -> Vec<f64> {
    (1..grid.len().saturating_sub(1))
        .map(|i| {
            let d1 = (values[i] - values[i - 1]) / (grid[i] - grid[i - 1]);
            let d2 = (values[i + 1] - values[i]) / (grid[i + 1] - grid[i]);
            2.0 * (d2 - d1) / (grid[i + 1] - grid[i - 1])
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalculusReport {
    /// γ/α ≥ e at every sample.
    pub ratio_ok: bool,
    /// α·ln(γ/α) at the grid points.
    pub composite: Vec<f64>,
    pub nondecreasing: bool,
    pub max_second_dd: f64,
}

/// Sampled check of the composite t ↦ α(t)·ln(γ(t)/α(t)); α and γ must
/// share one grid.
pub fn calculus_check(alpha: &SampledFunction, gamma: &SampledFunction) -> Result<CalculusReport> {
    if alpha.grid != gamma.grid {
        return Err(Error::Domain("α and γ must be sampled on the same grid".into()));
    }
    if alpha.values.iter().any(|&a| !(a > 0.0)) {
        return Err(Error::Domain("α must be positive".into()));
    }
    let ratio_ok = alpha.values.iter().zip(&gamma.values).all(|(a, g)| g / a >= E * (1.0 - 1e-15));
    let composite: Vec<f64> = alpha.values.iter().zip(&gamma.values).map(|(a, g)| a * (g / a).ln()).collect();
    let nondecreasing = composite.windows(2).all(|w| w[1] >= w[0] - rounding_slack(w[0]));
    let max_second_dd = second_divided_differences(&alpha.grid, &composite)
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(CalculusReport { ratio_ok, composite, nondecreasing, max_second_dd })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainPoint {
    pub t: f64,
    pub log_omega: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Allowance used for ln|ω| ≤ α.
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub lambda: f64,
    pub points: Vec<ChainPoint>,
    /// Points with ln|ω| > α + slack.
    pub omega_alpha_violations: usize,
    /// Points with α ≥ β.
    pub alpha_beta_violations: usize,
    /// max second divided difference of α over max |α|.
    pub max_rel_second_dd: f64,
}

impl ChainReport {
    pub fn passed(&self, dd_tol: f64) -> bool {
        self.omega_alpha_violations == 0 && self.alpha_beta_violations == 0 && self.max_rel_second_dd <= dd_tol
    }
}

/// ln|ω| ≤ α < β on `grid`, with λ from [`lambda_search`] on the same range.
pub fn majorant_chain(s: &ZeroSequence, grid: &[f64], tail_terms: usize) -> Result<(BetaMajorant, ChainReport)> {
    let alpha = ConcaveSeriesMajorant::standard(s)?;
    let shifted: Vec<f64> = grid.iter().map(|t| 2.0 * E * t).collect();
    let trace = SampledFunction::new(shifted.clone(), shifted.iter().map(|&x| alpha.value(x)).collect::<Result<_>>()?, "α(2e·)")?;
    let lambda = lambda_search(&trace, (grid[0], *grid.last().unwrap()))?;
    let beta = BetaMajorant::new(AlphaFn::Series(alpha.clone()), lambda, tail_terms)?;
    let mut points = Vec::with_capacity(grid.len());
    let (mut oa, mut ab) = (0, 0);
    let mut alphas = Vec::with_capacity(grid.len());
    for &t in grid {
        let (lw, _) = log_omega_far(s, t)?;
        let (a, ea) = alpha.eval(t)?;
        let bv = beta.eval(t)?;
        let slack = ea + rounding_slack(a);
        if lw > a + slack {
            oa += 1;
        }
        if !(a < bv.value) {
            ab += 1;
        }
        alphas.push(a);
        points.push(ChainPoint { t, log_omega: lw, alpha: a, beta: bv.value, slack });
    }
    let scale = alphas.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let max_dd = second_divided_differences(grid, &alphas).into_iter().fold(f64::NEG_INFINITY, f64::max);
    let report = ChainReport {
        lambda,
        points,
        omega_alpha_violations: oa,
        alpha_beta_violations: ab,
        max_rel_second_dd: max_dd / scale,
    };
    Ok((beta, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{nqa_series, Verdict};
    use crate::numeric::log_grid;

    #[test]
    fn single_zero_closed_form() {
        let s = ZeroSequence::explicit(vec![1.0]).unwrap();
        let m = ConcaveSeriesMajorant::standard(&s).unwrap();
        let (v, e) = m.eval(1.0).unwrap();
        assert!((v - (3f64.ln() + 2.0 * 5f64.ln())).abs() < 1e-14);
        assert_eq!(e, 0.0);
        assert!((m.value(1e-12).unwrap() - 3f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn geometric_series_matches_direct_sum() {
        // Oracle: plain f64 summation of (4t)^k / 2^{k(k+1)/2}.
        let s = ZeroSequence::geometric(2.0).unwrap();
        let m = ConcaveSeriesMajorant::standard(&s).unwrap();
        for t in [0.3, 2.0, 50.0, 1e4] {
            let mut sum = 1.0;
            let mut term = 1.0;
            for k in 1..200 {
                term *= 4.0 * t / 2f64.powi(k);
                sum += term;
            }
            let want = 3f64.ln() + 2.0 * sum.ln();
            let (v, e) = m.eval(t).unwrap();
            assert!((v - want).abs() < 1e-12 * want, "t={t}: {v} vs {want}");
            assert!(e < 1e-20);
        }
    }

    #[test]
    fn raise_k_eval_reported() {
        let s = ZeroSequence::power(2.0).unwrap();
        let m = ConcaveSeriesMajorant::new(&s, 4.0, 3f64.ln(), 10).unwrap();
        assert!(matches!(m.eval(1e4), Err(Error::RaiseKEval { k_eval: 10, .. })));
    }

    #[test]
    fn alpha_dominates_log_omega_and_is_concave() {
        let s = ZeroSequence::geometric(2.0).unwrap();
        let grid = log_grid(1.0, 1e6, 200);
        let (_, r) = majorant_chain(&s, &grid, 24).unwrap();
        assert_eq!(r.omega_alpha_violations, 0);
        assert_eq!(r.alpha_beta_violations, 0);
        assert!(r.max_rel_second_dd <= 1e-9, "{}", r.max_rel_second_dd);
    }

    #[test]
    fn beta_domain_error_names_lambda() {
        let s = ZeroSequence::geometric(2.0).unwrap();
        let a = AlphaFn::Series(ConcaveSeriesMajorant::standard(&s).unwrap());
        let b = BetaMajorant::new(a, 10.0, 8).unwrap();
        match b.eval(1.0) {
            Err(Error::LambdaDomain { lambda_max, .. }) => {
                let ok = BetaMajorant { lambda: 0.5 * lambda_max, ..b.clone() };
                assert!(ok.eval(1.0).unwrap().ratio > 8.0 * E);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lambda_for_constant_alpha() {
        let grid = log_grid(1.0, 1e3, 50);
        let f = SampledFunction::from_fn(grid, |_| 1.0, "1").unwrap();
        let t_lo = 1.0 / (2.0 * E);
        let l = lambda_search(&f, (t_lo, 1e3 / (2.0 * E))).unwrap();
        assert!((l - (1.0 + t_lo) / (16.0 * E)).abs() < 1e-15);
        assert!(lambda_search(&f, (1.0, 1e3)).is_err());
    }

    #[test]
    fn lambda_for_linear_alpha() {
        let grid = log_grid(1.0, 1e4, 80);
        let f = SampledFunction::from_fn(grid, |t| t, "t").unwrap();
        let hi = 1e4 / (2.0 * E);
        let l = lambda_search(&f, (1.0 / (2.0 * E), hi)).unwrap();
        let want = (1.0 + hi) / (2.0 * E * hi) / (16.0 * E);
        assert!((l - want).abs() < 1e-12 * want);
    }

    #[test]
    fn beta_exceeds_alpha_with_certified_nqa() {
        let s = ZeroSequence::geometric(2.0).unwrap();
        let (b, _) = majorant_chain(&s, &log_grid(1.0, 1e6, 40), 24).unwrap();
        let env = beta_dyadic_envelope(&b).unwrap();
        let p = beta_profile(&b, 40).unwrap();
        for j in 1..=40u64 {
            let v = b.eval(2f64.powi(j as i32)).unwrap();
            assert!(v.upper().unwrap() / 2f64.powi(j as i32) <= env.eval(j as f64), "j={j}");
        }
        assert!(p.increasing);
        assert_eq!(nqa_series(&p, p.tails.nqa).verdict, Verdict::ConvergentCertified);
    }

    #[test]
    fn beta_is_monotone_term_by_term() {
        // The first summand α(2et)·ln((1+t)/(λα(2et))) is increasing once the ratio exceeds e.
        let s = ZeroSequence::geometric(3.0).unwrap();
        let a = ConcaveSeriesMajorant::standard(&s).unwrap();
        let grid = log_grid(0.5, 1e5, 120);
        let lam = 1e-3;
        let al = SampledFunction::from_fn(grid.clone(), |t| a.value(2.0 * E * t).unwrap(), "α").unwrap();
        let ga = SampledFunction::from_fn(grid.clone(), |t| (1.0 + t) / lam, "γ").unwrap();
        let r = calculus_check(&al, &ga).unwrap();
        assert!(r.ratio_ok && r.nondecreasing);
        let b = BetaMajorant::new(AlphaFn::Series(a), lam, 20).unwrap();
        let v: Vec<f64> = grid.iter().map(|&t| b.eval(t).unwrap().value).collect();
        assert!(v.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn calculus_concave_pair() {
        let grid = log_grid(1.0, 1e4, 100);
        let al = SampledFunction::from_fn(grid.clone(), |t| t.sqrt(), "√t").unwrap();
        let ga = SampledFunction::from_fn(grid.clone(), |t| 3.0 * t.sqrt() + 10.0 * (1.0 + t).ln(), "γ").unwrap();
        let r = calculus_check(&al, &ga).unwrap();
        assert!(r.ratio_ok && r.nondecreasing);
        assert!(r.max_second_dd <= 1e-9, "{}", r.max_second_dd);
    }

    #[test]
    fn divided_differences_of_quadratic() {
        let g = [1.0, 2.0, 4.0, 7.0];
        let v: Vec<f64> = g.iter().map(|x| 3.0 * x * x).collect();
        for d in second_divided_differences(&g, &v) {
            assert!((d - 6.0).abs() < 1e-12);
        }
    }
}
