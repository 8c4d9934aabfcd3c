//! Sampling experiments on f: domination by |ω₀|² and |ω|², the Schwarz
//! decay near a zero block, the real-axis supremum near t, and the
//! minimum-modulus scan against c·ln|ρ| + c′.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{BetaKind, CounterexampleModel};
use crate::error::{Error, Result};
use crate::numeric::{golden_max, split_seed};
use crate::weight_core::{log_omega_far, rounding_slack, ZeroSequence};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanOptions {
    /// Points in the dense scan, endpoints included.
    pub density: usize,
    /// Golden-section steps around the best scan point.
    pub refine_iters: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { density: 1001, refine_iters: 60 }
    }
}

#[derive(Debug, Clone)]
pub struct MinModConfig {
    pub beta_family: Vec<BetaKind>,
    pub c: f64,
    /// c′ ≥ 0; zero is allowed so that the scan grid can include it.
    pub c_prime: f64,
    pub scan: ScanOptions,
}

impl MinModConfig {
    pub fn new(beta_family: Vec<BetaKind>, c: f64, c_prime: f64, scan: ScanOptions) -> Result<Self> {
        if !(c > 0.0 && c.is_finite() && c_prime >= 0.0 && c_prime.is_finite()) {
            return Err(Error::Domain(format!("need c > 0 and c' >= 0, got c={c}, c'={c_prime}")));
        }
        if scan.density < 3 {
            return Err(Error::Domain(format!("scan density must be at least 3, got {}", scan.density)));
        }
        Ok(MinModConfig { beta_family, c, c_prime, scan })
    }

    /// Shipped β family for `source`, c = c′ = 1, default scan.
    pub fn shipped(source: &ZeroSequence) -> Self {
        MinModConfig { beta_family: BetaKind::shipped(source), c: 1.0, c_prime: 1.0, scan: ScanOptions::default() }
    }
}

/// Slack for a comparison between quantities of the given magnitudes.
fn slack(a: f64, b: f64) -> f64 {
    rounding_slack(a.abs() + b.abs())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominationReport {
    pub samples: usize,
    pub radius: f64,
    pub seed: u64,
    /// Samples that landed on a zero of f.
    pub zero_hits: usize,
    pub violations_omega0: usize,
    pub violations_omega: usize,
    /// min over samples of 2ln|ω₀(|z|)| − ln|f(z)|.
    pub worst_margin_omega0: f64,
    /// min over samples of 2ln|ω(|z|)| − ln|f(z)|.
    pub worst_margin_omega: f64,
}

impl DominationReport {
    pub fn passed(&self) -> bool {
        self.violations_omega0 == 0 && self.violations_omega == 0
    }
}

/// Random z with |z| ≤ radius: a quarter uniform in the unit disk, the rest
/// log-uniform in modulus on [1, radius] with uniform argument.
fn sample_point(rng: &mut ChaCha8Rng, radius: f64) -> (f64, f64) {
    let theta = rng.gen::<f64>() * 2.0 * PI;
    let r = if rng.gen::<f64>() < 0.25 || radius <= 1.0 {
        radius.min(1.0) * rng.gen::<f64>().sqrt()
    } else {
        (rng.gen::<f64>() * radius.ln()).exp()
    };
    (r * theta.cos(), r * theta.sin())
}

/// Checks ln|f(z)| ≤ 2ln|ω₀(|z|)| and ln|f(z)| ≤ 2ln|ω(|z|)| at random z in
/// the disk of the given radius; ω is the model's source sequence.
pub fn domination_check(m: &CounterexampleModel, radius: f64, samples: usize, seed: u64) -> Result<DominationReport> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Domain(format!("radius must be positive, got {radius}")));
    }
    let seq = &m.mult.sequence;
    let rows = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(split_seed(seed, i as u64));
            let (x, y) = sample_point(&mut rng, radius);
            let (lf, scale) = m.log_abs_f_scaled(x, y)?;
            let r = x.hypot(y);
            let w0 = 2.0 * m.log_omega0(r);
            let w = if r == 0.0 { 0.0 } else {
                let (v, e) = log_omega_far(seq, r)?;
                2.0 * (v + e)
            };
            Ok((lf, scale, w0, w))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rep = DominationReport {
        samples,
        radius,
        seed,
        zero_hits: 0,
        violations_omega0: 0,
        violations_omega: 0,
        worst_margin_omega0: f64::INFINITY,
        worst_margin_omega: f64::INFINITY,
    };
    for (lf, scale, w0, w) in rows {
        if lf == f64::NEG_INFINITY {
            rep.zero_hits += 1;
            continue;
        }
        let (m0, m1) = (w0 - lf, w - lf);
        rep.worst_margin_omega0 = rep.worst_margin_omega0.min(m0);
        rep.worst_margin_omega = rep.worst_margin_omega.min(m1);
        if m0 < -slack(scale, w0) {
            rep.violations_omega0 += 1;
        }
        if m1 < -slack(scale, w) {
            rep.violations_omega += 1;
        }
    }
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchwarzReport {
    pub j: u64,
    pub delta: f64,
    pub samples: usize,
    pub n_j: u64,
    /// 2ln|ω₀(2^{j+1})| + n_j·ln δ.
    pub bound: f64,
    /// Largest ln|f| seen on the disk |z − 2^j| ≤ 2^j·δ.
    pub max_lhs: f64,
    pub argmax: (f64, f64),
    pub violations: usize,
}

impl SchwarzReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Samples the circle |z − 2^j| = 2^j·δ and the disk inside it (half each),
/// refines the best circle point by golden section in the angle, and
/// compares every value with 2ln|ω₀(2^{j+1})| + n_j·ln δ.
pub fn schwarz_bound_check(m: &CounterexampleModel, j: u64, delta: f64, samples: usize, seed: u64) -> Result<SchwarzReport> {
    if !(1..=m.mult.j_max).contains(&j) {
        return Err(Error::Domain(format!("j must lie in 1..={}, got {j}", m.mult.j_max)));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Domain(format!("δ must lie in (0, 1], got {delta}")));
    }
    if samples < 2 {
        return Err(Error::Domain("need at least two samples".into()));
    }
    let c = 2f64.powi(j as i32);
    let rad = c * delta;
    let n_j = m.mult.n_j(j);
    let bound = 2.0 * m.log_omega0(2.0 * c) + n_j as f64 * delta.ln();
    let on_circle = |th: f64| (c + rad * th.cos(), rad * th.sin());

    let half = samples / 2;
    let pts = (0..samples)
        .into_par_iter()
        .map(|i| {
            let (x, y) = if i < half {
                on_circle(2.0 * PI * i as f64 / half as f64)
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(split_seed(seed, i as u64));
                let r = rad * rng.gen::<f64>().sqrt();
                let th = rng.gen::<f64>() * 2.0 * PI;
                (c + r * th.cos(), r * th.sin())
            };
            let (v, s) = m.log_abs_f_scaled(x, y)?;
            Ok(((x, y), v, s))
        })
        .collect::<Result<Vec<_>>>()?;

    // Refine on the circle around the best angular sample.
    let best_k = (0..half).max_by(|&a, &b| pts[a].1.total_cmp(&pts[b].1)).unwrap_or(0);
    let step = 2.0 * PI / half.max(1) as f64;
    let th0 = step * best_k as f64;
    let (th, _) = golden_max(|th| m.log_abs_f(on_circle(th).0, on_circle(th).1).unwrap_or(f64::NEG_INFINITY), th0 - step, th0 + step, 80);
    let z = on_circle(th);
    let (v, s) = m.log_abs_f_scaled(z.0, z.1)?;

    let mut rep = SchwarzReport {
        j,
        delta,
        samples,
        n_j,
        bound,
        max_lhs: f64::NEG_INFINITY,
        argmax: (c, 0.0),
        violations: 0,
    };
    for (z, v, s) in pts.into_iter().chain(std::iter::once((z, v, s))) {
        if v > rep.max_lhs {
            rep.max_lhs = v;
            rep.argmax = z;
        }
        if v > bound + slack(s, bound) {
            rep.violations += 1;
        }
    }
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinModSup {
    /// Lower bound on sup ln|f(s)| over real s with |s − t| ≤ radius.
    pub value: f64,
    pub at: f64,
}

/// Dense scan of [t − radius, t + radius] followed by golden-section
/// refinement around the best point. f is even, so the part of the interval
/// left of 0 mirrors into [0, t + radius] and only s ≥ 0 is scanned; t < 0
/// is reflected to −t.
pub fn minmod_sup(m: &CounterexampleModel, t: f64, radius: f64, opts: ScanOptions) -> Result<MinModSup> {
    if !(t.is_finite() && radius > 0.0 && radius.is_finite()) {
        return Err(Error::Domain(format!("need finite t and radius > 0, got t={t}, radius={radius}")));
    }
    if opts.density < 3 {
        return Err(Error::Domain(format!("scan density must be at least 3, got {}", opts.density)));
    }
    let t = t.abs();
    let (lo, hi) = ((t - radius).max(0.0), t + radius);
    let n = opts.density;
    let at = |i: usize| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
    let vals = (0..n)
        .into_par_iter()
        .map(|i| m.log_abs_f(at(i), 0.0))
        .collect::<Result<Vec<f64>>>()?;
    let best = (0..n).max_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(b.cmp(&a))).unwrap();
    let mut out = MinModSup { value: vals[best], at: at(best) };
    let (a, b) = (at(best.saturating_sub(1)), at((best + 1).min(n - 1)));
    let (s, v) = golden_max(|s| m.log_abs_f(s, 0.0).unwrap_or(f64::NEG_INFINITY), a, b, opts.refine_iters);
    if v > out.value {
        out = MinModSup { value: v, at: s };
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanPoint {
    pub t: f64,
    /// c·ln|ρ(t)| + c′.
    pub r: f64,
    pub sup: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub c: f64,
    pub c_prime: f64,
    pub points: Vec<ScanPoint>,
    pub failures: Vec<f64>,
}

/// For each t, checks sup_{|s−t|≤r(t)} ln|f(s)| ≥ −r(t) with
/// r(t) = c·ln|ρ(t)| + c′.
pub fn cioranescu_scan(m: &CounterexampleModel, rho: &ZeroSequence, cfg: &MinModConfig, grid: &[f64]) -> Result<ScanReport> {
    if let Some(t) = grid.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
        return Err(Error::Domain(format!("scan grid needs finite t > 0, got {t}")));
    }
    let mut points = Vec::with_capacity(grid.len());
    for &t in grid {
        let (v, e) = log_omega_far(rho, t)?;
        let r = cfg.c * (v + e) + cfg.c_prime;
        let (sup, pass) = if r > 0.0 {
            let s = minmod_sup(m, t, r, cfg.scan)?.value;
            (s, s >= -r)
        } else {
            let s = m.log_abs_f(t, 0.0)?;
            (s, s >= 0.0)
        };
        points.push(ScanPoint { t, r, sup, pass });
    }
    let failures = points.iter().filter(|p| !p.pass).map(|p| p.t).collect();
    Ok(ScanReport { c: cfg.c, c_prime: cfg.c_prime, points, failures })
}

#[cfg(test)]
mod tests {
    use super::super::MultiplicityProfile;
    use super::*;

    fn single() -> CounterexampleModel {
        CounterexampleModel::new(MultiplicityProfile::from_multiplicities(vec![1]).unwrap(), 128).unwrap()
    }

    fn powlog_model(j_max: u64) -> CounterexampleModel {
        CounterexampleModel::build(&ZeroSequence::powlog(1.0, 2.0).unwrap(), j_max, 128).unwrap()
    }

    #[test]
    fn single_factor_schwarz_closed_form() {
        let r = schwarz_bound_check(&single(), 1, 0.5, 200, 7).unwrap();
        assert!((r.bound - 2.5f64.ln()).abs() < 1e-10, "{}", r.bound);
        assert!((r.max_lhs - 1.25f64.ln()).abs() < 1e-10, "{}", r.max_lhs);
        assert!(r.passed());
    }

    #[test]
    fn schwarz_delta_one_is_plain_domination() {
        let m = powlog_model(20);
        let r = schwarz_bound_check(&m, 8, 1.0, 100, 1).unwrap();
        assert!((r.bound - 2.0 * m.log_omega0(512.0)).abs() < 1e-12 * r.bound.abs());
        assert!(r.passed());
    }

    #[test]
    fn powlog_schwarz_samples() {
        let m = powlog_model(40);
        for j in [5, 10, 15] {
            for d in [0.5, 0.1] {
                let r = schwarz_bound_check(&m, j, d, 200, 11).unwrap();
                assert!(r.passed(), "j={j} δ={d}: {} > {}", r.max_lhs, r.bound);
            }
        }
    }

    #[test]
    fn domination_on_powlog() {
        let m = powlog_model(40);
        let r = domination_check(&m, 2f64.powi(40), 1000, 3).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.worst_margin_omega0 >= -1e-6);
    }

    #[test]
    fn domination_is_deterministic() {
        let m = powlog_model(20);
        let a = domination_check(&m, 1e6, 200, 9).unwrap();
        let b = domination_check(&m, 1e6, 200, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn minmod_single_factor() {
        let r = minmod_sup(&single(), 2.0, 1.0, ScanOptions::default()).unwrap();
        assert!((r.value - 1.25f64.ln()).abs() < 1e-12);
        assert_eq!(r.at, 3.0);
    }

    #[test]
    fn minmod_shrinks_at_a_zero() {
        let m = single();
        let vals: Vec<f64> = [1e-1, 1e-3, 1e-6, 1e-9]
            .iter()
            .map(|&r| minmod_sup(&m, 2.0, r, ScanOptions::default()).unwrap().value)
            .collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
        assert!(vals[3] < -18.0);
    }

    #[test]
    fn minmod_is_even() {
        let m = powlog_model(20);
        for t in [5.0, 1000.0] {
            let a = minmod_sup(&m, t, 3.0, ScanOptions::default()).unwrap();
            let b = minmod_sup(&m, -t, 3.0, ScanOptions::default()).unwrap();
            assert_eq!(a, b);
        }
        assert!(minmod_sup(&m, 1.0, 0.0, ScanOptions::default()).is_err());
    }

    #[test]
    fn scan_passes_away_from_zeros() {
        // f = 1 − z²/4; at t = 10 with r ≥ 1 the endpoint value is already positive.
        let m = single();
        let rho = ZeroSequence::geometric(2.0).unwrap();
        let cfg = MinModConfig::new(vec![], 1.0, 10.0, ScanOptions::default()).unwrap();
        let r = cioranescu_scan(&m, &rho, &cfg, &[10.0, 20.0, 40.0]).unwrap();
        assert!(r.failures.is_empty());
    }

    #[test]
    fn scan_recovers_from_single_zero() {
        // t = 2 is a zero; r ≥ 1 reaches s = 3 where ln|f| = ln(5/4) > −r.
        let m = single();
        let rho = ZeroSequence::geometric(2.0).unwrap();
        let cfg = MinModConfig::new(vec![], 1.0, 1.0, ScanOptions::default()).unwrap();
        let r = cioranescu_scan(&m, &rho, &cfg, &[2.0]).unwrap();
        assert!(r.points[0].pass && r.points[0].r >= 1.0);
    }

    #[test]
    fn scan_fails_at_large_dyadic_points() {
        // With c = 1/2 the scan fails from 2^28 on; for larger c the
        // normalised supremum sup/r keeps falling but stays above −1 by 2^48.
        let s = ZeroSequence::powlog(1.0, 2.0).unwrap();
        let m = CounterexampleModel::build(&s, 50, 128).unwrap();
        let grid: Vec<f64> = (20..=48).step_by(4).map(|j| 2f64.powi(j)).collect();
        let opts = ScanOptions { density: 401, refine_iters: 40 };
        for cp in [0.0, 1.0, 10.0] {
            let cfg = MinModConfig::new(vec![], 0.5, cp, opts).unwrap();
            let r = cioranescu_scan(&m, &s, &cfg, &grid).unwrap();
            assert!(r.points[0].pass);
            assert_eq!(r.failures, grid[2..].to_vec(), "c'={cp}");
        }
        let cfg = MinModConfig::new(vec![], 4.0, 0.0, opts).unwrap();
        let r = cioranescu_scan(&m, &s, &cfg, &grid).unwrap();
        let ratio: Vec<f64> = r.points.iter().map(|p| p.sup / p.r).collect();
        assert!(ratio.windows(2).all(|w| w[1] < w[0]), "{ratio:?}");
    }
}
