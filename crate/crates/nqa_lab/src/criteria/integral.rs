//! Quadrature of the integral forms of the dyadic series, and a comparison
//! with the matching dyadic sums. For increasing α,
//! ∫_{2^j}^{2^{j+1}} α/t² lies between α(2^j)/2^{j+1} and α(2^{j+1})/2^{j+1},
//! so the two should stay within a factor of a few of each other.

use serde::Serialize;

use crate::criteria::{SeriesDiagnostic, ThresholdPolicy};
use crate::error::{Error, Result};
use crate::weight_core::SampledFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IntegralKind {
    /// ∫ α/t².
    Nqa,
    /// ∫ (α/t²)·ln(t/α), from the first sample with α < t/e.
    Msnq,
    /// ∫ (α/t²)·ln ln t, on t ≥ e.
    LogLog,
}

impl IntegralKind {
    fn integrand(&self, t: f64, a: f64) -> f64 {
        let base = a / (t * t);
        match self {
            IntegralKind::Nqa => base,
            IntegralKind::Msnq => base * (t / a).ln().max(0.0),
            IntegralKind::LogLog => base * t.ln().ln().max(0.0),
        }
    }

    fn dyadic_term(&self, j: u64, a: f64) -> f64 {
        let t = 2f64.powi(j as i32);
        match self {
            IntegralKind::Nqa => a / t,
            IntegralKind::Msnq => {
                if a == 0.0 {
                    0.0
                } else {
                    a / t * (t / a).ln().max(0.0)
                }
            }
            IntegralKind::LogLog => a / t * (j as f64).ln(),
        }
    }

    fn label(&self) -> &'static str {
        match self {
            IntegralKind::Nqa => "integral-nqa",
            IntegralKind::Msnq => "integral-msnq",
            IntegralKind::LogLog => "integral-loglog",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralCheck {
    /// Cumulative trapezoid values at the grid points from the onset on.
    pub diagnostic: SeriesDiagnostic,
    pub integral: f64,
    /// First grid point of integration (the msnq onset, or the grid start).
    pub onset_t: f64,
    /// Dyadic index range [j_lo, j_hi] inside the integration range.
    pub j_range: Option<(u64, u64)>,
    /// ∫ over [2^j_lo, 2^j_hi].
    pub matched_integral: f64,
    /// Σ_{j_lo ≤ j < j_hi} of the matching dyadic terms.
    pub dyadic_sum: f64,
    pub ratio: f64,
    pub within_factor4: bool,
}

/// Trapezoid in u = ln t of g(t)·t between two grid indices.
fn trapezoid(grid: &[f64], vals: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(grid.len());
    let mut acc = crate::numeric::CompSum::new();
    out.push(0.0);
    for i in 1..grid.len() {
        let du = grid[i].ln() - grid[i - 1].ln();
        acc.add(0.5 * du * (vals[i] * grid[i] + vals[i - 1] * grid[i - 1]));
        out.push(acc.value());
    }
    out
}

/// Trapezoid quadrature of the `kind` integral over the sampled range and
/// comparison with the dyadic sum on the largest matched range. `tail`, when
/// given, certifies the integral beyond the grid.
pub fn integral_cross_check(f: &SampledFunction, kind: IntegralKind, tail: Option<f64>) -> Result<IntegralCheck> {
    integral_cross_check_with(f, kind, tail, ThresholdPolicy::default())
}

pub fn integral_cross_check_with(
    f: &SampledFunction,
    kind: IntegralKind,
    tail: Option<f64>,
    policy: ThresholdPolicy,
) -> Result<IntegralCheck> {
    if let Some(i) = f.values.iter().position(|&v| v <= 0.0) {
        return Err(Error::Domain(format!("integrand sample at t = {} is not positive", f.grid[i])));
    }
    let lo_needed = if kind == IntegralKind::LogLog { std::f64::consts::E } else { 1.0 };
    if f.grid[0] < lo_needed * (1.0 - 1e-12) || f.grid.len() < 2 {
        return Err(Error::Domain(format!("grid must start at t ≥ {lo_needed} and have two points")));
    }
    let start = match kind {
        IntegralKind::Msnq => f
            .grid
            .iter()
            .zip(&f.values)
            .position(|(t, a)| *a < t / std::f64::consts::E)
            .ok_or_else(|| Error::Domain("α(t) < t/e never holds on the grid".into()))?,
        _ => 0,
    };
    let grid = &f.grid[start..];
    let vals: Vec<f64> = grid.iter().zip(&f.values[start..]).map(|(&t, &a)| kind.integrand(t, a)).collect();
    let cum = trapezoid(grid, &vals);
    let integral = *cum.last().unwrap();

    // Matched dyadic range inside [grid start, grid end].
    let j_lo = grid[0].log2().ceil().max(0.0) as u64;
    let j_hi = grid.last().unwrap().log2().floor() as u64;
    let (matched_integral, dyadic_sum, j_range) = if j_hi > j_lo {
        let lo = 2f64.powi(j_lo as i32);
        let hi = 2f64.powi(j_hi as i32);
        let mut g: Vec<f64> = vec![lo];
        g.extend(grid.iter().copied().filter(|&t| t > lo && t < hi));
        g.push(hi);
        let v: Vec<f64> = g.iter().map(|&t| kind.integrand(t, f.interp(t))).collect();
        let m = *trapezoid(&g, &v).last().unwrap();
        let d: f64 = (j_lo..j_hi).map(|j| kind.dyadic_term(j, f.interp(2f64.powi(j as i32)))).sum();
        (m, d, Some((j_lo, j_hi)))
    } else {
        (f64::NAN, f64::NAN, None)
    };
    let ratio = matched_integral / dyadic_sum;
    let within_factor4 = ratio.is_finite() && (0.25..=4.0).contains(&ratio);
    let increments: Vec<f64> = cum.windows(2).map(|w| w[1] - w[0]).collect();
    let diagnostic = SeriesDiagnostic::from_terms(kind.label(), 1, &increments, tail, policy, Some(1));
    Ok(IntegralCheck {
        diagnostic,
        integral,
        onset_t: grid[0],
        j_range,
        matched_integral,
        dyadic_sum,
        ratio,
        within_factor4,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::log_grid;
    use crate::weight_core::{log_omega_far, ZeroSequence};

    #[test]
    fn constant_function_closed_form() {
        let t_max = 1e4;
        let f = SampledFunction::from_fn(log_grid(1.0, t_max, 4000), |_| 3.0, "const").unwrap();
        let r = integral_cross_check(&f, IntegralKind::Nqa, Some(3.0 / t_max)).unwrap();
        let exact = 3.0 * (1.0 - 1.0 / t_max);
        assert!((r.integral - exact).abs() < 1e-5, "{} vs {exact}", r.integral);
        assert!(r.within_factor4);
    }

    #[test]
    fn log_omega_geometric_within_factor_four() {
        let s = ZeroSequence::geometric(2.0).unwrap();
        let f = SampledFunction::from_fn(log_grid(1.0, 2f64.powi(20), 800), |t| log_omega_far(&s, t).unwrap().0, "lnω").unwrap();
        for kind in [IntegralKind::Nqa, IntegralKind::Msnq] {
            let r = integral_cross_check(&f, kind, None).unwrap();
            assert!(r.within_factor4, "{kind:?}: ratio {}", r.ratio);
        }
    }

    #[test]
    fn beta_square_log_is_certified_with_its_tail() {
        // ∫_T^∞ dt/(t ln²t) = 1/ln T.
        let e2 = std::f64::consts::E.powi(2);
        let t_max = 1e12;
        let f = SampledFunction::from_fn(log_grid(e2, t_max, 2000), |t| t / t.ln().powi(2), "t/ln²t").unwrap();
        let r = integral_cross_check(&f, IntegralKind::Nqa, Some(1.0 / t_max.ln())).unwrap();
        assert_eq!(r.diagnostic.verdict, crate::criteria::Verdict::ConvergentCertified);
        let exact = 1.0 / 2.0 - 1.0 / t_max.ln();
        assert!((r.integral - exact).abs() < 1e-5);
        assert!(r.within_factor4, "{}", r.ratio);
    }

    #[test]
    fn nonpositive_samples_rejected() {
        let f = SampledFunction::new(vec![1.0, 2.0], vec![1.0, 0.0], "z").unwrap();
        assert!(integral_cross_check(&f, IntegralKind::Nqa, None).is_err());
    }
}
