//! ln|ω(t)| and N(t) at arguments far beyond what zero enumeration reaches.
//!
//! For power and powlog families the zeros with index j ≥ A are summed
//! through the continuous extension x ↦ t(x). On [A, ∞) the summand is a
//! decreasing convex function of x (a decreasing convex function of the
//! concave ln t(x)), so the trapezoid rule overestimates the integral by at
//! most |h'(A)|/8 in total. That gives two-sided bounds with no asymptotic
//! expansion involved; only the quadrature error is estimated rather than
//! proved.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::numeric::{gauss_legendre, gl_integrate, CompSum};
use crate::weight_core::evaluator::{big_n, EvalOptions, WeightEvaluator};
use crate::weight_core::sequence::{Family, ZeroSequence};

/// First index handled by the integral.
const SPLIT: u64 = 1 << 16;
const PANEL: f64 = 0.5;
const GL_POINTS: usize = 20;

/// The quadrature runs in u = ln x and needs e^u finite.
const MAX_LN_X: f64 = 700.0;

/// Relative padding on top of the panel-halving quadrature estimate.
const QUAD_REL: f64 = 1e-13;

/// ∫_{e^{u0}}^{e^{u1}} h(x) dx computed in u = ln x, with an error estimate
/// from a second pass on halved panels.
fn log_integral<F: Fn(f64) -> f64>(h: F, u0: f64, u1: f64) -> (f64, f64) {
    if u1 <= u0 {
        return (0.0, 0.0);
    }
    let rule = gauss_legendre(GL_POINTS);
    let pieces = ((u1 - u0) / PANEL).ceil().max(1.0) as usize;
    let g = |u: f64| h(u.exp()) * u.exp();
    let coarse = gl_integrate(g, u0, u1, pieces, &rule);
    let fine = gl_integrate(g, u0, u1, 2 * pieces, &rule);
    (fine, (fine - coarse).abs() + QUAD_REL * fine.abs())
}

/// (v, ε) with v ≤ ln|ω(t)| ≤ v + ε, for any t reachable in f64.
///
/// Geometric and explicit sequences go through [`WeightEvaluator`]; power
/// and powlog sequences use the split sum described in the module docs.
pub fn log_omega_far(s: &ZeroSequence, t: f64) -> Result<(f64, f64)> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(format!("ln|ω(t)| needs finite t ≥ 0, got {t}")));
    }
    match s.family() {
        Family::Geometric { .. } | Family::Explicit(_) => {
            let opts = EvalOptions { t_max: t.max(1.0), max_terms: 1 << 22, ..EvalOptions::default() };
            WeightEvaluator::new(s, opts).eval(t)
        }
        Family::Power { .. } | Family::PowLog { .. } => {
            if t == 0.0 {
                return Ok((0.0, 0.0));
            }
            let head = WeightEvaluator::with_terms(s, SPLIT - 1, 64);
            let (v_head, _) = head.eval(t)?;
            let ln_t = t.ln();
            let h = |x: f64| {
                let d = ln_t - s.ln_t_cont(x).unwrap();
                if d > 0.0 {
                    d + 0.5 * (-2.0 * d).exp().ln_1p()
                } else {
                    0.5 * (2.0 * d).exp().ln_1p()
                }
            };
            // Beyond X the remaining integral is at most ½t²∫_X^∞ dx/t(x)².
            let (ln_x_end, rest) = match s.family() {
                Family::Power { a } => {
                    let ln_x = ((2.0 * ln_t + 35.0 * std::f64::consts::LN_10) / (2.0 * a - 1.0)).max((SPLIT as f64).ln());
                    (ln_x, 0.5 * (2.0 * ln_t + (1.0 - 2.0 * a) * ln_x).exp() / (2.0 * a - 1.0))
                }
                _ => {
                    // t(x) ≥ x for x ≥ 16.
                    let ln_x = (2.0 * ln_t + 35.0 * std::f64::consts::LN_10).max((SPLIT as f64).ln());
                    (ln_x, 0.5 * (2.0 * ln_t - ln_x).exp())
                }
            };
            if ln_x_end > MAX_LN_X {
                return Err(Error::Domain(format!("t = {t:e} is beyond the range of the far evaluation")));
            }
            let a = SPLIT as f64;
            let (integral, qerr) = log_integral(h, a.ln(), ln_x_end);
            let h_a = h(a);
            let slope = s.dln_t_cont(a).unwrap();
            let mut acc = CompSum::new();
            acc.add(v_head);
            acc.add(integral);
            acc.add(0.5 * h_a);
            acc.add(-qerr);
            Ok((acc.value(), slope / 8.0 + 2.0 * qerr + rest))
        }
    }
}

/// (v, ε) with v ≤ N(t) ≤ v + ε, where N(t) = Σ_{t_i<t} ln(t/t_i).
pub fn big_n_far(s: &ZeroSequence, t: f64) -> Result<(f64, f64)> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Domain(format!("N(t) needs finite t > 0, got {t}")));
    }
    let m = s.count_le(t)?;
    let far = matches!(s.family(), Family::Power { .. } | Family::PowLog { .. });
    if !far || m < SPLIT + 2 {
        return Ok((big_n(s, t)?.value, 0.0));
    }
    let ln_t = t.ln();
    let mut head = CompSum::new();
    for i in 1..SPLIT {
        head.add(ln_t - s.t(i).ln());
    }
    // Σ_{i=A}^{m} g(i) with g(x) = ln t - ln t(x) decreasing and convex:
    // trapezoid = ∫_A^m g + ½(g(A)+g(m)), overshoot ≤ (g'(m)-g'(A))/8.
    let g = |x: f64| ln_t - s.ln_t_cont(x).unwrap();
    let a = SPLIT as f64;
    let (integral, qerr) = log_integral(g, a.ln(), (m as f64).ln());
    let ends = 0.5 * (g(a) + g(m as f64).max(0.0));
    let slope = s.dln_t_cont(a).unwrap();
    let mut acc = CompSum::new();
    acc.add(head.value());
    acc.add(integral);
    acc.add(ends);
    acc.add(-qerr);
    // m is converted to f64 above; below 2^53 that is exact.
    Ok((acc.value().max(0.0), slope / 8.0 + 2.0 * qerr))
}

/// G(y) = ln(1+y²)/(2y) + arccot y, so that
/// ∫_T^∞ ½ln(1 + t²/a²)/t² dt = G(T/a)/a.
fn tail_kernel(y: f64) -> f64 {
    if y == 0.0 {
        return FRAC_PI_2;
    }
    let first = if y > 1e150 { y.ln() / y } else { (y * y).ln_1p() / (2.0 * y) };
    first + (1.0 / y).atan()
}

/// ln(x/t(x)) as a function of u = ln x, for x ≥ 16, written without
/// cancellation so that it stays accurate for huge u.
fn ln_x_over_t(s: &ZeroSequence, u: f64) -> f64 {
    match s.family() {
        Family::Power { a } => (1.0 - a) * u,
        Family::PowLog { a, b } => {
            let mut v = -a * u.ln();
            if *b != 0.0 {
                v -= b * u.ln().ln();
            }
            v
        }
        _ => unreachable!("continuous extension only for power and powlog"),
    }
}

/// Upper estimate of ∫_T^∞ ln|ω(t)|/t² dt = Σ_k G(T/t_k)/t_k.
///
/// x ↦ G(T/x)/x is decreasing (y·G(y) has derivative arccot y > 0), so past
/// the enumerated prefix the sum is at most the integral over the
/// continuous extension. That integral runs in u = ln x until t ≥ e^{46}·T,
/// then in v = ln ln x, and beyond the last panel uses G ≤ π/2 with a closed
/// form for ∫ dx/t(x). As in [`log_omega_far`], quadrature error is an
/// estimate.
pub fn log_omega_integral_tail(s: &ZeroSequence, t: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("integral tail needs finite T > 0, got {t}")));
    }
    let phi = |x: f64| tail_kernel(t / x) / x;
    let mut acc = CompSum::new();
    match s.family() {
        Family::Explicit(v) => {
            for &x in v {
                acc.add(phi(x));
            }
        }
        Family::Geometric { r } => {
            let mut k = 1u64;
            loop {
                let x = s.t(k);
                acc.add(phi(x));
                if x > 1e20 * t {
                    acc.add(FRAC_PI_2 / (x * (r - 1.0)));
                    break;
                }
                k += 1;
            }
        }
        Family::Power { a } | Family::PowLog { a, .. } => {
            let a = *a;
            for k in 1..=SPLIT {
                acc.add(phi(s.t(k)));
            }
            let lnt = t.ln();
            let rule = gauss_legendre(GL_POINTS);
            // Stage 1 in u: integrand G(T/t)·x/t.
            let u0 = (SPLIT as f64).ln();
            let mut u1 = u0;
            while u1 - ln_x_over_t(s, u1) < lnt + 46.0 {
                u1 += 1.0;
            }
            let g1 = |u: f64| {
                let d = ln_x_over_t(s, u);
                tail_kernel((lnt - u + d).exp()) * d.exp()
            };
            let pieces = ((u1 - u0) / 0.25).ceil().max(1.0) as usize;
            acc.add(gl_integrate(g1, u0, u1, pieces, &rule));
            // Stage 2 in v = ln u, where dx = x·u·dv.
            let g2 = |v: f64| {
                let u = v.exp();
                let d = ln_x_over_t(s, u);
                tail_kernel((lnt - u + d).exp()) * (d + v).exp()
            };
            let v1 = u1.ln();
            let v_end = match s.family() {
                Family::PowLog { .. } if a == 1.0 => 1e8,
                _ => {
                    let mut v = v1 + 1.0;
                    while g2(v) > 1e-40 {
                        v += 1.0;
                    }
                    v
                }
            };
            let mut lo = v1;
            while lo < v_end {
                let hi = (lo * 1.25).max(lo + 0.25).min(v_end);
                acc.add(gl_integrate(g2, lo, hi, 1, &rule));
                lo = hi;
            }
            let rest = match s.family() {
                Family::PowLog { b, .. } if a == 1.0 => v_end.powf(1.0 - b) / (b - 1.0),
                Family::PowLog { .. } => ((1.0 - a) * v_end).exp() / (a - 1.0),
                _ => ((1.0 - a) * v_end.exp()).exp() / (a - 1.0),
            };
            acc.add(FRAC_PI_2 * rest);
        }
    }
    Ok(acc.value() * (1.0 + 1e-9))
}

/// Upper estimate of Σ_{j>J} ln|ω(2^j)|/2^j. Since ln|ω| increases,
/// ln|ω(2^j)|/2^{j+1} ≤ ∫_{2^j}^{2^{j+1}} ln|ω|/t², so the tail is at most
/// 2∫_{2^{J+1}}^∞ ln|ω|/t².
pub fn dyadic_log_omega_tail(s: &ZeroSequence, j: u64) -> Result<f64> {
    Ok(2.0 * log_omega_integral_tail(s, 2f64.powi(j as i32 + 1))?)
}
