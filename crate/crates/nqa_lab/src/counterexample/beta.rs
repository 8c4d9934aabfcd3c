//! A finite family of increasing β with Σ β(2^j)/2^j < ∞, each carrying an
//! upper bound for its dyadic tail Σ_{j>J} β(2^j)/2^j.

use std::f64::consts::{E, LN_2};

use crate::error::{Error, Result};
use crate::weight_core::{dyadic_log_omega_tail, log_omega_far, ZeroSequence};

#[derive(Debug, Clone)]
pub enum BetaKind {
    /// t/ln²t for t ≥ e², e²/4 below.
    SquareLog,
    /// t/(ln t·(lnln t)²) for t ≥ e³, constant below.
    LogLogSquare,
    /// c·ln|ω_ρ(t)| + c′.
    LogWeight { rho: ZeroSequence, c: f64, c_prime: f64 },
    /// ln 12 + 2·ln|ω(16t)|. Since 1 + Σ(8t)^k/(t_1⋯t_k) ≤ |ω(8t)|, this
    /// dominates the standard concave majorant α at 2t, and unlike the
    /// series it stays cheap at 2^60.
    AlphaDoubled { source: ZeroSequence },
}

/// Index from which the closed-form tails apply (2^j ≥ e³).
const CLOSED_FROM: u64 = 5;

impl BetaKind {
    /// The shipped family for a source sequence.
    pub fn shipped(source: &ZeroSequence) -> Vec<BetaKind> {
        vec![
            BetaKind::SquareLog,
            BetaKind::LogLogSquare,
            BetaKind::LogWeight { rho: source.clone(), c: 1.0, c_prime: 1.0 },
            BetaKind::AlphaDoubled { source: source.clone() },
        ]
    }

    pub fn label(&self) -> String {
        match self {
            BetaKind::SquareLog => "t/ln^2 t".into(),
            BetaKind::LogLogSquare => "t/(ln t (lnln t)^2)".into(),
            BetaKind::LogWeight { rho, c, c_prime } => format!("{c}*ln|w({})|+{c_prime}", rho.render()),
            BetaKind::AlphaDoubled { source } => format!("ln12+2ln|w({})(16t)|", source.render()),
        }
    }

    /// β(t) for t > 0. Weight-based members use the upper end of the
    /// ln|ω| bracket.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!("β needs finite t > 0, got {t}")));
        }
        Ok(match self {
            BetaKind::SquareLog => {
                if t < E * E {
                    E * E / 4.0
                } else {
                    t / t.ln().powi(2)
                }
            }
            BetaKind::LogLogSquare => {
                let t = t.max(E.powi(3));
                let l = t.ln();
                t / (l * l.ln().powi(2))
            }
            BetaKind::LogWeight { rho, c, c_prime } => {
                let (v, e) = log_omega_far(rho, t)?;
                c * (v + e) + c_prime
            }
            BetaKind::AlphaDoubled { source } => {
                let (v, e) = log_omega_far(source, 16.0 * t)?;
                12f64.ln() + 2.0 * (v + e)
            }
        })
    }

    /// Upper bound on Σ_{j>J} β(2^j)/2^j.
    pub fn dyadic_tail(&self, j: u64) -> Result<f64> {
        let pad = 1.0 + 1e-12;
        match self {
            BetaKind::SquareLog | BetaKind::LogLogSquare => {
                // Explicit terms up to CLOSED_FROM, then an integral comparison
                // for the decreasing terms 1/(j ln 2)² or 1/(j ln2·ln²(j ln2)).
                let from = j.max(CLOSED_FROM);
                let mut head = 0.0;
                for i in j + 1..=from {
                    head += self.eval(2f64.powi(i as i32))? * 2f64.powi(-(i as i32));
                }
                let x = from as f64 * LN_2;
                let tail = match self {
                    BetaKind::SquareLog => 1.0 / (LN_2 * x),
                    _ => 1.0 / (LN_2 * x.ln()),
                };
                Ok((head + tail) * pad)
            }
            BetaKind::LogWeight { rho, c, c_prime } => {
                Ok((c_prime * 2f64.powi(-(j as i32)) + c * dyadic_log_omega_tail(rho, j)?) * pad)
            }
            BetaKind::AlphaDoubled { source } => {
                // Σ_{j>J} 2ln|ω(2^{j+4})|/2^j = 32·Σ_{i>J+4} ln|ω(2^i)|/2^i.
                Ok((12f64.ln() * 2f64.powi(-(j as i32)) + 32.0 * dyadic_log_omega_tail(source, j + 4)?) * pad)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::majorants::ConcaveSeriesMajorant;

    fn partial(b: &BetaKind, from: u64, to: u64) -> f64 {
        (from..=to).map(|j| b.eval(2f64.powi(j as i32)).unwrap() * 2f64.powi(-(j as i32))).sum()
    }

    #[test]
    fn closed_form_tails_bound_long_sums() {
        for b in [BetaKind::SquareLog, BetaKind::LogLogSquare] {
            for j in [1, 4, 10, 30] {
                let seen = partial(&b, j + 1, 1000);
                assert!(seen <= b.dyadic_tail(j).unwrap(), "{}: j={j}", b.label());
            }
        }
    }

    #[test]
    fn weight_tails_bound_long_sums() {
        let s = ZeroSequence::powlog(3.0, 0.0).unwrap();
        for b in [
            BetaKind::LogWeight { rho: s.clone(), c: 2.0, c_prime: 1.0 },
            BetaKind::AlphaDoubled { source: s.clone() },
        ] {
            let seen = partial(&b, 21, 400);
            assert!(seen <= b.dyadic_tail(20).unwrap(), "{}", b.label());
        }
    }

    #[test]
    fn members_increase() {
        let s = ZeroSequence::powlog(1.0, 2.0).unwrap();
        for b in BetaKind::shipped(&s) {
            let v: Vec<f64> = (1..=60).map(|j| b.eval(2f64.powi(j)).unwrap()).collect();
            assert!(v.windows(2).all(|w| w[1] >= w[0]), "{}", b.label());
        }
    }

    #[test]
    fn doubled_bound_dominates_concave_majorant() {
        let s = ZeroSequence::geometric(2.0).unwrap();
        let alpha = ConcaveSeriesMajorant::standard(&s).unwrap();
        let b = BetaKind::AlphaDoubled { source: s };
        for t in [0.5, 3.0, 100.0, 1e5] {
            assert!(alpha.value(2.0 * t).unwrap() <= b.eval(t).unwrap());
        }
    }
}
