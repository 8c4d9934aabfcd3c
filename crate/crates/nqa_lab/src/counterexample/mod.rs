//! The dyadic counterexample f(z) = ∏_j (1 − (z/2^j)²)^{n_j}, where n_1 = n(2)
//! and n_j = n(2^j) − n(2^{j−1}) count the zeros t_k of ω per dyadic block,
//! together with its companion ω₀(z) = ∏_j (1 + iz/2^j)^{n_j}.
//!
//! Moving every t_k up to the right end of its block only shrinks each
//! factor, so |ω₀(t)| ≤ |ω(t)| on the reals; the experiments lean on this to
//! bound ω₀ tails through ω.

mod beta;
mod contradiction;
mod experiments;

pub use beta::BetaKind;
pub use contradiction::{contradiction_experiment, ContradictionReport, ContradictionRow};
pub use experiments::{
    cioranescu_scan, domination_check, minmod_sup, schwarz_bound_check, DominationReport, MinModConfig, MinModSup,
    ScanOptions, ScanPoint, ScanReport, SchwarzReport,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{big, big_to_f64, Big, CompSum};
use crate::weight_core::ZeroSequence;

/// Largest j_max accepted; 2^j must stay a finite f64 with room above it.
pub const MAX_J: u64 = 1000;

#[derive(Debug, Clone, Serialize)]
pub struct MultiplicityProfile {
    pub j_max: u64,
    /// n[j−1] = n_j.
    pub n: Vec<u64>,
    /// Grammar form of the source sequence.
    pub source: String,
    #[serde(skip)]
    pub sequence: ZeroSequence,
}

impl MultiplicityProfile {
    /// Profile with the given multiplicities; the source is the explicit
    /// list holding 2^j exactly n_j times (a single zero at 2^{j_max+1} when
    /// every n_j vanishes, since lists may not be empty).
    pub fn from_multiplicities(n: Vec<u64>) -> Result<Self> {
        if n.is_empty() || n.len() as u64 > MAX_J {
            return Err(Error::Domain(format!("need 1..={MAX_J} multiplicities, got {}", n.len())));
        }
        let total: u64 = n.iter().sum();
        if total > 1 << 20 {
            return Err(Error::Domain(format!("explicit source would hold {total} zeros; limit is 2^20")));
        }
        let zeros: Vec<f64> = n
            .iter()
            .enumerate()
            .flat_map(|(i, &k)| std::iter::repeat(2f64.powi(i as i32 + 1)).take(k as usize))
            .collect();
        let sequence = if zeros.is_empty() {
            ZeroSequence::explicit(vec![2f64.powi(n.len() as i32 + 1)])?
        } else {
            ZeroSequence::explicit(zeros)?
        };
        Ok(MultiplicityProfile { j_max: n.len() as u64, source: sequence.render(), n, sequence })
    }

    /// n_j, zero outside 1..=j_max.
    pub fn n_j(&self, j: u64) -> u64 {
        if j == 0 || j > self.j_max {
            0
        } else {
            self.n[j as usize - 1]
        }
    }

    /// Partial sums Σ_{i≤j} n_i for j = 1..=j_max.
    pub fn cumulative(&self) -> Vec<u64> {
        self.n
            .iter()
            .scan(0u64, |acc, &k| {
                *acc += k;
                Some(*acc)
            })
            .collect()
    }

    /// Σ n_j/2^j.
    pub fn weighted_sum(&self) -> f64 {
        let mut acc = CompSum::new();
        for (i, &k) in self.n.iter().enumerate() {
            acc.add(k as f64 * 2f64.powi(-(i as i32 + 1)));
        }
        acc.value()
    }
}

/// n_1 = n(2), n_j = n(2^j) − n(2^{j−1}) for j ≤ j_max.
pub fn dyadic_multiplicities(s: &ZeroSequence, j_max: u64) -> Result<MultiplicityProfile> {
    if !(1..=MAX_J).contains(&j_max) {
        return Err(Error::Domain(format!("j_max must lie in 1..={MAX_J}, got {j_max}")));
    }
    let counts = (1..=j_max).map(|j| s.count_le(2f64.powi(j as i32))).collect::<Result<Vec<u64>>>()?;
    let n = counts.iter().scan(0u64, |prev, &c| {
        let d = c - *prev;
        *prev = c;
        Some(d)
    });
    Ok(MultiplicityProfile { j_max, n: n.collect(), source: s.render(), sequence: s.clone() })
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleModel {
    pub mult: MultiplicityProfile,
    pub precision_bits: u32,
}

/// ln|1 − w| for w = u + iv. Symmetric in the sign of v, so the pair
/// ln|1 − w| + ln|1 + w| is exactly even in w.
fn ln_abs_one_minus(u: f64, v: f64) -> f64 {
    let r2 = u * u + v * v;
    if r2 < 0.25 {
        0.5 * (r2 - 2.0 * u).ln_1p()
    } else {
        (1.0 - u).hypot(v).ln()
    }
}

/// ½ln(1 + x²) without overflow.
fn half_ln_one_plus_sq(x: f64) -> f64 {
    let x = x.abs();
    if x <= 1.0 {
        0.5 * (x * x).ln_1p()
    } else {
        x.ln() + 0.5 * (1.0 / (x * x)).ln_1p()
    }
}

impl CounterexampleModel {
    pub fn new(mult: MultiplicityProfile, precision_bits: u32) -> Result<Self> {
        if !(64..=4096).contains(&precision_bits) {
            return Err(Error::Domain(format!("precision_bits must lie in 64..=4096, got {precision_bits}")));
        }
        Ok(CounterexampleModel { mult, precision_bits })
    }

    pub fn build(s: &ZeroSequence, j_max: u64, precision_bits: u32) -> Result<Self> {
        Self::new(dyadic_multiplicities(s, j_max)?, precision_bits)
    }

    fn blocks(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.mult
            .n
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, &k)| (2f64.powi(i as i32 + 1), k as f64))
    }

    /// (ln|f(z)|, Σ|terms|). The second value sizes the rounding slack.
    pub fn log_abs_f_scaled(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::Domain(format!("ln|f(z)| needs finite z, got {x}+{y}i")));
        }
        let mut acc = CompSum::new();
        let mut scale = 0.0;
        for (p, k) in self.blocks() {
            let (u, v) = (x / p, y / p);
            let pair = ln_abs_one_minus(u, v) + ln_abs_one_minus(-u, v);
            if pair == f64::NEG_INFINITY {
                return Ok((f64::NEG_INFINITY, scale));
            }
            let term = k * pair;
            acc.add(term);
            scale += term.abs();
        }
        Ok((acc.value(), scale))
    }

    /// ln|f(x + iy)|; -∞ exactly at the zeros ±2^j with n_j > 0.
    pub fn log_abs_f(&self, x: f64, y: f64) -> Result<f64> {
        Ok(self.log_abs_f_scaled(x, y)?.0)
    }

    /// ln|ω₀(t)| = Σ n_j·½ln(1 + (t/2^j)²); depends on |t| only.
    pub fn log_omega0(&self, t: f64) -> f64 {
        let mut acc = CompSum::new();
        for (p, k) in self.blocks() {
            acc.add(k * half_ln_one_plus_sq(t / p));
        }
        acc.value()
    }

    /// ln|ω₀(t)| accumulated in `precision_bits` binary digits.
    pub fn log_omega0_hp(&self, t: f64) -> Big {
        let bits = self.precision_bits as usize;
        let one = big(1.0, bits);
        let half = big(0.5, bits);
        let tt = big(t, bits);
        let mut acc = big(0.0, bits);
        for (i, &k) in self.mult.n.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let x = &tt / big(2f64.powi(i as i32 + 1), bits);
            let l = (&one + &x * &x).ln();
            acc += l * &half * Big::from(k);
        }
        acc
    }

    /// Relative gap between the f64 and high-precision ln|ω₀(t)|.
    pub fn log_omega0_discrepancy(&self, t: f64) -> f64 {
        let hp = big_to_f64(&self.log_omega0_hp(t));
        let lo = self.log_omega0(t);
        if hp == 0.0 {
            lo.abs()
        } else {
            ((lo - hp) / hp).abs()
        }
    }
}

/// ln|f(z)| for z = x + iy, with the -∞ sentinel at zeros of f.
pub fn eval_log_abs_f(m: &CounterexampleModel, x: f64, y: f64) -> Result<f64> {
    m.log_abs_f(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight_core::distribution_n;

    fn single() -> CounterexampleModel {
        CounterexampleModel::new(MultiplicityProfile::from_multiplicities(vec![1]).unwrap(), 128).unwrap()
    }

    #[test]
    fn single_factor_values() {
        let m = single();
        assert_eq!(m.log_abs_f(0.0, 0.0).unwrap(), 0.0);
        assert_eq!(m.log_abs_f(2.0, 0.0).unwrap(), f64::NEG_INFINITY);
        assert_eq!(m.log_abs_f(-2.0, 0.0).unwrap(), f64::NEG_INFINITY);
        assert!((m.log_abs_f(1.0, 0.0).unwrap() - 0.75f64.ln()).abs() < 1e-15);
        assert!((m.log_abs_f(1.0, 0.0).unwrap() + 0.28768).abs() < 1e-5);
        assert!(m.log_abs_f(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn geometric_has_unit_multiplicities() {
        let s = ZeroSequence::geometric(2.0).unwrap();
        let p = dyadic_multiplicities(&s, 50).unwrap();
        assert!(p.n.iter().all(|&k| k == 1));
    }

    #[test]
    fn far_zeros_give_empty_profile() {
        let s = ZeroSequence::explicit(vec![1e9, 2e9]).unwrap();
        let p = dyadic_multiplicities(&s, 20).unwrap();
        assert!(p.n.iter().all(|&k| k == 0));
        let m = CounterexampleModel::new(p, 128).unwrap();
        assert_eq!(m.log_abs_f(3.0, 4.0).unwrap(), 0.0);
    }

    #[test]
    fn partial_sums_reproduce_counts() {
        let s = ZeroSequence::powlog(1.0, 2.0).unwrap();
        let p = dyadic_multiplicities(&s, 40).unwrap();
        for (j, c) in p.cumulative().into_iter().enumerate() {
            assert_eq!(c, distribution_n(&s, 2f64.powi(j as i32 + 1)).unwrap());
        }
        assert!(p.weighted_sum() < 5.0);
    }

    #[test]
    fn loglog_sequence_increments_match_enumeration() {
        // Oracle: t_j = j·ln j·(lnln j)² enumerated directly, counted per block.
        let s = ZeroSequence::powlog(1.0, 2.0).unwrap();
        let p = dyadic_multiplicities(&s, 16).unwrap();
        let mut blocks = vec![0u64; 16];
        for j in 1..200_000u64 {
            let x = j.max(3) as f64;
            let t = x * x.ln() * x.ln().ln().powi(2);
            if t > 65536.0 {
                break;
            }
            let b = (t.log2().ceil().max(1.0) as usize).max(1);
            blocks[b - 1] += 1;
        }
        assert_eq!(p.n, blocks);
    }

    #[test]
    fn f_is_even() {
        let s = ZeroSequence::powlog(1.0, 2.0).unwrap();
        let m = CounterexampleModel::build(&s, 30, 128).unwrap();
        for (x, y) in [(3.7, 0.2), (1e5, -3e4), (2f64.powi(20), 1.0), (0.1, 0.0)] {
            assert_eq!(m.log_abs_f(x, y).unwrap(), m.log_abs_f(-x, -y).unwrap());
        }
    }

    #[test]
    fn imaginary_axis_equals_omega0_bound() {
        let s = ZeroSequence::powlog(1.0, 2.0).unwrap();
        let m = CounterexampleModel::build(&s, 30, 128).unwrap();
        for r in [0.5, 7.0, 1e3, 1e8] {
            let lhs = m.log_abs_f(0.0, r).unwrap();
            let rhs = 2.0 * m.log_omega0(r);
            assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs(), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn high_precision_agrees() {
        let s = ZeroSequence::powlog(1.0, 2.0).unwrap();
        let m = CounterexampleModel::build(&s, 60, 128).unwrap();
        for j in [1, 10, 30, 61] {
            assert!(m.log_omega0_discrepancy(2f64.powi(j)) < 1e-13);
        }
    }
}
