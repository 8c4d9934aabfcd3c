//! Exact evaluation of the sums S_k and C_k behind the concavity of
//! α(t) = ln Σ_k (c_1⋯c_k) t^k/k! for nonincreasing c.
//!
//! With P_m = c_1⋯c_m,
//!   S_k = Σ_{p=1}^{k} (1/(p!q!) − 1/((p−1)!(q+1)!)) · P_{p+1} P_{q+1},  q = k − p,
//!   C_k = Σ_{p+q=k} (1/(p!q!)) · (P_{p+1} P_{q+1} − P_{p+2} P_q),
//! and C_k = (c_1 − c_{k+2}) P_{k+1}/k! + S_k.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::split_seed;

/// Nonincreasing sequence of positive rationals c_1 ≥ c_2 ≥ … ≥ c_m > 0.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalSeq {
    c: Vec<BigRational>,
}

impl RationalSeq {
    /// Errors name the 1-based index of the first offending entry.
    pub fn new(c: Vec<BigRational>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::InvalidSequence { index: 1, msg: "empty sequence".into() });
        }
        for (i, x) in c.iter().enumerate() {
            if !x.is_positive() {
                return Err(Error::InvalidSequence { index: i + 1, msg: format!("c = {x} is not positive") });
            }
            if i > 0 && x > &c[i - 1] {
                return Err(Error::InvalidSequence {
                    index: i + 1,
                    msg: format!("c = {x} exceeds its predecessor {}", c[i - 1]),
                });
            }
        }
        Ok(RationalSeq { c })
    }

    pub fn from_ints(c: &[i64]) -> Result<Self> {
        Self::new(c.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
    }

    /// From (numerator, denominator) pairs.
    pub fn from_pairs(c: &[(i64, i64)]) -> Result<Self> {
        if let Some(i) = c.iter().position(|p| p.1 == 0) {
            return Err(Error::InvalidSequence { index: i + 1, msg: "zero denominator".into() });
        }
        Self::new(c.iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect())
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    /// c_j, 1-based.
    pub fn get(&self, j: usize) -> &BigRational {
        &self.c[j - 1]
    }

    /// P_0, …, P_m.
    fn prefix_products(&self, m: usize) -> Vec<BigRational> {
        let mut p = Vec::with_capacity(m + 1);
        p.push(BigRational::one());
        for j in 0..m {
            let next = &p[j] * &self.c[j];
            p.push(next);
        }
        p
    }

    fn need(&self, m: usize, k: usize) -> Result<()> {
        if self.c.len() < m {
            return Err(Error::Domain(format!("k = {k} needs {m} entries, sequence has {}", self.c.len())));
        }
        Ok(())
    }
}

/// 1/0!, …, 1/n!.
fn inv_factorials(n: usize) -> Vec<BigRational> {
    let mut f = Vec::with_capacity(n + 1);
    f.push(BigRational::one());
    for i in 1..=n {
        let next = &f[i - 1] / BigRational::from_integer(BigInt::from(i));
        f.push(next);
    }
    f
}

fn s_k_with(p: &[BigRational], inv: &[BigRational], k: usize) -> BigRational {
    let mut s = BigRational::zero();
    for pp in 1..=k {
        let q = k - pp;
        let w = &inv[pp] * &inv[q] - &inv[pp - 1] * &inv[q + 1];
        if !w.is_zero() {
            s += w * &p[pp + 1] * &p[q + 1];
        }
    }
    s
}

fn c_k_with(p: &[BigRational], inv: &[BigRational], k: usize) -> BigRational {
    let mut s = BigRational::zero();
    for pp in 0..=k {
        let q = k - pp;
        s += &inv[pp] * &inv[q] * (&p[pp + 1] * &p[q + 1] - &p[pp + 2] * &p[q]);
    }
    s
}

/// S_k for k ≥ 1; needs c_1..c_{k+2}.
pub fn s_k_value(c: &RationalSeq, k: usize) -> Result<BigRational> {
    if k == 0 {
        return Err(Error::Domain("S_k is defined for k ≥ 1".into()));
    }
    c.need(k + 2, k)?;
    Ok(s_k_with(&c.prefix_products(k + 2), &inv_factorials(k + 1), k))
}

/// C_k from its defining double sum, k ≥ 0; needs c_1..c_{k+2}.
pub fn c_k_value(c: &RationalSeq, k: usize) -> Result<BigRational> {
    c.need(k + 2, k)?;
    Ok(c_k_with(&c.prefix_products(k + 2), &inv_factorials(k + 1), k))
}

/// (c_1 − c_{k+2})·P_{k+1}/k! + S_k, k ≥ 1.
pub fn c_k_recombined(c: &RationalSeq, k: usize) -> Result<BigRational> {
    let s = s_k_value(c, k)?;
    let p = c.prefix_products(k + 1);
    let inv = inv_factorials(k);
    Ok((c.get(1) - c.get(k + 2)) * &p[k + 1] * &inv[k] + s)
}

/// Exact rational as decimal numerator and denominator strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RationalString {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for RationalString {
    fn from(x: &BigRational) -> Self {
        RationalString { num: x.numer().to_string(), den: x.denom().to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepViolation {
    pub trial: usize,
    pub k: usize,
    pub kind: String,
    pub value: RationalString,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub trials: usize,
    pub k_max: usize,
    pub seed: u64,
    /// Number of (trial, k) pairs evaluated.
    pub evaluated: usize,
    pub violations: Vec<SweepViolation>,
    /// Trials with c_1 > c_2, all of which must have C_0 > 0.
    pub strict_c0_trials: usize,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

const FACTORS: [(i64, i64); 4] = [(1, 1), (9, 10), (3, 4), (1, 2)];

/// c_1 = n/d with n, d ≤ 20, then c_{j+1} = c_j·f with f drawn from
/// {1, 9/10, 3/4, 1/2}, so ties occur often.
pub fn random_sequence(len: usize, seed: u64) -> RationalSeq {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = BigRational::new(rng.gen_range(1..=20i64).into(), rng.gen_range(1..=20i64).into());
    let mut c = vec![first];
    while c.len() < len {
        let (n, d) = FACTORS[rng.gen_range(0..FACTORS.len())];
        let next = c.last().unwrap() * BigRational::new(n.into(), d.into());
        c.push(next);
    }
    RationalSeq::new(c).expect("products of factors ≤ 1 are nonincreasing")
}

fn check_trial(trial: usize, c: &RationalSeq, k_max: usize) -> (Vec<SweepViolation>, bool) {
    let p = c.prefix_products(k_max + 2);
    let inv = inv_factorials(k_max + 1);
    let mut out = Vec::new();
    let mut push = |k: usize, kind: &str, v: &BigRational| {
        out.push(SweepViolation { trial, k, kind: kind.into(), value: v.into() })
    };
    let c0 = c_k_with(&p, &inv, 0);
    let strict = c.get(1) > c.get(2);
    if c0.is_negative() || (strict && !c0.is_positive()) {
        push(0, "C_0", &c0);
    }
    for k in 1..=k_max {
        let s = s_k_with(&p, &inv, k);
        if s.is_negative() {
            push(k, "S_k < 0", &s);
        }
        let direct = c_k_with(&p, &inv, k);
        let recombined = (c.get(1) - c.get(k + 2)) * &p[k + 1] * &inv[k] + &s;
        if direct != recombined {
            push(k, "C_k recombination mismatch", &(&direct - &recombined));
        }
        if direct.is_negative() {
            push(k, "C_k < 0", &direct);
        }
    }
    (out, strict)
}

/// Checks S_k ≥ 0, C_k ≥ 0 and the C_k recombination for every k ≤ k_max on
/// `trials` random sequences; trial i uses seed split_seed(rng_seed, i).
pub fn s_k_nonneg_sweep(trials: usize, k_max: usize, rng_seed: u64) -> Result<SweepReport> {
    if k_max == 0 {
        return Err(Error::Domain("k_max must be at least 1".into()));
    }
    let results: Vec<(Vec<SweepViolation>, bool)> = (0..trials)
        .into_par_iter()
        .map(|i| check_trial(i, &random_sequence(k_max + 2, split_seed(rng_seed, i as u64)), k_max))
        .collect();
    let strict_c0_trials = results.iter().filter(|r| r.1).count();
    let violations = results.into_iter().flat_map(|r| r.0).collect();
    Ok(SweepReport { trials, k_max, seed: rng_seed, evaluated: trials * k_max, violations, strict_c0_trials })
}
