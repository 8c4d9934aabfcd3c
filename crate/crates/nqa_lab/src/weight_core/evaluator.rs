use crate::error::{Error, Result};
use crate::numeric::CompSum;
use crate::weight_core::sequence::ZeroSequence;

/// Options controlling the truncation index J of a [`WeightEvaluator`].
#[derive(Debug, Clone, Copy)]
pub struct EvalOptions {
    /// Largest argument at which the tolerance should be met.
    pub t_max: f64,
    /// Target for the certified tail bound ε(t_max).
    pub tol: f64,
    /// Hard cap on the number of enumerated zeros.
    pub max_terms: u64,
    pub precision_bits: u32,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { t_max: 1e6, tol: 1e-12, max_terms: 1 << 20, precision_bits: 64 }
    }
}

/// Truncated evaluator of ln|ω| with a certified one-sided tail bound.
///
/// Terms with t/t_j ≤ 2^-10 are summed through suffix power sums using
/// x - x²/2 ≤ ln(1+x) ≤ x - x²/2 + x³/3; the cubic remainder is added
/// to the reported error.
#[derive(Debug, Clone)]
pub struct WeightEvaluator {
    seq: ZeroSequence,
    zeros: Vec<f64>,
    tail1: Option<f64>,
    tail2: Option<f64>,
    t_next: f64,
    // suffix[m][i] = Σ_{j ≥ i} t_j^{-p_m} over enumerated zeros, p = 1,2,3,4,6
    suffix: [Vec<f64>; 5],
    precision_bits: u32,
}

const SUFFIX_POWERS: [i32; 5] = [1, 2, 3, 4, 6];
const SERIES_RATIO: f64 = 1024.0;

impl WeightEvaluator {
    pub fn new(seq: &ZeroSequence, opts: EvalOptions) -> Self {
        let cap = opts.max_terms.min(seq.j_cut()).max(1);
        let j = match seq.finite_len() {
            Some(m) => m.min(cap),
            None => {
                let mut j = 16u64.min(cap);
                loop {
                    let ok = seq
                        .tail_recip_sq(j)
                        .map(|t2| 0.5 * opts.t_max * opts.t_max * t2 <= opts.tol)
                        .unwrap_or(false);
                    if ok || j >= cap {
                        break j;
                    }
                    j = (j * 2).min(cap);
                }
            }
        };
        Self::with_terms(seq, j, opts.precision_bits)
    }

    /// Evaluator enumerating exactly the first `j` zeros (or all of a finite list).
    pub fn with_terms(seq: &ZeroSequence, j: u64, precision_bits: u32) -> Self {
        let zeros = seq.zeros(j.min(seq.j_cut()));
        let used = zeros.len() as u64;
        let suffix = SUFFIX_POWERS.map(|p| {
            let mut out = vec![0.0; zeros.len() + 1];
            let mut acc = CompSum::new();
            for i in (0..zeros.len()).rev() {
                acc.add(zeros[i].powi(-p));
                out[i] = acc.value();
            }
            out
        });
        WeightEvaluator {
            seq: seq.clone(),
            tail1: seq.tail_recip(used),
            tail2: seq.tail_recip_sq(used),
            t_next: if used < seq.j_cut() { seq.t(used + 1) } else { f64::INFINITY },
            zeros,
            suffix,
            precision_bits,
        }
    }

    pub fn sequence(&self) -> &ZeroSequence {
        &self.seq
    }

    pub fn terms(&self) -> u64 {
        self.zeros.len() as u64
    }

    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    /// Certified bound on Σ_{j>J} 1/t_j (None if no certificate).
    pub fn tail1(&self) -> Option<f64> {
        self.tail1
    }

    pub fn tail2(&self) -> Option<f64> {
        self.tail2
    }

    /// ε(t): bound on the omitted part ½Σ_{j>J} ln(1+t²/t_j²).
    pub fn tail_bound_abs(&self, t: f64) -> f64 {
        match self.tail2 {
            Some(t2) if t2 == 0.0 => 0.0,
            Some(t2) => 0.5 * t * t * t2,
            None => f64::INFINITY,
        }
    }

    fn split(&self, t: f64) -> usize {
        self.zeros.partition_point(|&z| z < SERIES_RATIO * t)
    }

    /// (v, ε) with v ≤ ln|ω(t)| ≤ v + ε.
    pub fn eval(&self, t: f64) -> Result<(f64, f64)> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::Domain(format!("ln|ω(t)| needs finite t ≥ 0, got {t}")));
        }
        if t == 0.0 {
            return Ok((0.0, 0.0));
        }
        let i1 = self.split(t);
        let mut acc = CompSum::new();
        for &z in &self.zeros[..i1] {
            let x = t / z;
            acc.add(if x <= 1.0 { 0.5 * (x * x).ln_1p() } else { x.ln() + 0.5 * (x * x).recip().ln_1p() });
        }
        let mut series_err = 0.0;
        if i1 < self.zeros.len() {
            let t2 = t * t;
            let (s2, s4, s6) = (self.suffix[1][i1], self.suffix[3][i1], self.suffix[4][i1]);
            acc.add(0.5 * (t2 * s2 - 0.5 * t2 * t2 * s4));
            series_err = 0.5 * t2 * t2 * t2 * s6 / 3.0;
        }
        Ok((acc.value(), series_err + self.tail_bound_abs(t)))
    }

    pub fn value(&self, t: f64) -> f64 {
        self.eval(t).expect("finite nonnegative argument").0
    }

    /// (v, ε) for ln ω(-ir) = Σ ln(1 + r/t_j), r ≥ 0; ε covers the tail r·Σ_{j>J} 1/t_j.
    pub fn eval_imag(&self, r: f64) -> Result<(f64, f64)> {
        if !r.is_finite() || r < 0.0 {
            return Err(Error::Domain(format!("ln ω(-ir) needs finite r ≥ 0, got {r}")));
        }
        if r == 0.0 {
            return Ok((0.0, 0.0));
        }
        let i1 = self.split(r);
        let mut acc = CompSum::new();
        for &z in &self.zeros[..i1] {
            acc.add((r / z).ln_1p());
        }
        let (s1, s2, s3) = (self.suffix[0][i1], self.suffix[1][i1], self.suffix[2][i1]);
        acc.add(r * s1 - 0.5 * r * r * s2);
        let series_err = r * r * r * s3 / 3.0;
        let tail = self.tail1.map(|t1| r * t1).unwrap_or(f64::INFINITY);
        Ok((acc.value(), series_err + tail))
    }

    /// Σ_{j≤J} ln(1 + r/t_j) summed term by term, without the series shortcut.
    pub fn eval_imag_direct(&self, r: f64) -> f64 {
        let mut acc = CompSum::new();
        for &z in &self.zeros {
            acc.add((r / z).ln_1p());
        }
        acc.value()
    }

    /// ln|ω(z)| for z = x + iy. Returns -∞ exactly when a factor vanishes
    /// (x = 0, y = t_j). The error bounds the omitted factors in absolute value.
    pub fn eval_complex(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::Domain(format!("ln|ω(z)| needs finite z, got {x}+{y}i")));
        }
        let modz = x.hypot(y);
        let mut acc = CompSum::new();
        for &t in &self.zeros {
            if x == 0.0 && y == t {
                return Ok((f64::NEG_INFINITY, 0.0));
            }
            let term = if modz < 0.25 * t {
                // |1 + iz/t|² = 1 + (|z|² - 2yt)/t²
                let d = (x / t) * (x / t) + (y / t) * ((y / t) - 2.0);
                0.5 * d.ln_1p()
            } else {
                let (u, v) = (1.0 - y / t, x / t);
                if u == 0.0 {
                    v.abs().ln()
                } else {
                    0.5 * (u * u + v * v).ln()
                }
            };
            acc.add(term);
        }
        let err = match self.tail1 {
            Some(t1) if modz < self.t_next => modz * t1 / (1.0 - modz / self.t_next),
            Some(_) => f64::INFINITY,
            None => f64::INFINITY,
        };
        Ok((acc.value(), err))
    }
}

/// n(t) for the sequence (see [`ZeroSequence::count_le`]).
pub fn distribution_n(s: &ZeroSequence, t: f64) -> Result<u64> {
    s.count_le(t)
}

/// Result of [`big_n`]: N(t) and the smallest maximising index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BigN {
    pub value: f64,
    pub argmax: u64,
}

/// Largest number of zeros [`big_n`] will enumerate.
pub const BIG_N_ENUM_LIMIT: u64 = 1 << 26;

/// N(t) = max(0, max_k (k ln t - Σ_{i≤k} ln t_i)). The inner sequence is
/// concave in k and peaks at k = n(t), so N(t) = Σ_{t_i<t} ln(t/t_i).
pub fn big_n(s: &ZeroSequence, t: f64) -> Result<BigN> {
    let n = s.count_le(t)?;
    if n > BIG_N_ENUM_LIMIT {
        return Err(Error::CutoffInsufficient { t, t_cut: s.t(BIG_N_ENUM_LIMIT) });
    }
    let mut acc = CompSum::new();
    let mut argmax = 0;
    for i in 1..=n {
        let ti = s.t(i);
        if ti < t {
            acc.add((t / ti).ln());
            argmax = i;
        }
    }
    Ok(BigN { value: acc.value().max(0.0), argmax })
}
