use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::numeric::{big, Big};
use crate::tails::{Envelope, Term};

/// Zero data of ω(z) = ∏(1 + iz/t_j).
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// t_j = r^j, r > 1.
    Geometric { r: f64 },
    /// t_j = j (ln j)^a (ln ln j)^b for j ≥ 3, t_1 = t_2 = t_3.
    PowLog { a: f64, b: f64 },
    /// t_j = j^a, a > 1.
    Power { a: f64 },
    /// Finite nondecreasing list; every later zero is +∞.
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSequence {
    family: Family,
    j_cut: u64,
    omega0_flag: bool,
}

/// Largest index for which closed-form zeros are evaluated exactly in f64 indices.
pub const MAX_J_CUT: u64 = 1 << 53;

const HP_BITS: usize = 192;

impl ZeroSequence {
    pub fn geometric(r: f64) -> Result<Self> {
        if !(r.is_finite() && r > 1.0) {
            return Err(Error::Domain(format!("geometric ratio must be > 1, got {r}")));
        }
        Ok(Self::with_family(Family::Geometric { r }))
    }

    /// Requires a ≥ 1, b ≥ 0 and Σ 1/t_j < ∞ (a > 1, or a = 1 and b > 1).
    pub fn powlog(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a >= 1.0 && b >= 0.0) {
            return Err(Error::Domain(format!("powlog needs a >= 1, b >= 0, got a={a}, b={b}")));
        }
        if !(a > 1.0 || b > 1.0) {
            return Err(Error::Domain(format!(
                "powlog with a={a}, b={b} has a divergent reciprocal sum"
            )));
        }
        Ok(Self::with_family(Family::PowLog { a, b }))
    }

    pub fn power(a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 1.0) {
            return Err(Error::Domain(format!("power exponent must be > 1, got {a}")));
        }
        Ok(Self::with_family(Family::Power { a }))
    }

    /// Errors carry the 1-based index of the offending entry.
    pub fn explicit(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSequence { index: 1, msg: "empty list".into() });
        }
        for (i, &v) in values.iter().enumerate() {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidSequence {
                    index: i + 1,
                    msg: format!("entry {v} is not a positive finite real"),
                });
            }
            if i > 0 && v < values[i - 1] {
                return Err(Error::InvalidSequence {
                    index: i + 1,
                    msg: format!("entry {v} is smaller than its predecessor {}", values[i - 1]),
                });
            }
        }
        Ok(Self::with_family(Family::Explicit(values)))
    }

    fn with_family(family: Family) -> Self {
        let j_cut = match &family {
            Family::Explicit(v) => v.len() as u64,
            _ => MAX_J_CUT,
        };
        let mut s = ZeroSequence { family, j_cut, omega0_flag: false };
        s.omega0_flag = s.family_omega0() && s.prefix_omega0(4096);
        s
    }

    pub fn with_j_cut(mut self, j_cut: u64) -> Self {
        self.j_cut = j_cut.clamp(1, MAX_J_CUT);
        self
    }

    /// Claim membership in Ω₀; rejected if t_j/j fails to be nondecreasing on
    /// the first `check` indices.
    pub fn with_omega0_flag(mut self, flag: bool, check: u64) -> Result<Self> {
        if flag && !self.prefix_omega0(check) {
            let idx = (1..check)
                .find(|&j| !self.ratio_step_ok(j))
                .unwrap_or(1);
            return Err(Error::InvalidSequence {
                index: idx as usize + 1,
                msg: "t_j/j is not nondecreasing".into(),
            });
        }
        self.omega0_flag = flag;
        Ok(self)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn j_cut(&self) -> u64 {
        self.j_cut
    }

    pub fn omega0_flag(&self) -> bool {
        self.omega0_flag
    }

    /// Number of finite zeros, None for infinite families.
    pub fn finite_len(&self) -> Option<u64> {
        match &self.family {
            Family::Explicit(v) => Some(v.len() as u64),
            _ => None,
        }
    }

    /// t_j for j ≥ 1 (+∞ past the end of an explicit list).
    pub fn t(&self, j: u64) -> f64 {
        assert!(j >= 1, "zero indices start at 1");
        match &self.family {
            Family::Geometric { r } => r.powf(j as f64),
            Family::Power { a } => (j as f64).powf(*a),
            Family::PowLog { a, b } => {
                let x = j.max(3) as f64;
                let l = x.ln();
                let mut v = x * l.powf(*a);
                if *b != 0.0 {
                    v *= l.ln().powf(*b);
                }
                v
            }
            Family::Explicit(v) => v.get(j as usize - 1).copied().unwrap_or(f64::INFINITY),
        }
    }

    /// ln t(x) for the continuous extension of a power or powlog family,
    /// x ≥ 16 (where ln t is concave for both). None for other families.
    pub fn ln_t_cont(&self, x: f64) -> Option<f64> {
        match &self.family {
            Family::Power { a } => Some(a * x.ln()),
            Family::PowLog { a, b } => {
                let l = x.ln();
                let mut v = l + a * l.ln();
                if *b != 0.0 {
                    v += b * l.ln().ln();
                }
                Some(v)
            }
            _ => None,
        }
    }

    /// Upper bound on d/dx ln t(x) for x ≥ 16 (see [`Self::ln_t_cont`]).
    pub fn dln_t_cont(&self, x: f64) -> Option<f64> {
        match &self.family {
            Family::Power { a } => Some(a / x),
            Family::PowLog { a, b } => {
                let l = x.ln();
                Some((1.0 + a / l + b / (l * l.ln())) / x)
            }
            _ => None,
        }
    }

    /// t_1..t_n, stopping early at the end of an explicit list.
    pub fn zeros(&self, n: u64) -> Vec<f64> {
        let n = match self.finite_len() {
            Some(m) => n.min(m),
            None => n,
        };
        (1..=n).map(|j| self.t(j)).collect()
    }

    fn family_omega0(&self) -> bool {
        match &self.family {
            Family::Geometric { r } => *r >= 2.0,
            Family::Power { .. } => true,
            // The clamp t_1 = t_2 gives t_1/1 > t_2/2.
            Family::PowLog { .. } => false,
            Family::Explicit(_) => true,
        }
    }

    fn ratio_step_ok(&self, j: u64) -> bool {
        let (a, b) = (self.t(j), self.t(j + 1));
        if b.is_infinite() {
            return true;
        }
        a * (j + 1) as f64 <= b * j as f64
    }

    fn prefix_omega0(&self, check: u64) -> bool {
        let upto = match self.finite_len() {
            Some(m) => m.min(check),
            None => check.min(self.j_cut),
        };
        (1..upto).all(|j| self.ratio_step_ok(j))
    }

    /// t_j in high precision, used to settle comparisons that f64 cannot.
    fn t_hp(&self, j: u64) -> Big {
        let pow = |x: Big, e: f64| -> Big {
            if e.fract() == 0.0 && e.abs() <= 64.0 {
                x.powi((e as i64).into())
            } else {
                (x.ln() * big(e, HP_BITS)).exp()
            }
        };
        match &self.family {
            Family::Geometric { r } => big(*r, HP_BITS).powi((j as i64).into()),
            Family::Power { a } => pow(big(j as f64, HP_BITS), *a),
            Family::PowLog { a, b } => {
                let x = big(j.max(3) as f64, HP_BITS);
                let l = x.ln();
                let mut v = x * pow(l.clone(), *a);
                if *b != 0.0 {
                    v *= pow(l.ln(), *b);
                }
                v
            }
            Family::Explicit(v) => big(v[j as usize - 1], HP_BITS),
        }
    }

    /// Whether t_j ≤ t, resolving near-ties in high precision.
    pub fn t_le(&self, j: u64, t: f64) -> bool {
        let tj = self.t(j);
        if tj.is_infinite() {
            return false;
        }
        if matches!(self.family, Family::Explicit(_)) || (tj - t).abs() > 1e-12 * t {
            return tj <= t;
        }
        self.t_hp(j).partial_cmp(&big(t, HP_BITS)) != Some(Ordering::Greater)
    }

    /// n(t) = #{j ≤ j_cut : t_j ≤ t}. Errors when the cutoff itself is reached.
    pub fn count_le(&self, t: f64) -> Result<u64> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::Domain(format!("n(t) needs finite t > 0, got {t}")));
        }
        if let Family::Explicit(v) = &self.family {
            let n = v.partition_point(|&x| x <= t) as u64;
            let n_cut = n.min(self.j_cut);
            if self.j_cut < v.len() as u64 && v[self.j_cut as usize - 1] <= t {
                return Err(Error::CutoffInsufficient { t, t_cut: v[self.j_cut as usize - 1] });
            }
            return Ok(n_cut);
        }
        if self.t_le(self.j_cut, t) {
            return Err(Error::CutoffInsufficient { t, t_cut: self.t(self.j_cut) });
        }
        // Largest j with t_j ≤ t; monotone, so bisect on [0, j_cut).
        let (mut lo, mut hi) = (0u64, self.j_cut);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.t_le(mid, t) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    /// Envelope dominating 1/t_j^m for j ≥ its `valid_from` (None for explicit lists).
    pub fn recip_envelope(&self, m: i32) -> Option<Envelope> {
        let m = m as f64;
        match &self.family {
            Family::Geometric { r } => Some(Envelope::new(vec![Term::expo(1.0, 0.0, 0.0, m * r.ln())], 1)),
            Family::Power { a } => Some(Envelope::new(vec![Term::plog(1.0, -m * a, 0.0, 0.0)], 1)),
            Family::PowLog { a, b } => Some(Envelope::new(
                vec![Term::plog(1.0, -m, -m * a, -m * b)],
                3,
            )),
            Family::Explicit(_) => None,
        }
    }

    /// Certified bound on Σ_{j>J} 1/t_j^m.
    pub fn tail_recip_pow(&self, j_trunc: u64, m: i32) -> Option<f64> {
        match &self.family {
            Family::Explicit(v) => {
                let from = (j_trunc as usize).min(v.len());
                Some(crate::numeric::comp_sum(v[from..].iter().map(|x| x.powi(-m))))
            }
            Family::Geometric { r } => {
                // Σ_{j>J} r^{-mj} = r^{-mJ} / (r^m - 1), padded for rounding.
                let rm = r.powi(m);
                Some((-(m as f64) * j_trunc as f64 * r.ln()).exp() / (rm - 1.0) * (1.0 + 1e-13))
            }
            _ => {
                let env = self.recip_envelope(m)?;
                let t = |j: u64| self.t(j).powi(-m);
                certified_tail(&env, j_trunc, t).map(|x| x * (1.0 + 1e-13))
            }
        }
    }

    pub fn tail_recip(&self, j_trunc: u64) -> Option<f64> {
        self.tail_recip_pow(j_trunc, 1)
    }

    pub fn tail_recip_sq(&self, j_trunc: u64) -> Option<f64> {
        self.tail_recip_pow(j_trunc, 2)
    }

    /// Text form in the sequence grammar; round-trips through the parser.
    pub fn render(&self) -> String {
        match &self.family {
            Family::Geometric { r } => format!("geometric:r={r}"),
            Family::PowLog { a, b } => format!("powlog:a={a},b={b}"),
            Family::Power { a } => format!("power:a={a}"),
            Family::Explicit(v) => {
                let parts: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
                format!("explicit:[{}]", parts.join(","))
            }
        }
    }
}

/// Σ_{j>J} h(j): explicit terms up to the first index where the envelope
/// yields a certificate, then the envelope tail.
pub fn certified_tail<F: Fn(u64) -> f64>(env: &Envelope, j_trunc: u64, term: F) -> Option<f64> {
    if !env.summable() {
        return None;
    }
    let mut acc = crate::numeric::CompSum::new();
    let mut j0 = j_trunc;
    let mut step = 0u64;
    loop {
        if let Some(t) = env.tail(j0) {
            return Some(acc.value() + t);
        }
        if step > 1 << 22 {
            return None;
        }
        j0 += 1;
        step += 1;
        acc.add(term(j0));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_values_and_counts() {
        let s = ZeroSequence::geometric(2.0).unwrap();
        assert_eq!(s.t(3), 8.0);
        assert_eq!(s.count_le(5.0).unwrap(), 2);
        assert_eq!(s.count_le(1.0).unwrap(), 0);
        assert_eq!(s.count_le(8.0).unwrap(), 3);
        assert_eq!(s.count_le(2f64.powi(60)).unwrap(), 60);
        assert!(s.omega0_flag());
    }

    #[test]
    fn powlog_clamps_small_indices() {
        let s = ZeroSequence::powlog(1.0, 2.0).unwrap();
        assert_eq!(s.t(1), s.t(3));
        assert_eq!(s.t(2), s.t(3));
        assert!(!s.omega0_flag());
        assert!(s.t(4) > s.t(3));
    }

    #[test]
    fn powlog_count_matches_enumeration() {
        let s = ZeroSequence::powlog(1.0, 2.0).unwrap();
        let direct = (1..10_000u64).filter(|&j| s.t(j) <= 100.0).count() as u64;
        assert_eq!(s.count_le(100.0).unwrap(), direct);
    }

    #[test]
    fn explicit_validation_reports_index() {
        let e = ZeroSequence::explicit(vec![2.0, 1.0]).unwrap_err();
        assert!(matches!(e, Error::InvalidSequence { index: 2, .. }));
        let s = ZeroSequence::explicit(vec![1.0, 1.0, 2.0]).unwrap();
        assert!(!s.omega0_flag());
        assert_eq!(s.t(4), f64::INFINITY);
    }

    #[test]
    fn explicit_cutoff_error() {
        let s = ZeroSequence::explicit(vec![1.0, 2.0, 3.0]).unwrap().with_j_cut(2);
        assert!(matches!(s.count_le(2.5), Err(Error::CutoffInsufficient { .. })));
        assert_eq!(s.count_le(1.5).unwrap(), 1);
    }

    #[test]
    fn tails_dominate_partial_sums() {
        for s in [
            ZeroSequence::geometric(2.0).unwrap(),
            ZeroSequence::power(2.0).unwrap(),
            ZeroSequence::powlog(3.0, 0.0).unwrap(),
        ] {
            for m in [1, 2] {
                let j = 50;
                let bound = s.tail_recip_pow(j, m).unwrap();
                let partial: f64 = (j + 1..j + 200_000).map(|k| s.t(k).powi(-m)).sum();
                assert!(bound >= partial, "{s:?} m={m}: {bound} < {partial}");
            }
        }
    }

    #[test]
    fn borderline_powlog_tail_is_finite() {
        let s = ZeroSequence::powlog(1.0, 2.0).unwrap();
        let b = s.tail_recip(1000).unwrap();
        assert!(b > 0.0 && b < 1.0);
    }

    #[test]
    fn render_round_trip_text() {
        assert_eq!(ZeroSequence::geometric(2.0).unwrap().render(), "geometric:r=2");
        assert_eq!(ZeroSequence::explicit(vec![1.0, 1.5]).unwrap().render(), "explicit:[1,1.5]");
    }

    #[test]
    fn omega0_claim_rejected_for_powlog() {
        let s = ZeroSequence::powlog(3.0, 0.0).unwrap();
        assert!(s.with_omega0_flag(true, 100).is_err());
    }
}
