//! Stability of the msnq verdict under c·α, α(L·), α + β and β ≤ α.

use serde::Serialize;

use crate::criteria::{msnq_series, DyadicProfile, ProfileTails, SeriesDiagnostic, Verdict};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PermanenceReport {
    pub base: SeriesDiagnostic,
    pub scaled: SeriesDiagnostic,
    pub shift: u64,
    pub shifted: SeriesDiagnostic,
    pub sum: SeriesDiagnostic,
    /// Present when q ≤ p pointwise.
    pub dominated: Option<SeriesDiagnostic>,
    pub checks: Vec<(String, bool)>,
}

impl PermanenceReport {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.1)
    }
}

/// Divergent-trend must survive; certified must survive.
fn keeps(base: Verdict, other: Verdict) -> bool {
    match base {
        Verdict::Inconclusive => true,
        v => v == other,
    }
}

/// msnq verdicts of c·p, p(2^k ·) with k = ⌈log₂ L⌉, p + q, and q when
/// q ≤ p.
pub fn permanence_checks(p: &DyadicProfile, c: f64, l: f64, q: &DyadicProfile) -> Result<PermanenceReport> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::Domain(format!("L must be positive, got {l}")));
    }
    if p.j_min != q.j_min || p.len() != q.len() {
        return Err(Error::Domain("p and q must share their index range".into()));
    }
    let base = msnq_series(p)?;
    let scaled = msnq_series(&p.scaled(c)?)?;
    let shift = l.log2().ceil().max(0.0) as u64;
    let shifted = msnq_series(&p.shifted(shift)?)?;

    // (a+b)·ln(2^j/(a'+b')) ≤ a·ln(2^j/a') + b·ln(2^j/b').
    let sum_values = p.values.iter().zip(&q.values).map(|(a, b)| a + b).collect();
    let sum_profile = DyadicProfile::new(p.j_min, sum_values, format!("{}+{}", p.source, q.source), p.increasing && q.increasing)?
        .with_tails(ProfileTails {
            nqa: p.tails.nqa.zip(q.tails.nqa).map(|(a, b)| a + b),
            msnq: p.tails.msnq.zip(q.tails.msnq).map(|(a, b)| a + b),
            loglog: None,
        });
    let sum = msnq_series(&sum_profile)?;

    let below = p.values.iter().zip(&q.values).all(|(a, b)| b <= a);
    let dominated = if below && q.increasing {
        // b·ln(2^j/b') ≤ b·ln(2^j/b) ≤ a·ln(2^j/a) = a·ln(2^j/a') + a·ln(a'/a),
        // and Σ a_j ln(a_{j+1}/a_j)/2^j ≤ 2·Σ a_{j+1}/2^{j+1}, once a_j < 2^j/e.
        let last = p.j_max();
        let diag_ok = p.values.last().is_some_and(|&a| a < 2f64.powi(last as i32) / std::f64::consts::E);
        let inherited = if diag_ok { p.tails.msnq.zip(p.tails.nqa).map(|(m, n)| m + 2.0 * n) } else { None };
        let qq = q.clone().with_tails(ProfileTails { msnq: inherited, ..q.tails });
        Some(msnq_series(&qq)?)
    } else {
        None
    };

    let mut checks = vec![
        ("c·α keeps the verdict".to_string(), keeps(base.verdict, scaled.verdict)),
        ("α(L·) keeps the verdict".to_string(), keeps(base.verdict, shifted.verdict)),
    ];
    let q_alone = msnq_series(q)?;
    if base.verdict == Verdict::ConvergentCertified && q_alone.verdict == Verdict::ConvergentCertified {
        checks.push(("α+β certified".to_string(), sum.verdict == Verdict::ConvergentCertified));
    }
    if let Some(d) = &dominated {
        if base.verdict == Verdict::ConvergentCertified {
            checks.push(("β ≤ α inherits convergence".to_string(), d.verdict == Verdict::ConvergentCertified));
        }
    }
    Ok(PermanenceReport { base, scaled, shift, shifted, sum, dominated, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{sequence_profile, ProfileKind, ThresholdPolicy};
    use crate::weight_core::ZeroSequence;

    #[test]
    fn convergent_profile_keeps_verdicts() {
        let s = ZeroSequence::geometric(2.0).unwrap();
        let p = sequence_profile(&s, ProfileKind::LogOmega, 40).unwrap();
        let zero = DyadicProfile::new(1, vec![0.0; 40], "0", true).unwrap().with_tails(ProfileTails {
            nqa: Some(0.0),
            msnq: Some(0.0),
            loglog: Some(0.0),
        });
        let r = permanence_checks(&p, 2.0, 3.0, &zero).unwrap();
        assert_eq!(r.shift, 2);
        assert!(r.all_checks_pass(), "{:?}", r.checks);
        assert_eq!(r.dominated.as_ref().unwrap().verdict, Verdict::ConvergentCertified);
        assert_eq!(r.scaled.verdict, Verdict::ConvergentCertified);
    }

    #[test]
    fn scaled_terms_obey_termwise_bound() {
        // For c = 2 each formed term at most doubles.
        let s = ZeroSequence::geometric(2.0).unwrap();
        let p = sequence_profile(&s, ProfileKind::CountN, 40).unwrap();
        let a = msnq_series(&p).unwrap();
        let b = msnq_series(&p.scaled(2.0).unwrap()).unwrap();
        assert!(b.last().unwrap() <= 2.0 * a.last().unwrap() + 1e-12);
    }

    #[test]
    fn halving_keeps_divergence() {
        // a_j = 2^j/j: msnq terms ln((j+1)/2)/j diverge like ½ln²j.
        let v: Vec<f64> = (1..=400).map(|j| 2f64.powi(j) / j as f64).collect();
        let p = DyadicProfile::new(1, v, "2^j/j", true).unwrap();
        let pol = ThresholdPolicy::Absolute(5.0);
        let base = crate::criteria::msnq_series_with(&p, pol).unwrap();
        let half = crate::criteria::msnq_series_with(&p.scaled(0.5).unwrap(), pol).unwrap();
        assert_eq!(base.verdict, Verdict::DivergentTrend);
        assert_eq!(half.verdict, Verdict::DivergentTrend);
    }
}
