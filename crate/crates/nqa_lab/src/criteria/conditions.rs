//! The six equivalent-or-implied conditions for ln|ω| and the three
//! zero-side conditions, each as a [`SeriesDiagnostic`].

use serde::Serialize;
use serde_json::{json, Value};

use crate::criteria::{msnq_series_with, sequence_profile, ProfileKind, SeriesDiagnostic, ThresholdPolicy, Verdict};
use crate::error::{Error, Result};
use crate::tails::{Envelope, Term};
use crate::weight_core::sequence::certified_tail;
use crate::weight_core::{Family, ZeroSequence};

/// Series taken directly over the zeros.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ZeroSideCondition {
    /// Σ ln⁺(t_j/j)/t_j (terms with t_j ≤ j contribute 0).
    LogRatio,
    /// Σ_{j≥2} ln ln j / t_j.
    LogLogIndex,
    /// Σ ln⁺ ln t_j / t_j.
    LogLogZero,
}

impl ZeroSideCondition {
    fn first_index(&self) -> u64 {
        match self {
            ZeroSideCondition::LogLogIndex => 2,
            _ => 1,
        }
    }

    fn label(&self) -> &'static str {
        match self {
            ZeroSideCondition::LogRatio => "ln+(t_j/j)/t_j",
            ZeroSideCondition::LogLogIndex => "lnln j/t_j",
            ZeroSideCondition::LogLogZero => "ln+ln t_j/t_j",
        }
    }

    pub fn term(&self, s: &ZeroSequence, j: u64) -> f64 {
        let t = s.t(j);
        if t.is_infinite() {
            return 0.0;
        }
        match self {
            ZeroSideCondition::LogRatio => (t / j as f64).ln().max(0.0) / t,
            ZeroSideCondition::LogLogIndex => (j as f64).ln().ln() / t,
            ZeroSideCondition::LogLogZero => t.ln().ln().max(0.0) / t,
        }
    }

    /// Envelope dominating the term from its `valid_from` on.
    pub fn envelope(&self, s: &ZeroSequence) -> Option<Envelope> {
        use ZeroSideCondition::*;
        let terms = match s.family() {
            Family::Geometric { r } => {
                let l = r.ln();
                match self {
                    LogRatio => vec![Term::expo(l, 1.0, 0.0, l)],
                    LogLogIndex => vec![Term::new(1.0, 0.0, 0.0, 1.0, l)],
                    LogLogZero => vec![Term::expo(1.0, 0.0, 1.0, l), Term::expo(l.ln().max(0.0), 0.0, 0.0, l)],
                }
            }
            Family::Power { a } => match self {
                LogRatio => vec![Term::plog(a - 1.0, -a, 1.0, 0.0)],
                LogLogIndex => vec![Term::plog(1.0, -a, 0.0, 1.0)],
                LogLogZero => vec![Term::plog(1.0, -a, 0.0, 1.0), Term::plog(a.ln().max(0.0), -a, 0.0, 0.0)],
            },
            Family::PowLog { a, b } => match self {
                // ln(t_j/j) = a lnln j + b lnlnln j ≤ (a+b) lnln j for j ≥ 16.
                LogRatio => vec![Term::plog(a + b, -1.0, -a, 1.0 - b)],
                LogLogIndex => vec![Term::plog(1.0, -1.0, -a, 1.0 - b)],
                // ln t_j ≤ (1+a+b) ln j.
                LogLogZero => vec![
                    Term::plog(1.0, -1.0, -a, 1.0 - b),
                    Term::plog((1.0 + a + b).ln(), -1.0, -a, -b),
                ],
            },
            Family::Explicit(_) => return None,
        };
        Some(Envelope::new(terms, 16))
    }
}

/// Partial sums over the first `z` zeros plus a certified tail.
pub fn zero_side_series(s: &ZeroSequence, cond: ZeroSideCondition, z: u64, policy: ThresholdPolicy) -> SeriesDiagnostic {
    let j0 = cond.first_index();
    let (z, tail) = match s.finite_len() {
        Some(m) => {
            let z = z.min(m).max(j0.saturating_sub(1));
            let rest: f64 = ((z + 1)..=m).map(|j| cond.term(s, j)).sum();
            (z, Some(rest.max(0.0)))
        }
        None => {
            let tail = cond
                .envelope(s)
                .and_then(|env| certified_tail(&env, z, |j| cond.term(s, j)))
                .map(|x| x * (1.0 + 1e-12));
            (z, tail)
        }
    };
    let terms: Vec<f64> = (j0..=z).map(|j| cond.term(s, j)).collect();
    // ln ln 2 < 0: the j = 2 term of the index series is the only negative one.
    let onset = (cond == ZeroSideCondition::LogLogIndex).then_some(3);
    SeriesDiagnostic::from_terms(cond.label(), j0, &terms, tail, policy, onset)
}

/// A set of diagnostics plus the verdict-level consistency checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionsReport {
    pub sequence: String,
    pub labels: Vec<String>,
    pub diagnostics: Vec<SeriesDiagnostic>,
    pub checks: Vec<(String, bool)>,
}

impl ConditionsReport {
    pub fn verdict(&self, label: &str) -> Option<Verdict> {
        self.labels.iter().position(|l| l == label).map(|i| self.diagnostics[i].verdict)
    }

    pub fn diagnostic(&self, label: &str) -> Option<&SeriesDiagnostic> {
        self.labels.iter().position(|l| l == label).map(|i| &self.diagnostics[i])
    }

    pub fn check(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|(n, _)| n == name).map(|c| c.1)
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.1)
    }

    pub fn to_json(&self) -> Value {
        let conds: Vec<Value> = self
            .labels
            .iter()
            .zip(&self.diagnostics)
            .map(|(l, d)| {
                let mut v = d.to_json(64);
                v["label"] = json!(l);
                v
            })
            .collect();
        let checks: Vec<Value> = self.checks.iter().map(|(n, ok)| json!({"check": n, "pass": ok})).collect();
        json!({"sequence": self.sequence, "conditions": conds, "checks": checks})
    }
}

fn all_equal(v: &[Verdict]) -> bool {
    v.windows(2).all(|w| w[0] == w[1])
}

/// Zero count used by the zero-side series for a dyadic horizon 2^J.
fn zero_horizon(s: &ZeroSequence, j: u64) -> u64 {
    let n = s.count_le(2f64.powi(j as i32)).unwrap_or(s.j_cut());
    n.max(j).min(1 << 22)
}

/// Conditions (i)-(vi) for ω with the given zeros: (i), (v), (vi) over the
/// zeros with t_j ≤ 2^J, (ii)-(iv) through the msnq series of n, N, ln|ω|
/// sampled at 2^j, j ≤ J.
pub fn msnq_omega_conditions(s: &ZeroSequence, j: u64) -> Result<ConditionsReport> {
    msnq_omega_conditions_with(s, j, ThresholdPolicy::default())
}

pub fn msnq_omega_conditions_with(s: &ZeroSequence, j: u64, policy: ThresholdPolicy) -> Result<ConditionsReport> {
    if j < 2 {
        return Err(Error::Domain("msnq_omega_conditions needs J ≥ 2".into()));
    }
    let z = zero_horizon(s, j);
    let mut diags = Vec::with_capacity(6);
    diags.push(zero_side_series(s, ZeroSideCondition::LogRatio, z, policy));
    for kind in [ProfileKind::CountN, ProfileKind::BigN, ProfileKind::LogOmega] {
        let p = sequence_profile(s, kind, j)?;
        let mut d = msnq_series_with(&p, policy)?;
        d.condition = format!("msnq[{}]", kind.label());
        diags.push(d);
    }
    diags.push(zero_side_series(s, ZeroSideCondition::LogLogIndex, z, policy));
    diags.push(zero_side_series(s, ZeroSideCondition::LogLogZero, z, policy));
    let labels: Vec<String> = ["(i)", "(ii)", "(iii)", "(iv)", "(v)", "(vi)"].iter().map(|x| x.to_string()).collect();
    let v: Vec<Verdict> = diags.iter().map(|d| d.verdict).collect();
    let mut checks = vec![
        ("(i)-(iv) agree".to_string(), all_equal(&v[0..4])),
        ("(v)-(vi) agree".to_string(), all_equal(&v[4..6])),
        (
            "(v)/(vi) convergence not contradicted by (i)-(iv)".to_string(),
            !(v[4..6].contains(&Verdict::ConvergentCertified) && v[0..4].contains(&Verdict::DivergentTrend)),
        ),
        ("partial sums monotone".to_string(), diags.iter().all(|d| d.is_monotone())),
    ];
    if s.omega0_flag() {
        checks.push(("all six agree (t_j/j nondecreasing)".to_string(), all_equal(&v)));
    }
    Ok(ConditionsReport { sequence: s.render(), labels, diagnostics: diags, checks })
}

/// Zero-side conditions lnln j/t_j, ln⁺ln t_j/t_j and ln⁺(t_j/j)/t_j over
/// the first J zeros.
pub fn criteria2_report(s: &ZeroSequence, j: u64) -> Result<ConditionsReport> {
    criteria2_report_with(s, j, ThresholdPolicy::default())
}

pub fn criteria2_report_with(s: &ZeroSequence, j: u64, policy: ThresholdPolicy) -> Result<ConditionsReport> {
    if j < 3 {
        return Err(Error::Domain("criteria2_report needs J ≥ 3".into()));
    }
    let diags = vec![
        zero_side_series(s, ZeroSideCondition::LogLogIndex, j, policy),
        zero_side_series(s, ZeroSideCondition::LogLogZero, j, policy),
        zero_side_series(s, ZeroSideCondition::LogRatio, j, policy),
    ];
    let v: Vec<Verdict> = diags.iter().map(|d| d.verdict).collect();
    let mut checks = vec![
        ("(i)-(ii) agree".to_string(), v[0] == v[1]),
        (
            "(iii) not divergent when (i)/(ii) converge".to_string(),
            !(v[0..2].contains(&Verdict::ConvergentCertified) && v[2] == Verdict::DivergentTrend),
        ),
    ];
    if s.omega0_flag() {
        checks.push(("all three agree (t_j/j nondecreasing)".to_string(), all_equal(&v)));
    }
    Ok(ConditionsReport {
        sequence: s.render(),
        labels: vec!["(i)".into(), "(ii)".into(), "(iii)".into()],
        diagnostics: diags,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_all_six_certified() {
        let s = ZeroSequence::geometric(2.0).unwrap();
        let r = msnq_omega_conditions(&s, 40).unwrap();
        for d in &r.diagnostics {
            assert_eq!(d.verdict, Verdict::ConvergentCertified, "{}", d.condition);
        }
        assert!(r.all_checks_pass());
        // Σ (j ln2 - ln j)/2^j from the direct oracle.
        let oracle: f64 = (1..=200).map(|j| ((j as f64) * 2f64.ln() - (j as f64).ln()).max(0.0) / 2f64.powi(j)).sum();
        let d = r.diagnostic("(i)").unwrap();
        assert!(d.last().unwrap() <= oracle && oracle <= d.upper_bound().unwrap() + 1e-15);
    }

    #[test]
    fn zero_side_tail_dominates_longer_partial_sum() {
        for s in [ZeroSequence::power(2.0).unwrap(), ZeroSequence::powlog(3.0, 0.0).unwrap(), ZeroSequence::powlog(2.0, 2.0).unwrap()] {
            for cond in [ZeroSideCondition::LogRatio, ZeroSideCondition::LogLogIndex, ZeroSideCondition::LogLogZero] {
                let short = zero_side_series(&s, cond, 1000, ThresholdPolicy::default());
                let long = zero_side_series(&s, cond, 200_000, ThresholdPolicy::default());
                let ub = short.upper_bound().expect("certified");
                assert!(long.last().unwrap() <= ub, "{cond:?} {}: {} > {}", s.render(), long.last().unwrap(), ub);
            }
        }
    }

    #[test]
    fn powlog_borderline_is_not_certified() {
        let s = ZeroSequence::powlog(1.0, 2.0).unwrap();
        let r = criteria2_report(&s, 1 << 16).unwrap();
        assert_ne!(r.verdict("(i)"), Some(Verdict::ConvergentCertified));
        assert_ne!(r.verdict("(ii)"), Some(Verdict::ConvergentCertified));
        // lnln 2 < 0, so only the first step may go down.
        let d = r.diagnostic("(i)").unwrap();
        assert!(d.partial_sums[1..].windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn explicit_three_terms_are_finite() {
        let s = ZeroSequence::explicit(vec![1.0, 5.0, 30.0]).unwrap();
        let r = criteria2_report(&s, 3).unwrap();
        for d in &r.diagnostics {
            assert_eq!(d.verdict, Verdict::ConvergentCertified);
        }
        assert!(r.all_checks_pass());
    }
}
