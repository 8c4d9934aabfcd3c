//! Dyadic profiles n(2^j), N(2^j), ln|ω(2^j)| of a zero sequence, with
//! family envelopes that certify the series tails beyond the last sample.
//!
//! With x_j = a_j/2^j, every envelope below bounds x_j (the nqa term) and
//! the msnq term x_j·ln(2^j/a_{j+1}). Two facts do the work: a_{j+1} ≥ a_j,
//! and either a_{j+1} ≥ 1 (so the log is at most j·ln 2) or x_j ≤ V_j ≤ 1/e
//! (so x·ln(1/x) ≤ V·ln(1/V)). N ≤ ln|ω| lets one envelope serve both.

use std::f64::consts::{E, LN_2};

use serde::Serialize;

use crate::criteria::{DyadicProfile, ProfileTails};
use crate::error::Result;
use crate::tails::{Envelope, Term};
use crate::weight_core::{big_n_far, log_omega_far, Family, ZeroSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProfileKind {
    /// n(t), the zero-counting function.
    CountN,
    /// N(t), the log of the maximal term.
    BigN,
    /// ln|ω(t)|.
    LogOmega,
}

impl ProfileKind {
    pub fn label(&self) -> &'static str {
        match self {
            ProfileKind::CountN => "n",
            ProfileKind::BigN => "N",
            ProfileKind::LogOmega => "ln|ω|",
        }
    }
}

/// Envelopes (x_j bound, msnq-term bound) for a family profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileEnvelopes {
    pub nqa: Envelope,
    pub msnq: Envelope,
}

impl ProfileEnvelopes {
    pub fn tails(&self, j_max: u64) -> ProfileTails {
        let pad = |x: f64| x * (1.0 + 1e-12);
        ProfileTails {
            nqa: self.nqa.tail(j_max).map(pad),
            msnq: j_max.checked_sub(1).and_then(|f| self.msnq.tail(f)).map(pad),
            loglog: self.nqa.times_log(1.0, 0.0).tail(j_max).map(pad),
        }
    }
}

/// Smallest j from which the powlog bounds n(2^j) ≤ 2^j·(cj)^{-a} with
/// c = ln2/2 and x_j ≤ V_j ≤ 1/e hold for every later index.
fn powlog_valid_from(a: f64, c0: f64) -> Option<u64> {
    if a <= 1.0 {
        return None;
    }
    let c = LN_2 / 2.0;
    let v = |j: f64| c.powf(-a) * j.powf(-a) * (LN_2 * j + c0 + 1.0);
    (2..100_000u64).find(|&j| {
        let x = j as f64;
        let y = c * x;
        // y ≥ a makes y - a ln y increasing, so each condition persists.
        y >= a
            && y >= a * y.ln()
            && x * LN_2 - a * y.ln() >= 16f64.ln()
            && v(x) <= 1.0 / E
            && v(x + 1.0) <= v(x)
    })
}

/// Family envelopes for a profile kind, or None when no certificate applies
/// (for instance powlog with a = 1, whose msnq series diverges).
pub fn profile_envelopes(s: &ZeroSequence, kind: ProfileKind) -> Option<ProfileEnvelopes> {
    let count = kind == ProfileKind::CountN;
    match s.family() {
        Family::Geometric { r } => {
            let kappa = LN_2 / r.ln();
            if count {
                // n(2^j) ≤ κj; a term with a_j > 0 has a_{j+1} ≥ 1.
                let nqa = Envelope::new(vec![Term::expo(kappa, 1.0, 0.0, LN_2)], 1);
                let msnq = nqa.times_linear(LN_2, 0.0);
                return Some(ProfileEnvelopes { nqa, msnq });
            }
            // ln|ω(2^j)| ≤ κj(j ln2 + ½ln2) + ½r²/(r²-1); N(2^{j+1}) ≥ 1 once 2^{j+1} ≥ e·r.
            let rr = 0.5 * r * r / (r * r - 1.0);
            let valid = ((E * r).log2().ceil() as u64).saturating_sub(1).max(1);
            let nqa = Envelope::new(
                vec![
                    Term::expo(kappa * LN_2, 2.0, 0.0, LN_2),
                    Term::expo(0.5 * kappa * LN_2, 1.0, 0.0, LN_2),
                    Term::expo(rr, 0.0, 0.0, LN_2),
                ],
                valid,
            );
            let msnq = nqa.times_linear(LN_2, 0.0);
            Some(ProfileEnvelopes { nqa, msnq })
        }
        Family::Power { a } => {
            let lambda = (1.0 - 1.0 / a) * LN_2;
            if count {
                let nqa = Envelope::new(vec![Term::expo(1.0, 0.0, 0.0, lambda)], 1);
                let msnq = nqa.times_linear(LN_2, 0.0);
                return Some(ProfileEnvelopes { nqa, msnq });
            }
            // ln|ω(t)| ≤ t^{1/a}(ln t + ½ln2 + 2^{2a-2}/(2a-1)) for t ≥ 2^a.
            let c = 2f64.powf(2.0 * a - 2.0) / (2.0 * a - 1.0);
            let nqa = Envelope::new(
                vec![Term::expo(LN_2, 1.0, 0.0, lambda), Term::expo(0.5 * LN_2 + c, 0.0, 0.0, lambda)],
                a.ceil() as u64,
            );
            let msnq = nqa.times_linear(LN_2, 0.0);
            Some(ProfileEnvelopes { nqa, msnq })
        }
        Family::PowLog { a, .. } => {
            let c = LN_2 / 2.0;
            let c0 = (-s.t(1).ln()).max(0.0) + 0.5 * LN_2;
            let valid = powlog_valid_from(*a, c0)?;
            let ca = c.powf(-a);
            let nqa = if count {
                Envelope::new(vec![Term::plog(ca, -a, 0.0, 0.0)], valid)
            } else {
                // ln|ω(2^j)|/2^j ≤ (cj)^{-a}(j ln2 + C0 + 1).
                Envelope::new(
                    vec![Term::plog(ca * LN_2, 1.0 - a, 0.0, 0.0), Term::plog(ca * (c0 + 1.0), -a, 0.0, 0.0)],
                    valid,
                )
            };
            // V·ln(1/V) ≤ a·ln j·V.
            let msnq = nqa.times_log(*a, 0.0);
            Some(ProfileEnvelopes { nqa, msnq })
        }
        Family::Explicit(v) => {
            let m = v.len() as f64;
            let t1 = v[0];
            if count {
                let nqa = Envelope::new(vec![Term::expo(m, 0.0, 0.0, LN_2)], 1);
                let msnq = nqa.times_linear(LN_2, 0.0);
                return Some(ProfileEnvelopes { nqa, msnq });
            }
            let c0 = (-t1.ln()).max(0.0) + 0.5 * LN_2;
            let valid = ((E * t1).log2().ceil().max(1.0) as u64).saturating_sub(1).max(1);
            let nqa = Envelope::new(
                vec![Term::expo(m * LN_2, 1.0, 0.0, LN_2), Term::expo(m * (c0 + 0.5), 0.0, 0.0, LN_2)],
                valid,
            );
            let msnq = nqa.times_linear(LN_2, 0.0);
            Some(ProfileEnvelopes { nqa, msnq })
        }
    }
}

/// Profile a_j = F(2^j), 1 ≤ j ≤ j_max, with family tail certificates.
pub fn sequence_profile(s: &ZeroSequence, kind: ProfileKind, j_max: u64) -> Result<DyadicProfile> {
    let mut values = Vec::with_capacity(j_max as usize);
    for j in 1..=j_max {
        let t = 2f64.powi(j as i32);
        let v = match kind {
            ProfileKind::CountN => s.count_le(t)? as f64,
            ProfileKind::BigN => big_n_far(s, t)?.0,
            ProfileKind::LogOmega => log_omega_far(s, t)?.0,
        };
        values.push(v);
    }
    // Lower-bound samples of an increasing function can dip by rounding.
    for i in 1..values.len() {
        if values[i] < values[i - 1] {
            values[i] = values[i - 1];
        }
    }
    let p = DyadicProfile::new(1, values, format!("{}[{}]", kind.label(), s.render()), true)?;
    let tails = profile_envelopes(s, kind).map(|e| e.tails(j_max)).unwrap_or_default();
    Ok(p.with_tails(tails))
}
