//! Certified upper bounds for tails Σ_{j>J} h(j) of explicit envelopes
//! h(j) = Σ_i A_i · j^{p_i} · (ln j)^{q_i} · (ln ln j)^{r_i} · e^{-λ_i j}.
//!
//! Components with λ > 0 are bounded by a ratio test; components with
//! λ = 0 by the integral of a decreasing integrand, evaluated in closed
//! form after the substitution y = ln x (and w = ln y when p = -1).

use serde::Serialize;

/// One envelope component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Term {
    pub coef: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub lambda: f64,
}

impl Term {
    pub fn new(coef: f64, p: f64, q: f64, r: f64, lambda: f64) -> Self {
        Term { coef, p, q, r, lambda }
    }

    /// Pure power j^p · (ln j)^q · (ln ln j)^r.
    pub fn plog(coef: f64, p: f64, q: f64, r: f64) -> Self {
        Term::new(coef, p, q, r, 0.0)
    }

    /// j^p · (ln j)^q · e^{-λ j}.
    pub fn expo(coef: f64, p: f64, q: f64, lambda: f64) -> Self {
        Term::new(coef, p, q, 0.0, lambda)
    }

    pub fn eval(&self, j: f64) -> f64 {
        if self.coef == 0.0 {
            return 0.0;
        }
        let mut ln_v = self.p * j.ln() - self.lambda * j;
        if self.q != 0.0 {
            ln_v += self.q * j.ln().ln();
        }
        if self.r != 0.0 {
            ln_v += self.r * j.ln().ln().ln();
        }
        self.coef * ln_v.exp()
    }

    /// Whether the component has a finite sum (so some tail certificate exists).
    pub fn summable(&self) -> bool {
        if self.coef == 0.0 || self.lambda > 0.0 {
            return true;
        }
        self.lambda == 0.0
            && (self.p < -1.0 || (self.p == -1.0 && (self.q < -1.0 || (self.q == -1.0 && self.r < -1.0))))
    }

    /// Smallest index from which the component's factors are well defined.
    fn domain_start(&self) -> u64 {
        if self.r != 0.0 {
            3
        } else if self.q != 0.0 {
            2
        } else {
            1
        }
    }

    /// Bound on Σ_{j>from} of this component, or None if no certificate applies.
    pub fn tail(&self, from: u64) -> Option<f64> {
        if self.coef == 0.0 {
            return Some(0.0);
        }
        if self.coef < 0.0 {
            return None;
        }
        let from = from.max(self.domain_start());
        if self.lambda > 0.0 {
            self.ratio_tail(from)
        } else if self.lambda == 0.0 {
            self.integral_tail(from)
        } else {
            None
        }
    }

    fn ratio_tail(&self, from: u64) -> Option<f64> {
        // Sum explicitly until the ratio bound drops below one.
        let mut acc = 0.0;
        let mut j = from;
        for _ in 0..100_000 {
            let x = (j + 1) as f64;
            let mut ln_rho = -self.lambda;
            ln_rho += self.p.max(0.0) * ((x + 1.0) / x).ln();
            if self.q > 0.0 {
                ln_rho += self.q * ((x + 1.0).ln() / x.ln()).ln();
            }
            if self.r > 0.0 {
                ln_rho += self.r * ((x + 1.0).ln().ln() / x.ln().ln()).ln();
            }
            if ln_rho < 0.0 && x.ln().ln() > 0.0 {
                let rho = ln_rho.exp();
                return Some(acc + self.eval(x) / (1.0 - rho));
            }
            acc += self.eval(x);
            j += 1;
        }
        None
    }

    fn integral_tail(&self, from: u64) -> Option<f64> {
        let x0 = from as f64;
        let big_y = x0.ln();
        if self.p > -1.0 || !(big_y > 0.0) {
            return None;
        }
        let lly = big_y.ln();
        // Integrand must be decreasing on [x0, ∞).
        let mut slope = self.p + self.q.max(0.0) / big_y;
        if self.r > 0.0 {
            if !(lly > 0.0) {
                return None;
            }
            slope += self.r / (big_y * lly);
        }
        if slope >= 0.0 {
            return None;
        }
        if self.r != 0.0 && !(lly > 0.0) {
            return None;
        }
        let val = if self.p < -1.0 {
            // ∫_Y^∞ e^{-μy} y^q (ln y)^r dy with μ = -(p+1).
            let mu = -(self.p + 1.0);
            let mut nu = mu - self.q.max(0.0) / big_y;
            if self.r > 0.0 {
                nu -= self.r / (big_y * lly);
            }
            if nu <= 0.0 {
                return None;
            }
            let mut ln_phi = -mu * big_y + self.q * big_y.ln();
            if self.r != 0.0 {
                ln_phi += self.r * lly.ln();
            }
            ln_phi.exp() / nu
        } else if self.q < -1.0 {
            // p = -1: ∫_W^∞ e^{-μ' w} w^r dw with w = ln y, μ' = -(q+1).
            let w0 = lly;
            if !(w0 > 0.0) {
                return None;
            }
            let mu = -(self.q + 1.0);
            let nu = mu - self.r.max(0.0) / w0;
            if nu <= 0.0 {
                return None;
            }
            (-mu * w0 + self.r * w0.ln()).exp() / nu
        } else if self.q == -1.0 && self.r < -1.0 {
            let w0 = lly;
            if !(w0 > 0.0) {
                return None;
            }
            w0.powf(self.r + 1.0) / (-self.r - 1.0)
        } else {
            return None;
        };
        Some(self.coef * val)
    }
}

/// Sum of [`Term`]s, asserted to dominate a term sequence for j ≥ `valid_from`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Envelope {
    pub terms: Vec<Term>,
    pub valid_from: u64,
}

impl Envelope {
    pub fn new(terms: Vec<Term>, valid_from: u64) -> Self {
        Envelope { terms, valid_from }
    }

    pub fn eval(&self, j: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(j)).sum()
    }

    /// Certified bound on Σ_{j>from} of the dominated sequence.
    pub fn tail(&self, from: u64) -> Option<f64> {
        if from + 1 < self.valid_from {
            return None;
        }
        let mut s = 0.0;
        for t in &self.terms {
            s += t.tail(from)?;
        }
        Some(s)
    }

    pub fn summable(&self) -> bool {
        self.terms.iter().all(Term::summable)
    }

    pub fn scaled(&self, c: f64) -> Envelope {
        let terms = self
            .terms
            .iter()
            .map(|t| Term { coef: t.coef * c, ..*t })
            .collect();
        Envelope::new(terms, self.valid_from)
    }

    /// Multiply by (a·ln j + b) with a, b ≥ 0.
    pub fn times_log(&self, a: f64, b: f64) -> Envelope {
        let mut terms = Vec::with_capacity(2 * self.terms.len());
        for t in &self.terms {
            if a != 0.0 {
                terms.push(Term { coef: t.coef * a, q: t.q + 1.0, ..*t });
            }
            if b != 0.0 {
                terms.push(Term { coef: t.coef * b, ..*t });
            }
        }
        Envelope::new(terms, self.valid_from)
    }

    /// Multiply by (a·j + b) with a, b ≥ 0.
    pub fn times_linear(&self, a: f64, b: f64) -> Envelope {
        let mut terms = Vec::with_capacity(2 * self.terms.len());
        for t in &self.terms {
            if a != 0.0 {
                terms.push(Term { coef: t.coef * a, p: t.p + 1.0, ..*t });
            }
            if b != 0.0 {
                terms.push(Term { coef: t.coef * b, ..*t });
            }
        }
        Envelope::new(terms, self.valid_from)
    }

    pub fn plus(&self, other: &Envelope) -> Envelope {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().copied());
        Envelope::new(terms, self.valid_from.max(other.valid_from))
    }

    pub fn starting_at(mut self, j: u64) -> Envelope {
        self.valid_from = self.valid_from.max(j);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(t: &Term, from: u64, n: u64) -> f64 {
        ((from + 1)..=(from + n)).map(|j| t.eval(j as f64)).sum()
    }

    #[test]
    fn geometric_tail_is_exact_closed_form() {
        let t = Term::expo(1.0, 0.0, 0.0, 2f64.ln());
        let b = t.tail(10).unwrap();
        let exact = 2f64.powi(-10);
        assert!(b >= exact * (1.0 - 1e-12));
        assert!(b <= exact * 1.0001);
    }

    #[test]
    fn ratio_tail_dominates_polynomial_geometric() {
        let t = Term::expo(3.0, 2.0, 1.0, 0.5);
        let b = t.tail(5).unwrap();
        assert!(b >= direct(&t, 5, 2000));
    }

    #[test]
    fn power_tail_dominates_zeta_tail() {
        let t = Term::plog(1.0, -2.0, 0.0, 0.0);
        let b = t.tail(100).unwrap();
        let d = direct(&t, 100, 200_000);
        assert!(b >= d);
        assert!(b < 1.0 / 100.0 * 1.01);
    }

    #[test]
    fn loglog_tail_for_borderline_series() {
        // Σ 1/(j ln j (ln ln j)^2) converges; tail ≈ 1/ln ln J.
        let t = Term::plog(1.0, -1.0, -1.0, -2.0);
        let b = t.tail(100).unwrap();
        assert!((b - 1.0 / 100f64.ln().ln()).abs() < 1e-12);
        assert!(b >= direct(&t, 100, 100_000));
    }

    #[test]
    fn divergent_components_have_no_certificate() {
        assert!(Term::plog(1.0, -1.0, -1.0, -1.0).tail(100).is_none());
        assert!(Term::plog(1.0, -1.0, 0.0, 0.0).tail(100).is_none());
        assert!(Term::plog(1.0, -0.5, 0.0, 0.0).tail(100).is_none());
    }

    #[test]
    fn log_power_tail_dominates() {
        let t = Term::plog(2.0, -3.0, 1.0, 0.0);
        let b = t.tail(20).unwrap();
        assert!(b >= direct(&t, 20, 100_000));
    }

    #[test]
    fn envelope_validity_gate() {
        let e = Envelope::new(vec![Term::plog(1.0, -2.0, 0.0, 0.0)], 50);
        assert!(e.tail(10).is_none());
        assert!(e.tail(60).is_some());
    }
}
