use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{golden_min, Ext};
use crate::weight_core::sequence::ZeroSequence;

/// a_k = sqrt of the u^k coefficient of ∏_{j≤J} (1 + u/t_j²)^n, 0 ≤ k ≤ K,
/// stored as ln a_k (-∞ for a zero coefficient).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoeffTable {
    pub n: u32,
    pub k_max: usize,
    pub ln_a: Vec<f64>,
    /// exp(n·K·Σ_{j>J} 1/t_j²) - 1.
    pub trunc_error_rel: f64,
    pub j_used: u64,
    /// True when the product has degree ≤ K, so no coefficient is dropped.
    pub complete: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct CoeffOptions {
    pub tol: f64,
    pub max_terms: u64,
}

impl Default for CoeffOptions {
    fn default() -> Self {
        CoeffOptions { tol: 1e-12, max_terms: 1 << 20 }
    }
}

impl CoeffTable {
    /// Table from explicit nonnegative values (a_0 must be 1).
    pub fn from_values(a: &[f64]) -> Result<Self> {
        if a.first() != Some(&1.0) || a.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
            return Err(Error::Domain("coefficient table needs a_0 = 1 and finite a_k ≥ 0".into()));
        }
        Ok(CoeffTable {
            n: 1,
            k_max: a.len() - 1,
            ln_a: a.iter().map(|x| x.ln()).collect(),
            trunc_error_rel: 0.0,
            j_used: 0,
            complete: true,
        })
    }

    pub fn a(&self, k: usize) -> f64 {
        self.ln_a[k].exp()
    }

    pub fn values(&self) -> Vec<f64> {
        self.ln_a.iter().map(|x| x.exp()).collect()
    }
}

/// Coefficient table of ∏_{j≤J}(1+u/t_j²)^n truncated at degree K, in extended range.
pub fn coeff_table(s: &ZeroSequence, n: u32, k_max: usize, opts: CoeffOptions) -> Result<CoeffTable> {
    if n == 0 || k_max == 0 {
        return Err(Error::Domain("coeff_table needs n ≥ 1 and K ≥ 1".into()));
    }
    let cap = opts.max_terms.min(s.j_cut()).max(1);
    let j = match s.finite_len() {
        Some(m) => m.min(cap),
        None => {
            let nk = n as f64 * k_max as f64;
            let mut j = 16u64.min(cap);
            loop {
                let ok = s.tail_recip_sq(j).map(|t2| nk * t2 <= opts.tol).unwrap_or(false);
                if ok || j >= cap {
                    break j;
                }
                j = (j * 2).min(cap);
            }
        }
    };
    let zeros = s.zeros(j);
    let tail2 = s.tail_recip_sq(zeros.len() as u64);
    coeff_table_from_zeros(&zeros, n, k_max, tail2)
}

/// Same as [`coeff_table`] for an explicit zero list with a given tail Σ 1/t_j² bound.
pub fn coeff_table_from_zeros(zeros: &[f64], n: u32, k_max: usize, tail2: Option<f64>) -> Result<CoeffTable> {
    let mut base = vec![Ext::ZERO; k_max + 1];
    base[0] = Ext::ONE;
    let mut deg = 0usize;
    for &z in zeros {
        let x = Ext::from_ln(-2.0 * z.ln());
        deg = (deg + 1).min(k_max);
        for k in (1..=deg).rev() {
            base[k] = base[k].add(x.mul(base[k - 1]));
        }
    }
    let mut poly = base.clone();
    for _ in 1..n {
        let mut next = vec![Ext::ZERO; k_max + 1];
        for (i, pi) in poly.iter().enumerate() {
            if pi.is_zero() {
                continue;
            }
            for (k, bk) in base.iter().enumerate().take(k_max + 1 - i) {
                next[i + k] = next[i + k].add(pi.mul(*bk));
            }
        }
        poly = next;
    }
    let ln_a: Vec<f64> = poly.iter().map(|c| 0.5 * c.ln()).collect();
    if ln_a.iter().any(|x| x.is_nan() || *x == f64::INFINITY) {
        return Err(Error::Precision("coefficient table overflowed".into()));
    }
    let trunc_error_rel = match tail2 {
        Some(t2) => (n as f64 * k_max as f64 * t2).exp_m1(),
        None => f64::INFINITY,
    };
    Ok(CoeffTable {
        n,
        k_max,
        ln_a,
        trunc_error_rel,
        j_used: zeros.len() as u64,
        complete: tail2 == Some(0.0) && n as usize * zeros.len() <= k_max,
    })
}

/// (ln sup_p a_p t^p, smallest attaining p).
pub fn ln_sup_poly(table: &CoeffTable, ln_t: f64) -> (f64, usize) {
    let mut best = (table.ln_a[0], 0usize);
    for (p, &la) in table.ln_a.iter().enumerate().skip(1) {
        if la == f64::NEG_INFINITY {
            continue;
        }
        let v = la + p as f64 * ln_t;
        if v > best.0 {
            best = (v, p);
        }
    }
    best
}

/// sup_{0≤p≤K} a_p t^p and the smallest attaining index.
pub fn sup_poly(table: &CoeffTable, t: f64) -> Result<(f64, usize)> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("sup_poly needs finite t > 0, got {t}")));
    }
    let (l, p) = ln_sup_poly(table, t.ln());
    Ok((l.exp(), p))
}

/// Result of [`inf_sup_identity`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InfSup {
    pub lhs: f64,
    pub rhs: f64,
    pub ln_lhs: f64,
    pub ln_rhs: f64,
    pub t_min: f64,
}

impl InfSup {
    pub fn rel_err(&self) -> f64 {
        (self.ln_lhs - self.ln_rhs).exp_m1().abs()
    }
}

/// min_{t>0} t^{-k} sup_p a_p t^p against a_k: log grid over the table's
/// breakpoints (including t* = a_{k-1}/a_k), then golden-section refinement.
pub fn inf_sup_identity(table: &CoeffTable, k: usize, search_grid: usize) -> Result<InfSup> {
    if k == 0 || k + 1 > table.k_max {
        return Err(Error::IdentityInapplicable(format!("k = {k} outside [1, K-1] with K = {}", table.k_max)));
    }
    if table.ln_a[k - 1] == f64::NEG_INFINITY || table.ln_a[k] == f64::NEG_INFINITY {
        return Err(Error::IdentityInapplicable(format!("a_{} or a_{k} vanishes", k - 1)));
    }
    let phi = |s: f64| ln_sup_poly(table, s).0 - k as f64 * s;
    let breaks: Vec<f64> = (1..=table.k_max)
        .filter(|&p| table.ln_a[p] > f64::NEG_INFINITY)
        .map(|p| table.ln_a[p - 1] - table.ln_a[p])
        .collect();
    let s_star = table.ln_a[k - 1] - table.ln_a[k];
    let lo = breaks.iter().copied().fold(s_star, f64::min) - 1.0;
    let hi = breaks.iter().copied().fold(s_star, f64::max) + 1.0;
    let m = search_grid.max(3);
    let mut grid: Vec<f64> = (0..m).map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64).collect();
    grid.push(s_star);
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let vals: Vec<f64> = grid.iter().map(|&s| phi(s)).collect();
    let ib = (0..grid.len()).min_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap()).unwrap();
    let a = grid[ib.saturating_sub(1)];
    let b = grid[(ib + 1).min(grid.len() - 1)];
    let (s_ref, v_ref) = golden_min(phi, a, b, 200);
    let (s_min, v_min) = if v_ref < vals[ib] { (s_ref, v_ref) } else { (grid[ib], vals[ib]) };
    Ok(InfSup {
        lhs: v_min.exp(),
        rhs: table.ln_a[k].exp(),
        ln_lhs: v_min,
        ln_rhs: table.ln_a[k],
        t_min: s_min.exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_of(zeros: &[f64], n: u32, k: usize) -> CoeffTable {
        coeff_table_from_zeros(zeros, n, k, Some(0.0)).unwrap()
    }

    #[test]
    fn single_linear_factor() {
        let t = table_of(&[1.0], 1, 3);
        let a = t.values();
        assert_eq!(a, vec![1.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn two_zeros_by_direct_product() {
        // (1 + u)(1 + u/4) = 1 + 1.25u + 0.25u²
        let t = table_of(&[1.0, 2.0], 1, 2);
        let a = t.values();
        assert!((a[1] - 1.25f64.sqrt()).abs() < 1e-15);
        assert!((a[2] - 0.5).abs() < 1e-15);
        assert!(a[1] * a[1] >= a[0] * a[2]);
    }

    #[test]
    fn multiplicity_equals_power() {
        let a = table_of(&[1.0, 1.0], 1, 2);
        let b = table_of(&[1.0], 2, 2);
        for k in 0..=2 {
            assert!((a.ln_a[k] - b.ln_a[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn sup_poly_cases() {
        let t = CoeffTable::from_values(&[1.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(sup_poly(&t, 2.0).unwrap(), (2.0, 1));
        let t = CoeffTable::from_values(&[1.0, 1.25f64.sqrt(), 0.5]).unwrap();
        let (v, p) = sup_poly(&t, 1.0).unwrap();
        assert_eq!(p, 1);
        assert!((v - 1.25f64.sqrt()).abs() < 1e-15);
        assert_eq!(sup_poly(&t, 1e-12).unwrap().1, 0);
    }

    #[test]
    fn identity_error_path() {
        let t = CoeffTable::from_values(&[1.0, 1.0]).unwrap();
        assert!(matches!(inf_sup_identity(&t, 1, 50), Err(Error::IdentityInapplicable(_))));
    }

    #[test]
    fn identity_small_table() {
        let t = CoeffTable::from_values(&[1.0, 1.25f64.sqrt(), 0.5]).unwrap();
        let r = inf_sup_identity(&t, 1, 64).unwrap();
        assert!(r.rel_err() < 1e-12);
    }

    #[test]
    fn identity_geometric() {
        let s = ZeroSequence::geometric(2.0).unwrap();
        let t = coeff_table(&s, 1, 8, CoeffOptions::default()).unwrap();
        for k in 1..=6 {
            let r = inf_sup_identity(&t, k, 400).unwrap();
            assert!(r.rel_err() < 1e-4, "k={k}: {r:?}");
        }
    }

    #[test]
    fn geometric_table_coefficients_are_tiny_but_finite() {
        let s = ZeroSequence::geometric(2.0).unwrap();
        let t = coeff_table(&s, 3, 40, CoeffOptions::default()).unwrap();
        assert!(t.ln_a[40].is_finite());
        assert!(t.trunc_error_rel < 1e-12);
    }
}
