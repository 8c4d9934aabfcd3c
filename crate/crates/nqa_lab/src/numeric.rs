//! Small numeric helpers shared by every module: compensated sums,
//! log-domain addition, golden-section search and log grids.

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;

/// Neumaier-compensated accumulator. Terms must be added in a fixed order
/// for bit-reproducible results.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompSum {
    sum: f64,
    comp: f64,
}

impl CompSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of an iterator, in iteration order.
pub fn comp_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut s = CompSum::new();
    for x in it {
        s.add(x);
    }
    s.value()
}

/// ln(e^a + e^b), exact for -inf arguments.
pub fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// ln Σ e^{x_i}; returns -inf for an empty slice.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY || m.is_infinite() {
        return m;
    }
    let s = comp_sum(xs.iter().map(|&x| (x - m).exp()));
    m + s.ln()
}

/// `n` points log-spaced on [lo, hi], endpoints included.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi >= lo && n >= 1);
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section maximisation of `f` on [a, b]. Returns (argmax, max),
/// including the endpoints among the candidates.
pub fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let (fa0, fb0) = (f(a), f(b));
    let (a0, b0) = (a, b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mut best = if fc >= fd { (c, fc) } else { (d, fd) };
    for cand in [(a0, fa0), (b0, fb0)] {
        if cand.1 > best.1 {
            best = cand;
        }
    }
    best
}

/// Golden-section minimisation; see [`golden_max`].
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, iters: usize) -> (f64, f64) {
    let (x, v) = golden_max(|x| -f(x), a, b, iters);
    (x, -v)
}

/// Nonnegative extended-range float m·2^e (m normalised to [1, 2) or zero).
/// Keeps full f64 relative precision where plain f64 would under/overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ext {
    m: f64,
    e: i64,
}

impl Ext {
    pub const ZERO: Ext = Ext { m: 0.0, e: 0 };
    pub const ONE: Ext = Ext { m: 1.0, e: 0 };

    fn norm(m: f64, e: i64) -> Ext {
        if m == 0.0 {
            return Ext::ZERO;
        }
        debug_assert!(m.is_finite() && m > 0.0);
        let bits = m.to_bits();
        let raw = ((bits >> 52) & 0x7ff) as i64;
        if raw == 0 {
            // Subnormal mantissa: rescale first.
            return Ext::norm(m * 2f64.powi(64), e - 64);
        }
        let ex = raw - 1023;
        let mant = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1023u64 << 52));
        Ext { m: mant, e: e + ex }
    }

    pub fn from_f64(x: f64) -> Ext {
        assert!(x >= 0.0 && x.is_finite());
        Ext::norm(x, 0)
    }

    /// Value e^l.
    pub fn from_ln(l: f64) -> Ext {
        if l == f64::NEG_INFINITY {
            return Ext::ZERO;
        }
        let e = (l / std::f64::consts::LN_2).floor();
        Ext::norm((l - e * std::f64::consts::LN_2).exp(), e as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.m == 0.0
    }

    pub fn ln(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.m.ln() + self.e as f64 * std::f64::consts::LN_2
        }
    }

    pub fn add(self, o: Ext) -> Ext {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (hi, lo) = if self.e >= o.e { (self, o) } else { (o, self) };
        let d = hi.e - lo.e;
        if d > 1100 {
            return hi;
        }
        Ext::norm(hi.m + lo.m * 2f64.powi(-(d as i32)), hi.e)
    }

    pub fn mul(self, o: Ext) -> Ext {
        if self.is_zero() || o.is_zero() {
            return Ext::ZERO;
        }
        Ext::norm(self.m * o.m, self.e + o.e)
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton on P_n).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// ∫_a^b f by composite Gauss-Legendre on `pieces` equal panels.
pub fn gl_integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, pieces: usize, rule: &(Vec<f64>, Vec<f64>)) -> f64 {
    let h = (b - a) / pieces as f64;
    let mut acc = CompSum::new();
    for p in 0..pieces {
        let (lo, hi) = (a + h * p as f64, a + h * (p + 1) as f64);
        let (c, r) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        for (xi, wi) in rule.0.iter().zip(&rule.1) {
            acc.add(wi * r * f(c + r * xi));
        }
    }
    acc.value()
}

pub type Big = FBig<HalfEven, 2>;

/// Exact conversion of a finite f64 followed by rounding to `bits`.
pub fn big(x: f64, bits: usize) -> Big {
    Big::try_from(x).expect("finite value").with_precision(bits).value()
}

pub fn big_to_f64(x: &Big) -> f64 {
    x.to_f64().value()
}

/// Deterministic 64-bit mixer used to derive per-task seeds from one seed.
pub fn split_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompSum::new();
        s.add(1.0);
        for _ in 0..1000 {
            s.add(1e-16);
        }
        assert!((s.value() - (1.0 + 1e-13)).abs() < 1e-18);
    }

    #[test]
    fn log_add_handles_neg_infinity() {
        assert_eq!(log_add(f64::NEG_INFINITY, 2.0), 2.0);
        assert!((log_add(0.0, 0.0) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, v) = golden_max(|x| -(x - 0.3) * (x - 0.3), -1.0, 2.0, 80);
        assert!((x - 0.3).abs() < 1e-7);
        assert!(v.abs() < 1e-14);
    }

    #[test]
    fn golden_prefers_endpoint_when_monotone() {
        let (x, _) = golden_max(|x| x, 0.0, 1.0, 40);
        assert_eq!(x, 1.0);
    }

    #[test]
    fn log_grid_endpoints_exact() {
        let g = log_grid(0.1, 1e6, 50);
        assert_eq!(g[0], 0.1);
        assert_eq!(g[49], 1e6);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn ext_survives_underflow_range() {
        let tiny = Ext::from_ln(-2000.0);
        let prod = tiny.mul(tiny);
        assert!((prod.ln() + 4000.0).abs() < 1e-12);
        let s = tiny.add(tiny);
        assert!((s.ln() - (-2000.0 + 2f64.ln())).abs() < 1e-12);
        assert_eq!(Ext::ONE.add(Ext::from_ln(-5000.0)), Ext::ONE);
        assert!((Ext::from_f64(3.0).ln() - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let rule = gauss_legendre(10);
        let wsum: f64 = rule.1.iter().sum();
        assert!((wsum - 2.0).abs() < 1e-14);
        // Exact for degree ≤ 19.
        let v = gl_integrate(|x| x.powi(18), 0.0, 1.0, 1, &rule);
        assert!((v - 1.0 / 19.0).abs() < 1e-15);
        let v = gl_integrate(|x| x.exp(), 0.0, 3.0, 4, &rule);
        assert!((v - (3f64.exp() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn big_ln_matches_f64() {
        let l = big(3.0, 128).ln();
        assert!((big_to_f64(&l) - 3f64.ln()).abs() < 1e-16);
    }
}
