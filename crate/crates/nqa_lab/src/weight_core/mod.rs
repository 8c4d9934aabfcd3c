//! Zero sequences, the truncated log-weight ln|ω|, the counting functions
//! n(t) and N(t), and coefficient tables of |ω|^{2n}.

pub mod asymptotic;
pub mod checks;
pub mod coeffs;
pub mod evaluator;
pub mod sequence;

use serde::Serialize;

use crate::error::{Error, Result};

pub use asymptotic::{big_n_far, dyadic_log_omega_tail, log_omega_far, log_omega_integral_tail};
pub use checks::*;
pub use coeffs::{coeff_table, coeff_table_from_zeros, inf_sup_identity, ln_sup_poly, sup_poly, CoeffOptions, CoeffTable, InfSup};
pub use evaluator::{big_n, distribution_n, BigN, EvalOptions, WeightEvaluator};
pub use sequence::{Family, ZeroSequence};

/// A function sampled on a strictly increasing positive grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledFunction {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub label: String,
}

impl SampledFunction {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if grid.len() != values.len() || grid.is_empty() {
            return Err(Error::Domain("grid and values must be nonempty and of equal length".into()));
        }
        if grid[0] <= 0.0 || grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("grid must be positive and strictly increasing".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite value at grid index {i}")));
        }
        Ok(SampledFunction { grid, values, label: label.into() })
    }

    /// Sample `f` on `grid`.
    pub fn from_fn<F: FnMut(f64) -> f64>(grid: Vec<f64>, mut f: F, label: impl Into<String>) -> Result<Self> {
        let values = grid.iter().map(|&t| f(t)).collect();
        Self::new(grid, values, label)
    }

    /// Piecewise-linear interpolation in ln t; clamps outside the grid.
    pub fn interp(&self, t: f64) -> f64 {
        let i = self.grid.partition_point(|&g| g < t);
        if i == 0 {
            return self.values[0];
        }
        if i >= self.grid.len() {
            return *self.values.last().unwrap();
        }
        let (t0, t1) = (self.grid[i - 1].ln(), self.grid[i].ln());
        let w = (t.ln() - t0) / (t1 - t0);
        self.values[i - 1] * (1.0 - w) + self.values[i] * w
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] >= w[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampled_function_invariants() {
        assert!(SampledFunction::new(vec![1.0, 1.0], vec![0.0, 0.0], "x").is_err());
        assert!(SampledFunction::new(vec![1.0, 2.0], vec![0.0, f64::NAN], "x").is_err());
        let f = SampledFunction::new(vec![1.0, 4.0], vec![0.0, 2.0], "x").unwrap();
        assert!((f.interp(2.0) - 1.0).abs() < 1e-15);
        assert_eq!(f.interp(100.0), 2.0);
    }
}
