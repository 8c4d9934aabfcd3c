//! Numerical laboratory for non-quasianalytic weight functions
//! ω(z) = ∏(1 + iz/t_j) built from zero sequences.
//!
//! * [`weight_core`]: zero sequences, ln|ω|, n(t), N(t), coefficient tables.
//! * [`criteria`]: dyadic series tests with three-valued verdicts.
//! * [`majorants`]: the α/β majorants and the exact S_k inequality.
//! * [`counterexample`]: the dyadic counterexample f and its minimum-modulus experiments.
//! * [`cli`]: sequence grammar, experiment configs and report writers.

pub mod cli;
pub mod counterexample;
pub mod criteria;
pub mod error;
pub mod majorants;
pub mod numeric;
pub mod tails;
pub mod weight_core;

pub use error::{Error, Result};
