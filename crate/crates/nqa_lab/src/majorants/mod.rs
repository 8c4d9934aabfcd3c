//! Explicit majorants: the concave series α, the β built from it, the exact
//! S_k inequality behind α's concavity, and the step-function example that
//! separates the increasing and concave majorization theorems.

pub mod alpha;
pub mod sk;
pub mod step;

pub use alpha::{
    beta_dyadic_envelope, beta_profile, calculus_check, eval_alpha_majorant, eval_beta_majorant, lambda_search,
    majorant_chain, second_divided_differences, AlphaFn, BetaMajorant, BetaValue, CalculusReport, ChainPoint,
    ChainReport, ConcaveSeriesMajorant, DEFAULT_K_EVAL,
};
pub use sk::{c_k_recombined, c_k_value, random_sequence, s_k_nonneg_sweep, s_k_value, RationalSeq, RationalString, SweepReport, SweepViolation};
pub use step::{
    necessary_limits_probe, square_exponent_thresholds, step_counterexample, step_value, LimitProbe, LimitsReport,
    StepCounterexample,
};
