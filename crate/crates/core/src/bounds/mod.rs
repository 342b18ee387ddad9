//! Evaluators for the norm, SLD and QFI continuity inequalities, each
//! returning a [`BoundReport`](crate::BoundReport), plus a seeded batch runner.

mod batch;
mod continuity;
mod norms;

pub use batch::{batch_verify, sample_pair, BatchConfig, BatchOutput, SampleError, BOUND_SUITE};
pub use continuity::{
    continuity_coefficients, continuity_suite, exp_diff_bound, qfi_continuity_bound, qfi_continuity_chain,
    sld_continuity_bound, sld_norm_bound, unitary_sld_bound, ContinuityCoefficients, Evaluator, PairScalars,
    Variant, DEFAULT_LAMBDA_FLOOR,
};
pub use norms::{duality_check, monotonicity_check, submultiplicativity_check};
