//! Quantized STT-MRAM read channel.
//!
//! The channel is a binary asymmetric channel (write errors and read
//! disturb) cascaded with a two-component Gaussian resistance read channel,
//! followed by an `n = 2^q` level output quantizer. The crate computes the
//! quantized transition matrix, capacity, cutoff rate, dispersion and the
//! normal-approximation finite blocklength bounds, and designs quantizer
//! thresholds that optimize each of them (plus a Lloyd-Max MMSE baseline).
//! A seeded Monte Carlo sampler cross-checks the analytic matrix.
//!
//! All numeric code is generic over [`Real`] (`f32`, `f64`); the `*F64`
//! aliases below name the reference-precision instantiations.

// Negated comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bounds;
pub mod channel;
pub mod design;
pub mod error;
pub mod format;
pub mod numerics;
pub mod quadrature;
pub mod scalar;
pub mod simulate;

pub use bounds::{
    capacity, capacity_derivative, cutoff_rate, cutoff_rate_derivative, dispersion, dispersion_derivative, ppv_blep,
    ppv_max_rate, ppv_surrogate, ppv_surrogate_derivative, unquantized_mutual_information, BoundsReport,
    CapacityDerivativeTerms, CutoffDerivativeTerms, FiniteBlocklengthQuery, PpvResult,
};
pub use channel::{
    crossover_probs, interval_probs, output_distribution, transition_matrix, ChannelParams, CrossoverProbs, Quantizer,
    TransitionMatrix,
};
pub use design::{
    bisect_root, design, design_capacity_max, design_cutoff_max, design_lloyd_max, design_multibit, design_ppv_min,
    evaluate_objective, Criterion, DesignResult, Diagnostics, Fallback, Objective, OptimizerConfig,
};
pub use error::{Error, Result};
pub use numerics::{binary_entropy, inv_q_function, q_function, xlog2x, Probability};
pub use scalar::Real;
pub use simulate::{estimate_matrix, export_samples, sample_channel, McConfig, McReport};

pub type ChannelParamsF64 = ChannelParams<f64>;
pub type ChannelParamsF32 = ChannelParams<f32>;
pub type CrossoverProbsF64 = CrossoverProbs<f64>;
pub type QuantizerF64 = Quantizer<f64>;
pub type QuantizerF32 = Quantizer<f32>;
pub type TransitionMatrixF64 = TransitionMatrix<f64>;
pub type TransitionMatrixF32 = TransitionMatrix<f32>;
pub type BoundsReportF64 = BoundsReport<f64>;
pub type FiniteBlocklengthQueryF64 = FiniteBlocklengthQuery<f64>;
pub type OptimizerConfigF64 = OptimizerConfig<f64>;
pub type DesignResultF64 = DesignResult<f64>;
pub type McReportF64 = McReport<f64>;
pub type ProbabilityF64 = Probability<f64>;
