//! Sequential multidimensional power spectral estimation for d-time Toeplitz
//! correlation structures.
//!
//! The crate is organised bottom-up:
//!
//! * [`index`]: nestings, strides, walking permutations and Toeplitz
//!   character tests for γ-block matrices.
//! * [`linalg`]: dense complex Hermitian kernels (Cholesky, inversion,
//!   congruence products).
//! * [`correlation`]: correlation signals, their estimation, synthesis,
//!   assembly into block-Toeplitz matrices and the `ndcorr` text format.
//! * [`sequential`]: the stage-wise estimator and the 1D Levinson reference.
//! * [`capon`], [`cost`], [`matching`]: the minimum variance baseline, the
//!   analytic operation counts, and correlation-matching accuracy.

// Negated float comparisons deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capon;
pub mod correlation;
pub mod cost;
pub mod error;
pub mod index;
pub mod linalg;
pub mod matching;
pub mod sequential;
pub mod spectrum;

pub use capon::capon_spectrum;
pub use correlation::{
    assemble, check_positive_definite, estimate_correlation, read_ndcorr, synth_correlation, write_ndcorr,
    BlockToeplitzMatrix, CorrelationSignal, Peak, Plane, SignalTensor, SpectralComposition,
};
pub use cost::{capon_cost, cost_report, sequential_cost, CostReport, SequentialCost, StageCost};
pub use error::{Error, Result};
pub use index::{
    apply_walking, flat_of_multi, has_character, multi_of_flat, strides, walking_map, DimSpec, IndexPermutation,
    Nesting, Strides,
};
pub use linalg::{cholesky, invert_pd, sandwich, ComplexMatrix, HermitianMatrix};
pub use matching::{correlation_match, ErrorMode, LagMatch, MatchReport};
pub use sequential::{
    ar_spectrum_1d, final_stage, fourier_block_sum, init_stage, init_stage_walked, levinson_1d, sequential_spectrum,
    stage_update, LevinsonResult, SequentialEstimator, StageField,
};
pub use spectrum::{SpectralGridSpec, SpectrumEstimate};
