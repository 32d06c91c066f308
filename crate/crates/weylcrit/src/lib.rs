//! Correlation-tensor entanglement criteria for n-partite qudit states.
//!
//! A density matrix is expanded in tensor products of generalized Pauli (Weyl)
//! operators; the resulting correlation coefficients are flattened into
//! rectangular N-matrices per bipartition, and their trace norms are compared
//! against closed-form bounds that every biseparable state satisfies.
//! Exceeding a per-bipartition bound certifies entanglement across that cut;
//! exceeding the max (K) or, for permutation-invariant states, the mean (J) of
//! all bounds certifies genuine multipartite entanglement.
//!
//! Module layout:
//! - [`weyl`]: the operator basis and its index algebra
//! - [`state`]: density matrices (tensor, mix, partial trace, validation)
//! - [`corr`]: correlation tensors, subset vectors, norm bounds
//! - [`criteria`]: S/N-matrices, trace norms, thresholds, verdicts
//! - [`zoo`]: named reference states and white-noise families
//! - [`scan`]: threshold location along one-parameter families
//! - [`sample`]: seeded random states for property suites
//!
//! The heavy loops (tensor extraction, per-bipartition norms, scan grids) run
//! on rayon when the default `parallel` feature is enabled and fall back to
//! sequential loops without it; results are identical either way.

pub mod corr;
pub mod criteria;
pub mod error;
pub mod sample;
pub mod scan;
pub mod state;
pub mod weyl;
pub mod zoo;

mod indexing;
mod par;

// The matrix and scalar types of the public API, re-exported so downstream
// crates build against the same versions.
pub use nalgebra;
pub use num_complex;

pub use corr::{bound_multi, bound_pair, bound_single, corr_tensor, CorrelationTensor, SubsetVector};
pub use criteria::{
    bound_m, check_permutation_invariant, detect, enumerate_bipartitions, n_matrix, s_matrix,
    score_t, threshold_j, threshold_k, trace_norm, Bipartition, BipartitionRecord, CriterionReport,
    DetectionMode, NMatrix, Verdict,
};
pub use error::{Error, Result};
pub use scan::{emit_curve, sample_point, scan, CurveTable, ScanCriterion, ScanResult, ScanSample};
pub use state::{DensityMatrix, ValidationReport};
pub use weyl::{omega_pow, pauli_dagger_index, pauli_mul_index, pauli_op, weyl_basis, PauliOp, WeylBasis};
pub use zoo::{baselines, example2_phi, ghz, w3, white_noise, Baselines, Family};
