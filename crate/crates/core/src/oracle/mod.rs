//! Independent numeric cross-check of the substitution engine.
//!
//! The circuit is turned into a mode unitary U, each element's block is
//! written as U = exp(iH) with H Hermitian, the quadratic Hamiltonian
//! Ĥ = Σ H_jk a†_j a_k is built from truncated ladder matrices, and exp(iĤ)
//! is applied to a dense state vector over a truncated multi-mode Fock
//! space. Nothing here shares code with the polynomial substitution engine
//! beyond the element matrices themselves.

mod dense;
mod lift;
mod unitary;

pub use dense::{compare, compare_coherent, default_n_max, oracle_input, oracle_simulate, DenseFockVector, OracleRun};
pub use lift::{lift_hamiltonian, lift_to_fock, FockBlock, LiftedOperator};
pub use unitary::{element_action, mode_unitary, unitary_log, ElementAction, ModeUnitary};

use crate::algebra::ModeId;
use crate::elements::{CircularConvention, ElementError};

/// Default bound on the dimension of any lifted Fock-space operator.
pub const DEFAULT_DIM_CAP: usize = 4096;
/// Bound on the length of a dense state vector (16 bytes per entry).
pub const MAX_VECTOR_DIM: usize = 1 << 22;
/// Unitarity tolerance for mode matrices.
pub const UNITARY_TOL: f64 = 1e-10;
/// Deviation below which engine and oracle are considered equal.
pub const AGREEMENT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("truncated space has dimension {dim}, above the cap {cap}; try --truncation {suggested_n_max}")]
    DimensionCap {
        dim: usize,
        cap: usize,
        suggested_n_max: u32,
    },
    #[error("truncation mismatch: {0}")]
    TruncationMismatch(String),
    #[error("element on line {line}: {source}")]
    Element { line: usize, source: ElementError },
    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("could not diagonalize the mode unitary")]
    Decomposition,
    #[error("mode lists differ: {left:?} vs {right:?}")]
    ModeMismatch { left: Vec<ModeId>, right: Vec<ModeId> },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    /// Per-mode truncation; `None` picks [`default_n_max`].
    pub n_max: Option<u32>,
    pub dim_cap: usize,
    pub vector_cap: usize,
    pub circular: CircularConvention,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            n_max: None,
            dim_cap: DEFAULT_DIM_CAP,
            vector_cap: MAX_VECTOR_DIM,
            circular: CircularConvention::Real,
        }
    }
}

/// `(n_max + 1)^modes`, or `None` on overflow.
pub(crate) fn truncated_dim(n_max: u32, modes: usize) -> Option<usize> {
    (n_max as usize + 1).checked_pow(u32::try_from(modes).ok()?)
}

/// Largest truncation whose spaces fit: `(n+1)^m ≤ cap` for every `(m, cap)`.
pub(crate) fn largest_fitting_n_max(limits: &[(usize, usize)]) -> u32 {
    let fits = |n: u32| {
        limits
            .iter()
            .all(|&(m, cap)| truncated_dim(n, m).is_some_and(|d| d <= cap))
    };
    let mut n = 0;
    while n < 1024 && fits(n + 1) {
        n += 1;
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suggestion_respects_every_limit() {
        assert_eq!(largest_fitting_n_max(&[(4, 4096)]), 7);
        assert_eq!(largest_fitting_n_max(&[(4, 4096), (12, MAX_VECTOR_DIM)]), 2);
        assert_eq!(largest_fitting_n_max(&[(13, 4096)]), 0);
        assert_eq!(truncated_dim(1, 64), None);
    }
}
