use serde::{Deserialize, Serialize};

/// Numerical thresholds used across the crate.
///
/// Defaults are tuned for `f64`. Values are stored as `f64` and converted to
/// the working scalar at the point of use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Algebraic identities (isometry checks, Hermiticity, trace).
    pub atol: f64,
    /// Allowed Gram-matrix deviation when completing an isometry.
    pub gram_tol: f64,
    /// Max-norm deviation of a POVM's effect sum from the identity.
    pub completeness: f64,
    /// Allowed deviation of SIC overlaps from `1/(d+1)`.
    pub sic_overlap: f64,
    /// Numerical rank cutoff relative to the leading singular value.
    pub rank_rel: f64,
    /// Normalised residual below which the identity counts as in the span.
    pub identity: f64,
    /// Minimum eigenvalue of the pairwise Gram matrix for linear independence.
    pub independence: f64,
    /// Frobenius residual for membership of a witness in a subspace.
    pub span_residual: f64,
    /// Step size at which alternating projections are considered converged.
    pub converge_step: f64,
    /// Minimum eigenvalue for a witness to count as full rank.
    pub full_rank: f64,
    /// Norm below which a conditional state is treated as zero.
    pub zero_norm: f64,
    /// Max `|<x_I|rho|y_I>|` accepted for a parallel witness.
    pub parallel_orthogonality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            atol: 1e-10,
            gram_tol: 1e-8,
            completeness: 1e-9,
            sic_overlap: 1e-8,
            rank_rel: 1e-10,
            identity: 1e-8,
            independence: 1e-10,
            span_residual: 1e-8,
            converge_step: 1e-10,
            full_rank: 1e-7,
            zero_norm: 1e-12,
            parallel_orthogonality: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn with_atol(mut self, atol: f64) -> Self {
        self.atol = atol;
        self
    }
}
