use super::residual_state;
use crate::matcore::{dyad, hermitian_eigen};
use crate::povm::PovmPair;
use crate::scalar::Scalar;

/// `1/2 + ‖ρ_1 − ρ_2‖_1 / 4` for one use on the maximally entangled input,
/// where `ρ_k = Σ_i |i><i| ⊗ (outcome-i residual state)` under hypothesis k.
///
/// `ρ_1 − ρ_2` is block diagonal in the classical outcome, so the trace norm
/// is a sum over `d x d` blocks.
pub fn helstrom_lower_bound<T: Scalar>(pair: &PovmPair<T>) -> f64 {
    let norm: f64 = pair
        .first
        .vectors()
        .iter()
        .zip(pair.second.vectors())
        .map(|(x, y)| {
            let a = residual_state(x);
            let b = residual_state(y);
            let block = dyad(&a, &a) - dyad(&b, &b);
            let (eigs, _) = hermitian_eigen(&block);
            eigs.iter().map(|e| e.abs().to_f64_lossy()).sum::<f64>()
        })
        .sum();
    (0.5 + 0.25 * norm).clamp(0.5, 1.0)
}
