//! Alternating projections between a Hermitian slice and the set of density
//! operators.

use serde::{Deserialize, Serialize};

use super::span::{HermitianSlice, OperatorSubspace};
use crate::error::Result;
use crate::matcore::{cre, min_eigenvalue, nearest_density, trace, CMatrix};
use crate::povm::ginibre;
use crate::rng;
use crate::scalar::Scalar;
use crate::tol::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityOptions {
    pub max_iter: usize,
    pub restarts: usize,
    /// Master seed; restart `k` draws its start from stream `k`.
    pub seed: u64,
}

impl Default for FeasibilityOptions {
    fn default() -> Self {
        Self {
            max_iter: 5000,
            restarts: 8,
            seed: 0x5eed,
        }
    }
}

/// Outcome of one alternating-projection run.
#[derive(Debug, Clone)]
pub struct ApRun<T: Scalar> {
    /// Final density-operator iterate.
    pub point: CMatrix<T>,
    pub iterations: usize,
    /// Last step fell below the convergence threshold.
    pub converged: bool,
    /// Distance of `point` from the slice.
    pub residual: T,
}

/// Runs `X <- nearest_density(P(X))` from `start` until the step is below
/// `tol.converge_step` or `max_iter` is reached.
pub fn alternating_projections<T: Scalar>(
    slice: &HermitianSlice<T>,
    start: CMatrix<T>,
    max_iter: usize,
    tol: &Tolerances,
) -> ApRun<T> {
    let step_tol = T::lit(tol.converge_step);
    let mut x = nearest_density(&start);
    let mut converged = false;
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let next = nearest_density(&slice.project(&x));
        let step = (&next - &x).norm();
        x = next;
        if step < step_tol {
            converged = true;
            break;
        }
    }
    let residual = slice.residual(&x);
    ApRun { point: x, iterations, converged, residual }
}

/// Random density operator `G G† / Tr(G G†)` with `G` Ginibre.
pub fn random_density<T: Scalar>(d: usize, rng: &mut rng::StreamRng) -> CMatrix<T> {
    let g: CMatrix<T> = ginibre(d, d, rng);
    let rho = &g * g.adjoint();
    let tr = trace(&rho).re;
    rho / cre(tr)
}

/// Result of searching a slice for a density operator.
#[derive(Debug, Clone)]
pub struct DensitySearch<T: Scalar> {
    /// Average of all successful runs, if any.
    pub witness: Option<CMatrix<T>>,
    pub min_eigenvalue: Option<f64>,
    /// Witness present and its smallest eigenvalue exceeds `tol.full_rank`.
    pub full_rank: bool,
    pub successful_runs: usize,
    pub runs: usize,
    /// Iterate with the smallest distance to the slice over all runs.
    pub best_point: CMatrix<T>,
    pub best_residual: f64,
}

/// Searches `slice` for a density operator from `restarts` random starts.
///
/// A run succeeds when its final iterate lies within `tol.span_residual` of
/// the slice. Successful points are averaged in restart order; the average
/// stays in the (convex) intersection and is pushed towards its relative
/// interior. Not finding anything is not a proof of infeasibility.
pub fn search_density<T: Scalar>(
    slice: &HermitianSlice<T>,
    opts: &FeasibilityOptions,
    tol: &Tolerances,
) -> DensitySearch<T> {
    let d = slice.dim();
    let span_tol = T::lit(tol.span_residual);
    let mut successes: Vec<CMatrix<T>> = Vec::new();
    let mut best: Option<(T, CMatrix<T>)> = None;
    let restarts = opts.restarts.max(1);
    for k in 0..restarts {
        let start = random_density(d, &mut rng::stream(opts.seed, k as u64));
        let run = alternating_projections(slice, start, opts.max_iter, tol);
        if best.as_ref().is_none_or(|(r, _)| run.residual < *r) {
            best = Some((run.residual, run.point.clone()));
        }
        if run.residual < span_tol {
            successes.push(run.point);
        }
    }
    let (best_residual, best_point) = best.expect("at least one run");
    let successful_runs = successes.len();
    let witness = (!successes.is_empty()).then(|| {
        let n = cre(T::from_usize(successes.len()).unwrap());
        successes.iter().fold(CMatrix::zeros(d, d), |acc, x| acc + x) / n
    });
    let min_eig = witness.as_ref().map(|w| min_eigenvalue(w).to_f64_lossy());
    DensitySearch {
        full_rank: min_eig.is_some_and(|e| e > tol.full_rank),
        witness,
        min_eigenvalue: min_eig,
        successful_runs,
        runs: restarts,
        best_point,
        best_residual: best_residual.to_f64_lossy(),
    }
}

/// Looks for a density operator inside `span`; a full-rank one means the
/// span contains a positive definite operator.
pub fn find_positive_in_span<T: Scalar>(
    span: &OperatorSubspace<T>,
    opts: &FeasibilityOptions,
    tol: &Tolerances,
) -> Result<DensitySearch<T>> {
    let slice = HermitianSlice::within(span, tol.rank_rel)?;
    Ok(search_density(&slice, opts, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::span::build_span;
    use crate::matcore::{c, hermitian_eigen, Ket};
    use crate::povm::{PovmPair, DEFAULT_SIC_PERMUTATION};

    fn unit(d: usize, i: usize, j: usize) -> CMatrix<f64> {
        let mut m = CMatrix::zeros(d, d);
        m[(i, j)] = c(1.0, 0.0);
        m
    }

    #[test]
    fn diagonal_span_yields_full_rank_witness() {
        let tol = Tolerances::default();
        let s = OperatorSubspace::from_generators(2, &[unit(2, 0, 0), unit(2, 1, 1)], 1e-10).unwrap();
        let out = find_positive_in_span(&s, &FeasibilityOptions::default(), &tol).unwrap();
        assert!(out.full_rank);
        let w = out.witness.unwrap();
        assert!(s.residual(&w) < 1e-8);
        assert!((trace(&w).re - 1.0).abs() < 1e-10);
        assert!(out.min_eigenvalue.unwrap() > 1e-7);
    }

    #[test]
    fn off_diagonal_span_has_no_density() {
        let tol = Tolerances::default();
        let s = OperatorSubspace::from_generators(2, &[unit(2, 0, 1)], 1e-10).unwrap();
        let out = find_positive_in_span(&s, &FeasibilityOptions::default(), &tol).unwrap();
        assert!(out.witness.is_none());
        assert!(!out.full_rank);
        assert!(out.best_residual > 0.1);
    }

    #[test]
    fn sic_pair_span_contains_a_positive_definite_state() {
        let tol = Tolerances::default();
        let pair = PovmPair::<f64>::sic(3, &DEFAULT_SIC_PERMUTATION, &tol).unwrap();
        let s = build_span(&pair, &tol).unwrap();
        let out = find_positive_in_span(&s, &FeasibilityOptions::default(), &tol).unwrap();
        assert!(out.full_rank, "min eigenvalue {:?}", out.min_eigenvalue);
        let w = out.witness.unwrap();
        let (eigs, _) = hermitian_eigen(&w);
        assert!(eigs[0] > 1e-7);
        assert!(s.residual(&w) < 1e-8);
        assert!((trace(&w).re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rank_deficient_intersection_is_not_full_rank() {
        // span{|0><0|, |0><1|}: only |0><0| is a density operator in it.
        let tol = Tolerances::default();
        let s = OperatorSubspace::from_generators(2, &[unit(2, 0, 0), unit(2, 0, 1)], 1e-10).unwrap();
        let out = find_positive_in_span(&s, &FeasibilityOptions::default(), &tol).unwrap();
        let w = out.witness.expect("|0><0| is feasible");
        assert!(!out.full_rank);
        let e0 = CMatrix::from_diagonal(&Ket::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]));
        assert!((w - e0).norm() < 1e-8);
    }

    #[test]
    fn search_is_deterministic_in_seed() {
        let tol = Tolerances::default();
        let pair = PovmPair::<f64>::sic(3, &DEFAULT_SIC_PERMUTATION, &tol).unwrap();
        let s = build_span(&pair, &tol).unwrap();
        let opts = FeasibilityOptions::default();
        let a = find_positive_in_span(&s, &opts, &tol).unwrap();
        let b = find_positive_in_span(&s, &opts, &tol).unwrap();
        assert_eq!(a.witness, b.witness);
    }
}
