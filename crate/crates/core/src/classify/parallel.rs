//! Sufficient condition for perfect parallel discrimination with `N` uses:
//! a state `ρ` on `(C^d)^{⊗N}` with `<x_I|ρ|y_I> = 0` for every multi-index.

use serde::{Deserialize, Serialize};

use super::feasibility::{search_density, FeasibilityOptions};
use super::span::{build_span, HermitianSlice, OperatorSubspace};
use crate::error::{Error, Result};
use crate::matcore::{kron, kron_ket, vectorize, CMatrix, Ket};
use crate::povm::PovmPair;
use crate::scalar::Scalar;
use crate::tol::Tolerances;

/// Largest number of uses accepted for dimension `d`.
pub fn max_parallel_uses(d: usize) -> usize {
    match d {
        0..=3 => 3,
        4..=7 => 2,
        _ => 1,
    }
}

#[derive(Debug, Clone)]
pub struct ParallelCheck<T: Scalar> {
    pub uses: usize,
    /// Present iff a state orthogonal on every multi-index was found.
    pub witness: Option<CMatrix<T>>,
    /// `max_I |<x_I|ρ|y_I>|` at the witness, or at the closest iterate when
    /// nothing was found.
    pub max_orthogonality: f64,
    /// Rank of the span of the product dyads.
    pub span_rank: usize,
}

/// Summary stored in a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParallelSummary {
    pub found: bool,
    pub max_orthogonality: f64,
}

impl<T: Scalar> From<&ParallelCheck<T>> for ParallelSummary {
    fn from(p: &ParallelCheck<T>) -> Self {
        Self {
            found: p.witness.is_some(),
            max_orthogonality: p.max_orthogonality,
        }
    }
}

/// Orthonormal basis of `span{|x_I><y_I|}` on `N` copies: tensor products of
/// an orthonormal basis of the single-copy span are already orthonormal.
fn product_span<T: Scalar>(single: &OperatorSubspace<T>, uses: usize) -> OperatorSubspace<T> {
    let d = single.dim();
    let mut ops: Vec<CMatrix<T>> = vec![CMatrix::identity(1, 1)];
    let base = single.basis();
    for _ in 0..uses {
        ops = ops.iter().flat_map(|a| base.iter().map(move |b| kron(a, b))).collect();
    }
    let big = d.pow(uses as u32);
    let cols: Vec<Ket<T>> = ops.iter().map(|o| vectorize(o).expect("square")).collect();
    let basis = if cols.is_empty() {
        CMatrix::zeros(big * big, 0)
    } else {
        CMatrix::from_columns(&cols)
    };
    OperatorSubspace::from_orthonormal(big, basis)
}

/// `|x_I>` for every multi-index, in lexicographic order.
fn product_kets<T: Scalar>(vs: &[Ket<T>], uses: usize) -> Vec<Ket<T>> {
    let mut out = vec![Ket::from_element(1, crate::matcore::cre(T::one()))];
    for _ in 0..uses {
        out = out.iter().flat_map(|a| vs.iter().map(move |v| kron_ket(a, v))).collect();
    }
    out
}

/// `max_I |<x_I|ρ|y_I>|` over all `m^N` multi-indices.
pub fn max_orthogonality<T: Scalar>(pair: &PovmPair<T>, rho: &CMatrix<T>, uses: usize) -> f64 {
    let xs = product_kets(pair.first.vectors(), uses);
    let ys = product_kets(pair.second.vectors(), uses);
    xs.iter()
        .zip(&ys)
        .map(|(x, y)| (x.adjoint() * rho * y)[(0, 0)].norm_sqr().sqrt().to_f64_lossy())
        .fold(0.0, f64::max)
}

pub fn parallel_check<T: Scalar>(
    pair: &PovmPair<T>,
    uses: usize,
    opts: &FeasibilityOptions,
    tol: &Tolerances,
) -> Result<ParallelCheck<T>> {
    let d = pair.dim();
    if uses == 0 {
        return Err(Error::InvalidShape("number of uses must be at least 1".into()));
    }
    if uses > max_parallel_uses(d) {
        return Err(Error::BudgetExceeded(format!(
            "parallel check with N = {uses} uses at d = {d} (limit N <= {})",
            max_parallel_uses(d)
        )));
    }
    let single = build_span(pair, tol)?;
    let span = product_span(&single, uses);
    let slice = HermitianSlice::orthogonal_to(&span, tol.rank_rel)?;
    let search = search_density(&slice, opts, tol);

    let (witness, max_orth) = match search.witness {
        Some(w) => {
            let o = max_orthogonality(pair, &w, uses);
            if o < tol.parallel_orthogonality {
                (Some(w), o)
            } else {
                (None, o)
            }
        }
        None => (None, max_orthogonality(pair, &search.best_point, uses)),
    };
    Ok(ParallelCheck {
        uses,
        witness,
        max_orthogonality: max_orth,
        span_rank: span.rank(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{c, min_eigenvalue, trace};
    use crate::povm::{sample_random_povm, RankOnePovm, DEFAULT_SIC_PERMUTATION};
    use crate::rng;

    fn basis_povm(order: &[usize]) -> RankOnePovm<f64> {
        let d = order.len();
        let vs = order
            .iter()
            .map(|&k| {
                let mut v = Ket::zeros(d);
                v[k] = c(1.0, 0.0);
                v
            })
            .collect();
        RankOnePovm::new(d, vs, &Tolerances::default()).unwrap()
    }

    #[test]
    fn swapped_basis_is_parallel_distinguishable_in_one_use() {
        // <x_i|ρ|y_i> = ρ_01 and ρ_10 for x = (e1, e2), y = (e2, e1).
        let tol = Tolerances::default();
        let pair = PovmPair::new(basis_povm(&[0, 1]), basis_povm(&[1, 0])).unwrap();
        let out = parallel_check(&pair, 1, &FeasibilityOptions::default(), &tol).unwrap();
        let w = out.witness.expect("diagonal states work");
        assert!(out.max_orthogonality < 1e-8);
        assert!(w[(0, 1)].norm() < 1e-8);
        assert!((trace(&w).re - 1.0).abs() < 1e-10);
        assert!(min_eigenvalue(&w) >= -1e-12);
    }

    #[test]
    fn identical_pair_has_no_witness() {
        let tol = Tolerances::default();
        let p = sample_random_povm::<f64, _>(2, 3, &mut rng::stream(31, 0), &tol).unwrap();
        let pair = PovmPair::new(p.clone(), p).unwrap();
        for n in 1..=2 {
            let out = parallel_check(&pair, n, &FeasibilityOptions::default(), &tol).unwrap();
            assert!(out.witness.is_none(), "N = {n}");
        }
    }

    #[test]
    fn sic_pair_has_no_parallel_witness() {
        let tol = Tolerances::default();
        let pair = PovmPair::<f64>::sic(3, &DEFAULT_SIC_PERMUTATION, &tol).unwrap();
        for n in 1..=2 {
            let out = parallel_check(&pair, n, &FeasibilityOptions::default(), &tol).unwrap();
            assert!(out.witness.is_none());
            assert!(out.max_orthogonality > 1e-4, "N = {n}: {}", out.max_orthogonality);
            assert_eq!(out.span_rank, 8usize.pow(n as u32));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let tol = Tolerances::default();
        let pair = PovmPair::<f64>::sic(3, &DEFAULT_SIC_PERMUTATION, &tol).unwrap();
        assert!(matches!(
            parallel_check(&pair, 4, &FeasibilityOptions::default(), &tol),
            Err(Error::BudgetExceeded(_))
        ));
        assert!(parallel_check(&pair, 0, &FeasibilityOptions::default(), &tol).is_err());
        assert_eq!(max_parallel_uses(7), 2);
        assert_eq!(max_parallel_uses(8), 1);
    }

    #[test]
    fn witnesses_satisfy_orthogonality_on_every_multi_index() {
        let tol = Tolerances::default();
        let pair = PovmPair::new(basis_povm(&[0, 1, 2]), basis_povm(&[1, 2, 0])).unwrap();
        for n in 1..=2 {
            let out = parallel_check(&pair, n, &FeasibilityOptions::default(), &tol).unwrap();
            let w = out.witness.expect("permuted bases are parallel distinguishable");
            assert!(max_orthogonality(&pair, &w, n) < 1e-8);
        }
    }
}
