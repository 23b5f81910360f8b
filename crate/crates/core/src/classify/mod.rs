//! Distinguishability verdicts for pairs of rank-one POVMs.
//!
//! Two operations with Kraus operators `{E_i}`, `{F_j}` are perfectly
//! distinguishable with finitely many uses iff they are disjoint and
//! `1 ∉ span{E_i† F_j}`. If that span also holds a positive definite
//! operator, no parallel strategy works and an adaptive one is required.
//! For rank-one POVMs the span is `span{|x_i><y_i|}`.

mod feasibility;
mod parallel;
mod span;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use feasibility::{
    alternating_projections, find_positive_in_span, random_density, search_density, ApRun, DensitySearch,
    FeasibilityOptions,
};
pub use parallel::{max_orthogonality, max_parallel_uses, parallel_check, ParallelCheck, ParallelSummary};
pub use span::{build_span, identity_in_span, HermitianSlice, OperatorSubspace};

use crate::error::Result;
use crate::json::{matrix_out, JsonMatrix};
use crate::matcore::{cre, CMatrix};
use crate::povm::PovmPair;
use crate::scalar::Scalar;
use crate::tol::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Category {
    NotPerfectlyDistinguishable,
    AdaptiveOnly,
    #[serde(rename = "FiniteDistinguishable_ParallelUndetermined")]
    FiniteDistinguishableParallelUndetermined,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::NotPerfectlyDistinguishable => "NotPerfectlyDistinguishable",
            Category::AdaptiveOnly => "AdaptiveOnly",
            Category::FiniteDistinguishableParallelUndetermined => "FiniteDistinguishable_ParallelUndetermined",
        }
    }
}

impl std::fmt::Display for Category {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Smallest eigenvalue over `i` of the Gram matrix of `(x_i, y_i)`.
pub fn min_pair_gram_eigenvalue<T: Scalar>(pair: &PovmPair<T>) -> f64 {
    pair.first
        .vectors()
        .iter()
        .zip(pair.second.vectors())
        .map(|(x, y)| {
            let a = x.norm_squared().to_f64_lossy();
            let b = y.norm_squared().to_f64_lossy();
            let c = x.dotc(y).norm_sqr().to_f64_lossy();
            let half = 0.5 * (a + b);
            let disc = (0.25 * (a - b) * (a - b) + c).sqrt();
            // a*b - c is the determinant; this form keeps precision when the
            // smaller eigenvalue is tiny.
            let det = a * b - c;
            if half + disc > 0.0 {
                det / (half + disc)
            } else {
                0.0
            }
        })
        .fold(f64::INFINITY, f64::min)
}

/// Entanglement-assisted disjointness of the two measurement channels,
/// decided through pairwise linear independence of `x_i` and `y_i`.
pub fn disjoint<T: Scalar>(pair: &PovmPair<T>, tol: &Tolerances) -> bool {
    min_pair_gram_eigenvalue(pair) > tol.independence
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub feasibility: FeasibilityOptions,
    /// Numbers of uses for which to run the parallel check.
    pub parallel_uses: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Verdict<T: Scalar> {
    pub identity_in_span: bool,
    pub identity_residual: f64,
    pub span_rank: usize,
    pub disjoint: bool,
    pub min_pair_gram_eigenvalue: f64,
    /// A full-rank density operator was found in the span.
    pub positive_in_span: bool,
    pub witness_state: Option<CMatrix<T>>,
    pub witness_min_eigenvalue: Option<f64>,
    pub category: Category,
    pub parallel_certificates: BTreeMap<usize, ParallelSummary>,
}

pub fn classify<T: Scalar>(pair: &PovmPair<T>, opts: &ClassifyOptions, tol: &Tolerances) -> Result<Verdict<T>> {
    pair.validate(tol)?;
    let span = build_span(pair, tol)?;
    let (id_in, id_res) = identity_in_span(&span, tol);
    let gram_min = min_pair_gram_eigenvalue(pair);
    let is_disjoint = gram_min > tol.independence;

    let (positive, witness, witness_min) = if id_in {
        // The maximally mixed state is then a full-rank witness.
        let d = pair.dim();
        let w = CMatrix::<T>::identity(d, d) / cre(T::from_usize(d).unwrap());
        (true, Some(w), Some(1.0 / d as f64))
    } else {
        let search = find_positive_in_span(&span, &opts.feasibility, tol)?;
        if search.full_rank {
            (true, search.witness, search.min_eigenvalue)
        } else {
            (false, None, None)
        }
    };

    let category = if id_in || !is_disjoint {
        Category::NotPerfectlyDistinguishable
    } else if positive {
        Category::AdaptiveOnly
    } else {
        Category::FiniteDistinguishableParallelUndetermined
    };

    let mut parallel_certificates = BTreeMap::new();
    for &n in &opts.parallel_uses {
        let check = parallel_check(pair, n, &opts.feasibility, tol)?;
        parallel_certificates.insert(n, ParallelSummary::from(&check));
    }

    Ok(Verdict {
        identity_in_span: id_in,
        identity_residual: id_res,
        span_rank: span.rank(),
        disjoint: is_disjoint,
        min_pair_gram_eigenvalue: gram_min,
        positive_in_span: positive,
        witness_state: witness,
        witness_min_eigenvalue: witness_min,
        category,
        parallel_certificates,
    })
}

/// JSON form of a [`Verdict`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictFile {
    pub category: Category,
    pub identity_in_span: bool,
    pub identity_residual: f64,
    pub span_rank: usize,
    pub disjoint: bool,
    pub min_pair_gram_eigenvalue: f64,
    pub positive_in_span: bool,
    pub witness_min_eigenvalue: Option<f64>,
    pub witness_state: Option<JsonMatrix>,
    /// Keyed by number of uses.
    pub parallel_certificates: BTreeMap<String, ParallelSummary>,
}

impl<T: Scalar> From<&Verdict<T>> for VerdictFile {
    fn from(v: &Verdict<T>) -> Self {
        Self {
            category: v.category,
            identity_in_span: v.identity_in_span,
            identity_residual: v.identity_residual,
            span_rank: v.span_rank,
            disjoint: v.disjoint,
            min_pair_gram_eigenvalue: v.min_pair_gram_eigenvalue,
            positive_in_span: v.positive_in_span,
            witness_min_eigenvalue: v.witness_min_eigenvalue,
            witness_state: v.witness_state.as_ref().map(matrix_out),
            parallel_certificates: v
                .parallel_certificates
                .iter()
                .map(|(k, s)| (k.to_string(), *s))
                .collect(),
        }
    }
}
