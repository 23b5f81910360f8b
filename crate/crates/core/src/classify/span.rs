//! Subspaces of `d x d` operators under the Hilbert-Schmidt inner product.

use crate::error::Result;
use crate::matcore::{
    dyad, hermitian_part, orthonormal_columns, orthonormal_complement, unvectorize, vectorize, CMatrix,
};
use crate::povm::PovmPair;
use crate::scalar::Scalar;
use crate::tol::Tolerances;

/// Orthonormal basis of a subspace of `L(C^d)`, stored as the columns of a
/// `d^2 x rank` matrix of vectorized operators.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSubspace<T: Scalar> {
    dim: usize,
    basis: CMatrix<T>,
}

impl<T: Scalar> OperatorSubspace<T> {
    /// Span of `generators`, rank cut at `rank_rel` of the top singular value.
    pub fn from_generators(dim: usize, generators: &[CMatrix<T>], rank_rel: f64) -> Result<Self> {
        let n = dim * dim;
        let cols = generators.iter().map(vectorize).collect::<Result<Vec<_>>>()?;
        let m = if cols.is_empty() {
            CMatrix::zeros(n, 0)
        } else {
            CMatrix::from_columns(&cols)
        };
        Ok(Self {
            dim,
            basis: orthonormal_columns(&m, T::lit(rank_rel))?,
        })
    }

    /// Wraps columns that are already orthonormal.
    pub fn from_orthonormal(dim: usize, basis: CMatrix<T>) -> Self {
        debug_assert_eq!(basis.nrows(), dim * dim);
        Self { dim, basis }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    /// Vectorized basis, one operator per column.
    pub fn basis_columns(&self) -> &CMatrix<T> {
        &self.basis
    }

    pub fn basis_matrix(&self, k: usize) -> CMatrix<T> {
        unvectorize(&self.basis.column(k).into_owned(), self.dim, self.dim).expect("square basis element")
    }

    pub fn basis(&self) -> Vec<CMatrix<T>> {
        (0..self.rank()).map(|k| self.basis_matrix(k)).collect()
    }

    pub fn project(&self, x: &CMatrix<T>) -> CMatrix<T> {
        let v = vectorize(x).expect("square operator");
        let coeffs = self.basis.adjoint() * &v;
        unvectorize(&(&self.basis * coeffs), self.dim, self.dim).expect("square operator")
    }

    /// `‖X − P(X)‖_F`.
    pub fn residual(&self, x: &CMatrix<T>) -> T {
        (x - self.project(x)).norm()
    }

    /// Orthogonal complement, basis chosen by pivoted Gram-Schmidt of the
    /// matrix units; this fixes the canonical order of its elements.
    pub fn complement(&self) -> Self {
        Self {
            dim: self.dim,
            basis: orthonormal_complement(&self.basis),
        }
    }

    /// `{X†: X in self}`.
    pub fn adjoint_space(&self) -> Self {
        let cols: Vec<_> = (0..self.rank())
            .map(|k| vectorize(&self.basis_matrix(k).adjoint()).expect("square"))
            .collect();
        let basis = if cols.is_empty() {
            CMatrix::zeros(self.dim * self.dim, 0)
        } else {
            CMatrix::from_columns(&cols)
        };
        Self { dim: self.dim, basis }
    }
}

/// `span{|x_i><y_i|}`, the span of `E_i† F_j` for the canonical Kraus
/// operators `E_i = |i><x_i|`, `F_j = |j><y_j|` of a rank-one pair.
pub fn build_span<T: Scalar>(pair: &PovmPair<T>, tol: &Tolerances) -> Result<OperatorSubspace<T>> {
    let gens: Vec<_> = pair
        .first
        .vectors()
        .iter()
        .zip(pair.second.vectors())
        .map(|(x, y)| dyad(x, y))
        .collect();
    OperatorSubspace::from_generators(pair.dim(), &gens, tol.rank_rel)
}

/// Identity-membership test: residual is `‖1 − P(1)‖_F / √d`.
pub fn identity_in_span<T: Scalar>(s: &OperatorSubspace<T>, tol: &Tolerances) -> (bool, f64) {
    let d = s.dim();
    let id = CMatrix::<T>::identity(d, d);
    let residual = s.residual(&id).to_f64_lossy() / (d as f64).sqrt();
    (residual < tol.identity, residual)
}

/// Hermitian operators orthogonal to a subspace `K`.
///
/// Hermitian `X ⊥ K` iff `X ⊥ K + K†`, and the complement of `K + K†` is
/// closed under `†`, so projecting a Hermitian operator onto it stays
/// Hermitian. That gives the metric projection onto the real subspace
/// `Herm ∩ K^⊥`.
#[derive(Debug, Clone)]
pub struct HermitianSlice<T: Scalar> {
    dim: usize,
    excluded: CMatrix<T>,
}

impl<T: Scalar> HermitianSlice<T> {
    pub fn orthogonal_to(k: &OperatorSubspace<T>, rank_rel: f64) -> Result<Self> {
        let adj = k.adjoint_space();
        let stacked = if k.rank() == 0 {
            CMatrix::zeros(k.dim() * k.dim(), 0)
        } else {
            let cols: Vec<_> = k
                .basis_columns()
                .column_iter()
                .chain(adj.basis_columns().column_iter())
                .map(|c| c.into_owned())
                .collect();
            CMatrix::from_columns(&cols)
        };
        Ok(Self {
            dim: k.dim(),
            excluded: orthonormal_columns(&stacked, T::lit(rank_rel))?,
        })
    }

    /// Hermitian elements of `s`.
    pub fn within(s: &OperatorSubspace<T>, rank_rel: f64) -> Result<Self> {
        Self::orthogonal_to(&s.complement(), rank_rel)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Real dimension of the slice.
    pub fn real_dimension(&self) -> usize {
        self.dim * self.dim - self.excluded.ncols()
    }

    /// Projects the Hermitian part of `x` onto the slice.
    pub fn project(&self, x: &CMatrix<T>) -> CMatrix<T> {
        let h = hermitian_part(x);
        let v = vectorize(&h).expect("square operator");
        let coeffs = self.excluded.adjoint() * &v;
        let out = unvectorize(&(v - &self.excluded * coeffs), self.dim, self.dim).expect("square");
        hermitian_part(&out)
    }

    /// `‖X − P(X)‖_F` for Hermitian `X`.
    pub fn residual(&self, x: &CMatrix<T>) -> T {
        (x - self.project(x)).norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{c, hs_inner, Ket};
    use crate::povm::{RankOnePovm, DEFAULT_SIC_PERMUTATION, sample_random_povm};
    use crate::rng;

    fn basis_povm(d: usize, order: &[usize]) -> RankOnePovm<f64> {
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
    fn computational_basis_span_is_diagonal() {
        let tol = Tolerances::default();
        let p = basis_povm(2, &[0, 1]);
        let s = build_span(&PovmPair::new(p.clone(), p).unwrap(), &tol).unwrap();
        assert_eq!(s.rank(), 2);
        let mut off = CMatrix::<f64>::zeros(2, 2);
        off[(0, 1)] = c(1.0, 0.0);
        assert!(s.project(&off).norm() < 1e-14);
        let diag = CMatrix::from_diagonal(&Ket::from_vec(vec![c(0.3, 0.0), c(-2.0, 0.0)]));
        assert!(s.residual(&diag) < 1e-14);
        assert!(identity_in_span(&s, &tol).0);
    }

    #[test]
    fn sic_pair_span_is_rank_deficient() {
        let tol = Tolerances::default();
        let pair = PovmPair::<f64>::sic(3, &DEFAULT_SIC_PERMUTATION, &tol).unwrap();
        let s = build_span(&pair, &tol).unwrap();
        assert!(s.rank() < 9);
        assert_eq!(s.rank(), 8);
        let (inside, residual) = identity_in_span(&s, &tol);
        assert!(!inside);
        assert!(residual > 1e-3);
        // Value derived by independent evaluation of the same projection.
        assert!((residual - 0.408_248_290_463_863).abs() < 1e-9, "{residual}");
    }

    #[test]
    fn generic_full_effect_count_spans_everything() {
        let tol = Tolerances::default();
        let mut r = rng::stream(21, 0);
        let pair = PovmPair::new(
            sample_random_povm::<f64, _>(2, 4, &mut r, &tol).unwrap(),
            sample_random_povm::<f64, _>(2, 4, &mut r, &tol).unwrap(),
        )
        .unwrap();
        let s = build_span(&pair, &tol).unwrap();
        assert_eq!(s.rank(), 4);
        assert!(identity_in_span(&s, &tol).0);
    }

    #[test]
    fn basis_is_orthonormal_and_reconstructs_generators() {
        let tol = Tolerances::default();
        let mut r = rng::stream(22, 0);
        let pair = PovmPair::new(
            sample_random_povm::<f64, _>(3, 5, &mut r, &tol).unwrap(),
            sample_random_povm::<f64, _>(3, 5, &mut r, &tol).unwrap(),
        )
        .unwrap();
        let s = build_span(&pair, &tol).unwrap();
        let b = s.basis();
        for (i, bi) in b.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((hs_inner(bi, bj) - c(expect, 0.0)).norm() < 1e-10);
            }
        }
        for (x, y) in pair.first.vectors().iter().zip(pair.second.vectors()) {
            assert!(s.residual(&dyad(x, y)) < 1e-9);
        }
        assert!(s.rank() <= 5);
    }

    #[test]
    fn identical_pair_contains_identity() {
        let tol = Tolerances::default();
        let p = sample_random_povm::<f64, _>(3, 6, &mut rng::stream(23, 0), &tol).unwrap();
        let s = build_span(&PovmPair::new(p.clone(), p).unwrap(), &tol).unwrap();
        assert!(identity_in_span(&s, &tol).0);
    }

    #[test]
    fn hermitian_slice_of_off_diagonal_unit_is_trivial() {
        let mut e01 = CMatrix::<f64>::zeros(2, 2);
        e01[(0, 1)] = c(1.0, 0.0);
        let s = OperatorSubspace::from_generators(2, &[e01], 1e-10).unwrap();
        let slice = HermitianSlice::within(&s, 1e-10).unwrap();
        assert_eq!(slice.real_dimension(), 0);
    }

    #[test]
    fn hermitian_slice_projection_is_idempotent_and_hermitian() {
        let tol = Tolerances::default();
        let pair = PovmPair::<f64>::sic(3, &DEFAULT_SIC_PERMUTATION, &tol).unwrap();
        let s = build_span(&pair, &tol).unwrap();
        let slice = HermitianSlice::within(&s, tol.rank_rel).unwrap();
        let x = CMatrix::<f64>::from_fn(3, 3, |i, j| c((i + 2 * j) as f64, (i as f64) - (j as f64)));
        let p = slice.project(&x);
        assert!((&p - p.adjoint()).norm() < 1e-14);
        assert!((slice.project(&p) - &p).norm() < 1e-12);
        assert!(s.residual(&p) < 1e-12);
    }
}
