//! Dense complex linear algebra shared by the rest of the crate.
//!
//! Tensor products are ordered first-factor-major: the basis vector
//! `|a>|b>` of `C^d ⊗ C^k` has index `a * k + b`. Vectorization follows
//! `|X>> = (X ⊗ 1) Σ_i |i>|i>`, which under that ordering is the row-major
//! flattening of `X`.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type C<T> = Complex<T>;
pub type CMatrix<T> = DMatrix<Complex<T>>;
pub type Ket<T> = DVector<Complex<T>>;

#[inline]
pub fn c<T: Scalar>(re: f64, im: f64) -> C<T> {
    Complex::new(T::lit(re), T::lit(im))
}

#[inline]
pub fn czero<T: Scalar>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub fn cre<T: Scalar>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}

/// `e^{i theta}`.
#[inline]
pub fn cis<T: Scalar>(theta: T) -> C<T> {
    Complex::new(theta.cos(), theta.sin())
}

pub fn ensure_finite<T: Scalar>(m: &CMatrix<T>, what: &'static str) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Hilbert-Schmidt inner product `Tr(A† B)`.
pub fn hs_inner<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> C<T> {
    a.iter()
        .zip(b.iter())
        .fold(czero(), |acc, (x, y)| acc + x.conj() * y)
}

pub fn max_abs<T: Scalar>(m: &CMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc.max(z.norm_sqr().sqrt()))
}

pub fn trace<T: Scalar>(m: &CMatrix<T>) -> C<T> {
    m.diagonal().iter().fold(czero(), |acc, z| acc + z)
}

/// `|X>>` for a square `X`.
pub fn vectorize<T: Scalar>(x: &CMatrix<T>) -> Result<Ket<T>> {
    let (r, cols) = x.shape();
    if r != cols {
        return Err(Error::DimensionMismatch(format!(
            "vectorize expects a square matrix, got {r}x{cols}"
        )));
    }
    Ok(Ket::from_fn(r * r, |idx, _| x[(idx / r, idx % r)]))
}

/// Vectorization of a rectangular `rows x cols` operator: `Σ_j X|j> ⊗ |j>`.
pub fn vectorize_rect<T: Scalar>(x: &CMatrix<T>) -> Ket<T> {
    let (r, cols) = x.shape();
    Ket::from_fn(r * cols, |idx, _| x[(idx / cols, idx % cols)])
}

/// Inverse of [`vectorize_rect`].
pub fn unvectorize<T: Scalar>(v: &Ket<T>, rows: usize, cols: usize) -> Result<CMatrix<T>> {
    if v.len() != rows * cols {
        return Err(Error::DimensionMismatch(format!(
            "cannot reshape vector of length {} into {rows}x{cols}",
            v.len()
        )));
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| v[i * cols + j]))
}

/// Partial trace over the second factor of `C^d ⊗ C^k`.
pub fn partial_trace_second<T: Scalar>(m: &CMatrix<T>, d: usize, k: usize) -> Result<CMatrix<T>> {
    let n = d * k;
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "partial trace expects a {n}x{n} matrix for d={d}, k={k}, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(CMatrix::from_fn(d, d, |a, b| {
        (0..k).fold(czero(), |acc, c| acc + m[(a * k + c, b * k + c)])
    }))
}

pub fn kron<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    a.kronecker(b)
}

pub fn kron_ket<T: Scalar>(a: &Ket<T>, b: &Ket<T>) -> Ket<T> {
    a.kronecker(b)
}

/// Outer product `|a><b|`.
pub fn dyad<T: Scalar>(a: &Ket<T>, b: &Ket<T>) -> CMatrix<T> {
    a * b.adjoint()
}

pub fn hermitian_part<T: Scalar>(m: &CMatrix<T>) -> CMatrix<T> {
    (m + m.adjoint()) * cre(T::lit(0.5))
}

/// Thin singular value decomposition `A = U Σ V†`, singular values descending.
#[derive(Debug, Clone)]
pub struct Svd<T: Scalar> {
    pub u: CMatrix<T>,
    pub singular_values: Vec<T>,
    pub v: CMatrix<T>,
}

impl<T: Scalar> Svd<T> {
    pub fn sigma(&self) -> CMatrix<T> {
        CMatrix::from_diagonal(&Ket::from_iterator(
            self.singular_values.len(),
            self.singular_values.iter().map(|&s| cre(s)),
        ))
    }

    pub fn reconstruct(&self) -> CMatrix<T> {
        &self.u * self.sigma() * self.v.adjoint()
    }

    /// Number of singular values above `rel * σ_max`.
    pub fn rank(&self, rel: T) -> usize {
        numerical_rank(&self.singular_values, rel)
    }
}

pub fn numerical_rank<T: Scalar>(sv: &[T], rel: T) -> usize {
    match sv.first() {
        Some(&top) if top > T::zero() => sv.iter().filter(|&&s| s > rel * top).count(),
        _ => 0,
    }
}

pub fn svd<T: Scalar>(a: &CMatrix<T>) -> Result<Svd<T>> {
    ensure_finite(a, "svd input")?;
    let k = a.nrows().min(a.ncols());
    if k == 0 {
        return Ok(Svd {
            u: CMatrix::zeros(a.nrows(), 0),
            singular_values: vec![],
            v: CMatrix::zeros(a.ncols(), 0),
        });
    }
    let dec = a.clone().svd(true, true);
    let u = dec.u.expect("requested U");
    let v = dec.v_t.expect("requested V^T").adjoint();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| {
        dec.singular_values[j]
            .partial_cmp(&dec.singular_values[i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(Svd {
        u: CMatrix::from_fn(a.nrows(), k, |r, c| u[(r, order[c])]),
        singular_values: order.iter().map(|&i| dec.singular_values[i]).collect(),
        v: CMatrix::from_fn(a.ncols(), k, |r, c| v[(r, order[c])]),
    })
}

/// Eigendecomposition of the Hermitian part of `h`; eigenvalues ascending,
/// eigenvectors in the matching columns.
pub fn hermitian_eigen<T: Scalar>(h: &CMatrix<T>) -> (Vec<T>, CMatrix<T>) {
    let n = h.nrows();
    let eig = nalgebra::SymmetricEigen::new(hermitian_part(h));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .partial_cmp(&eig.eigenvalues[j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn min_eigenvalue<T: Scalar>(h: &CMatrix<T>) -> T {
    hermitian_eigen(h).0.first().copied().unwrap_or_else(T::zero)
}

/// Euclidean projection onto the probability simplex.
pub fn project_simplex<T: Scalar>(values: &[T]) -> Vec<T> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let mut cumsum = T::zero();
    let mut tau = T::zero();
    for (k, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let candidate = (cumsum - T::one()) / T::from_usize(k + 1).unwrap();
        if u > candidate {
            tau = candidate;
        }
    }
    values.iter().map(|&v| (v - tau).max(T::zero())).collect()
}

/// Frobenius-nearest density operator to the Hermitian part of `y`.
pub fn nearest_density<T: Scalar>(y: &CMatrix<T>) -> CMatrix<T> {
    let (values, vectors) = hermitian_eigen(y);
    let projected = project_simplex(&values);
    let scaled = CMatrix::from_fn(vectors.nrows(), vectors.ncols(), |r, c| {
        vectors[(r, c)] * cre(projected[c])
    });
    let rho = &scaled * vectors.adjoint();
    hermitian_part(&rho)
}

/// Orthonormal basis (as columns) of the column span of `m`, with numerical
/// rank cut at `rel` times the largest singular value.
pub fn orthonormal_columns<T: Scalar>(m: &CMatrix<T>, rel: T) -> Result<CMatrix<T>> {
    if m.ncols() == 0 {
        return Ok(CMatrix::zeros(m.nrows(), 0));
    }
    let dec = svd(m)?;
    let r = dec.rank(rel);
    Ok(dec.u.columns(0, r).into_owned())
}

/// Deterministic orthonormal completion of the orthonormal columns `q` to a
/// basis of `C^n`: standard basis vectors are Gram-Schmidt'ed against the
/// running set, always taking the one with the largest residual (lowest
/// index on ties).
pub fn orthonormal_complement<T: Scalar>(q: &CMatrix<T>) -> CMatrix<T> {
    let n = q.nrows();
    let target = n.saturating_sub(q.ncols());
    let mut basis: Vec<Ket<T>> = q.column_iter().map(|c| c.into_owned()).collect();
    let mut picked: Vec<Ket<T>> = Vec::with_capacity(target);
    while picked.len() < target {
        let mut best: Option<(T, Ket<T>)> = None;
        for k in 0..n {
            let mut e = Ket::zeros(n);
            e[k] = cre(T::one());
            let r = orthogonalize(&e, &basis);
            let norm = r.norm();
            if best.as_ref().is_none_or(|(bn, _)| norm > *bn) {
                best = Some((norm, r));
            }
        }
        let (norm, r) = best.expect("n > 0");
        let v = orthogonalize(&(r / cre(norm)), &basis);
        let v = &v / cre(v.norm());
        basis.push(v.clone());
        picked.push(v);
    }
    if picked.is_empty() {
        CMatrix::zeros(n, 0)
    } else {
        CMatrix::from_columns(&picked)
    }
}

/// Removes the components of `v` along the orthonormal set `basis`
/// (two passes of classical Gram-Schmidt).
pub fn orthogonalize<T: Scalar>(v: &Ket<T>, basis: &[Ket<T>]) -> Ket<T> {
    let mut r = v.clone();
    for _ in 0..2 {
        for b in basis {
            let coef = b.dotc(&r);
            r -= b * coef;
        }
    }
    r
}

/// Isometry `W: C^a -> C^b` with `W s = t` for each `(s, t)` pair.
///
/// Sources are orthonormalized in the given order and the same linear
/// combinations are applied to the targets. The remaining columns map an
/// in-order completion of the source space to the first standard-basis
/// completion of the target span.
pub fn complete_isometry<T: Scalar>(pairs: &[(Ket<T>, Ket<T>)], gram_tol: f64) -> Result<CMatrix<T>> {
    let Some((s0, t0)) = pairs.first() else {
        return Err(Error::InvalidShape("isometry completion needs at least one pair".into()));
    };
    let (a, b) = (s0.len(), t0.len());
    if b < a {
        return Err(Error::InvalidShape(format!(
            "isometry from dimension {a} into smaller dimension {b}"
        )));
    }
    if pairs.iter().any(|(s, t)| s.len() != a || t.len() != b) {
        return Err(Error::DimensionMismatch("inconsistent pair dimensions".into()));
    }

    let mut deviation = 0.0f64;
    for (sp, tp) in pairs {
        for (sq, tq) in pairs {
            let diff = sp.dotc(sq) - tp.dotc(tq);
            deviation = deviation.max(diff.norm_sqr().sqrt().to_f64_lossy());
        }
    }
    if !(deviation <= gram_tol) {
        return Err(Error::GramMismatch { deviation, tol: gram_tol });
    }

    let dep_tol = T::lit(gram_tol.sqrt());
    let mut src: Vec<Ket<T>> = Vec::new();
    let mut tgt: Vec<Ket<T>> = Vec::new();
    for (s, t) in pairs {
        let mut ws = s.clone();
        let mut wt = t.clone();
        for _ in 0..2 {
            for (e, f) in src.iter().zip(&tgt) {
                let coef = e.dotc(&ws);
                ws -= e * coef;
                wt -= f * coef;
            }
        }
        let norm = ws.norm();
        if norm > dep_tol * s.norm().max(T::one()) {
            src.push(ws / cre(norm));
            tgt.push(wt / cre(norm));
        }
    }
    // Targets are orthonormal up to the Gram tolerance; make them exact.
    let mut tgt_on: Vec<Ket<T>> = Vec::with_capacity(tgt.len());
    for f in &tgt {
        let r = orthogonalize(f, &tgt_on);
        let n = r.norm();
        tgt_on.push(r / cre(n));
    }

    let src_full = extend_in_order(src, a);
    let tgt_full = extend_in_order(tgt_on, b);
    let e = CMatrix::from_columns(&src_full);
    let f = CMatrix::from_columns(&tgt_full[..a]);
    Ok(f * e.adjoint())
}

fn extend_in_order<T: Scalar>(mut basis: Vec<Ket<T>>, n: usize) -> Vec<Ket<T>> {
    let accept = T::lit(1e-3);
    for k in 0..n {
        if basis.len() == n {
            break;
        }
        let mut e = Ket::zeros(n);
        e[k] = cre(T::one());
        let r = orthogonalize(&e, &basis);
        let norm = r.norm();
        if norm > accept {
            basis.push(r / cre(norm));
        }
    }
    basis
}

/// `W† W − 1` in max norm.
pub fn isometry_defect<T: Scalar>(w: &CMatrix<T>) -> T {
    let g = w.adjoint() * w - CMatrix::<T>::identity(w.ncols(), w.ncols());
    max_abs(&g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type M = CMatrix<f64>;

    fn random_matrix(rng: &mut impl Rng, r: usize, cols: usize) -> M {
        M::from_fn(r, cols, |_, _| Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
    }

    fn ket(v: &[(f64, f64)]) -> Ket<f64> {
        Ket::from_iterator(v.len(), v.iter().map(|&(a, b)| Complex::new(a, b)))
    }

    #[test]
    fn vectorize_identity_and_unit() {
        let id = M::identity(2, 2);
        assert_eq!(vectorize(&id).unwrap(), ket(&[(1., 0.), (0., 0.), (0., 0.), (1., 0.)]));
        // |0><1| ⊗ 1 applied to |00> + |11> leaves |0>|1>.
        let mut x = M::zeros(2, 2);
        x[(0, 1)] = Complex::new(1.0, 0.0);
        assert_eq!(vectorize(&x).unwrap(), ket(&[(0., 0.), (1., 0.), (0., 0.), (0., 0.)]));
    }

    #[test]
    fn vectorize_matches_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in [2usize, 3] {
            let x = random_matrix(&mut rng, d, d);
            let mut omega = Ket::<f64>::zeros(d * d);
            for i in 0..d {
                omega[i * d + i] = Complex::new(1.0, 0.0);
            }
            let direct = kron(&x, &M::identity(d, d)) * omega;
            assert!((direct - vectorize(&x).unwrap()).norm() < 1e-14);
        }
    }

    #[test]
    fn vectorize_norm_is_frobenius() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let x = random_matrix(&mut rng, 3, 3);
            let brute: f64 = (0..3)
                .flat_map(|i| (0..3).map(move |j| (i, j)))
                .map(|(i, j)| x[(i, j)].norm_sqr())
                .sum();
            let v = vectorize(&x).unwrap();
            assert!((v.dotc(&v).re - brute).abs() < 1e-12);
        }
    }

    #[test]
    fn vectorize_rejects_non_square() {
        assert!(matches!(vectorize(&M::zeros(2, 3)), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn partial_trace_product_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = random_matrix(&mut rng, 2, 2);
        let mut sigma = random_matrix(&mut rng, 3, 3);
        let tr = trace(&sigma);
        sigma /= tr;
        let out = partial_trace_second(&kron(&rho, &sigma), 2, 3).unwrap();
        assert!((out - rho).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_of_vectorized_dyad() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 3, 3);
            let b = random_matrix(&mut rng, 3, 3);
            let m = dyad(&vectorize(&a).unwrap(), &vectorize(&b).unwrap());
            // brute-force index contraction of sum_{j,k} A_{ij} conj(B_{lk}) delta_{jk}
            let brute = M::from_fn(3, 3, |i, l| {
                (0..3).fold(czero(), |acc, j| acc + a[(i, j)] * b[(l, j)].conj())
            });
            let out = partial_trace_second(&m, 3, 3).unwrap();
            assert!((&out - &brute).norm() < 1e-12);
            assert!((out - &a * b.adjoint()).norm() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_of_maximally_entangled() {
        let v = vectorize(&M::identity(2, 2)).unwrap();
        let out = partial_trace_second(&dyad(&v, &v), 2, 2).unwrap();
        assert!((out - M::identity(2, 2)).norm() < 1e-15);
    }

    #[test]
    fn partial_trace_preserves_trace_and_checks_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = random_matrix(&mut rng, 6, 6);
        let out = partial_trace_second(&m, 3, 2).unwrap();
        assert!((trace(&out) - trace(&m)).norm() < 1e-12);
        assert!(partial_trace_second(&m, 4, 2).is_err());
    }

    #[test]
    fn svd_identity_and_reconstruction() {
        let s = svd(&M::identity(3, 3)).unwrap();
        assert!(s.singular_values.iter().all(|&v| (v - 1.0).abs() < 1e-14));
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let a = random_matrix(&mut rng, 3, 3);
            let s = svd(&a).unwrap();
            assert!((s.reconstruct() - &a).norm() < 1e-10);
            assert!(s.singular_values.windows(2).all(|w| w[0] >= w[1]));
            assert!(s.singular_values.iter().all(|&v| v >= 0.0));
            assert!(isometry_defect(&s.u) < 1e-12 && isometry_defect(&s.v) < 1e-12);
        }
    }

    #[test]
    fn svd_rank_matches_gram_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for r in 0..=3 {
            let a = random_matrix(&mut rng, 4, r) * random_matrix(&mut rng, r, 4);
            let s = svd(&a).unwrap();
            let (gram_eigs, _) = hermitian_eigen(&(a.adjoint() * &a));
            let top = gram_eigs.last().copied().unwrap_or(0.0);
            // Squaring halves the usable precision, so the Gram route needs a looser cut.
            let brute = gram_eigs.iter().filter(|&&e| e > 1e-12 * top.max(1e-300)).count();
            assert_eq!(s.rank(1e-10), r);
            assert_eq!(brute, r);
        }
    }

    #[test]
    fn simplex_projection_cases() {
        assert_eq!(project_simplex(&[2.0, 0.0]), vec![1.0, 0.0]);
        let p = project_simplex(&[0.3f64, 0.3, 0.4]);
        assert!(p.iter().zip([0.3, 0.3, 0.4]).all(|(a, b)| (a - b).abs() < 1e-15));
        let p = project_simplex(&[-1.0f64, -1.0]);
        assert!(p.iter().all(|&v| (v - 0.5).abs() < 1e-15));
    }

    #[test]
    fn nearest_density_fixed_point_and_diag() {
        let rho = M::from_diagonal(&ket(&[(0.25, 0.), (0.75, 0.)]));
        assert!((nearest_density(&rho) - &rho).norm() < 1e-14);
        let y = M::from_diagonal(&ket(&[(2., 0.), (0., 0.)]));
        let out = nearest_density(&y);
        assert!((out - M::from_diagonal(&ket(&[(1., 0.), (0., 0.)]))).norm() < 1e-14);
    }

    #[test]
    fn nearest_density_beats_grid_search() {
        // For diagonal Y the nearest density operator is diagonal; scan diag(p, 1-p).
        let cases = [(2.0, 0.0), (0.7, 0.7), (-0.3, 0.4), (3.0, 2.5), (0.1, -2.0)];
        for (a, b) in cases {
            let y = M::from_diagonal(&ket(&[(a, 0.), (b, 0.)]));
            let out = nearest_density(&y);
            let got = (&out - &y).norm();
            let best = (0..=100_000)
                .map(|k| {
                    let p = k as f64 / 100_000.0;
                    ((a - p).powi(2) + (b - 1.0 + p).powi(2)).sqrt()
                })
                .fold(f64::INFINITY, f64::min);
            assert!(got <= best + 1e-9, "case ({a},{b}): {got} vs grid {best}");
            assert!(min_eigenvalue(&out) >= -1e-12);
            assert!((trace(&out).re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn isometry_basis_map() {
        let e1 = ket(&[(1., 0.), (0., 0.), (0., 0.)]);
        let f1 = ket(&[(0., 0.), (0., 1.), (0., 0.)]);
        let w = complete_isometry(&[(e1.clone(), f1.clone())], 1e-8).unwrap();
        assert!(isometry_defect(&w) < 1e-14);
        assert!((&w * e1 - f1).norm() < 1e-14);
    }

    #[test]
    fn isometry_gram_mismatch() {
        let s1 = ket(&[(1., 0.), (0., 0.)]);
        let s2 = ket(&[(0.5, 0.), (0.75f64.sqrt(), 0.)]);
        let t1 = ket(&[(1., 0.), (0., 0.)]);
        let t2 = ket(&[(0.3, 0.), (0.91f64.sqrt(), 0.)]);
        let err = complete_isometry(&[(s1, t1), (s2, t2)], 1e-8).unwrap_err();
        assert!(matches!(err, Error::GramMismatch { .. }));
    }

    #[test]
    fn isometry_random_commensurate_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            // Build targets as V s for a random isometry V: C^3 -> C^9.
            let g = random_matrix(&mut rng, 9, 3);
            let v = orthonormal_columns(&g, 1e-12).unwrap();
            let s1 = random_matrix(&mut rng, 3, 1).column(0).into_owned();
            let s2 = random_matrix(&mut rng, 3, 1).column(0).into_owned();
            let pairs = vec![(s1.clone(), &v * &s1), (s2.clone(), &v * &s2)];
            let w = complete_isometry(&pairs, 1e-8).unwrap();
            assert!(isometry_defect(&w) < 1e-10);
            for (s, t) in &pairs {
                assert!((&w * s - t).norm() < 1e-8);
            }
            // Deterministic.
            assert_eq!(w, complete_isometry(&pairs, 1e-8).unwrap());
        }
    }

    #[test]
    fn complement_is_orthonormal_and_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let q = orthonormal_columns(&random_matrix(&mut rng, 5, 2), 1e-12).unwrap();
        let c = orthonormal_complement(&q);
        assert_eq!(c.ncols(), 3);
        let full = CMatrix::from_columns(
            &q.column_iter().chain(c.column_iter()).map(|x| x.into_owned()).collect::<Vec<_>>(),
        );
        assert!(isometry_defect(&full) < 1e-13);
        assert_eq!(c, orthonormal_complement(&q));
    }

    #[test]
    fn works_in_single_precision() {
        let mut x = CMatrix::<f32>::zeros(2, 2);
        x[(1, 0)] = Complex::new(1.0, 0.0);
        let v = vectorize(&x).unwrap();
        assert_eq!(v[2], Complex::new(1.0f32, 0.0));
        let rho = nearest_density(&CMatrix::<f32>::from_diagonal(&Ket::from_vec(vec![
            Complex::new(2.0f32, 0.0),
            Complex::new(0.0, 0.0),
        ])));
        assert!((rho[(0, 0)].re - 1.0).abs() < 1e-6);
    }
}
