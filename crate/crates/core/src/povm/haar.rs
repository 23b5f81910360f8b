use rand::Rng;
use rand_distr::StandardNormal;

use super::RankOnePovm;
use crate::error::{Error, Result};
use crate::matcore::{cre, CMatrix, Ket};
use crate::scalar::Scalar;
use crate::tol::Tolerances;

/// `rows x cols` matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<T: Scalar, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix<T> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        nalgebra::Complex::new(T::lit(re * s), T::lit(im * s))
    })
}

/// Orthonormalises the columns of a full-column-rank `g` by QR, fixing the
/// phase freedom so that `R` has a positive diagonal. Applied to a Ginibre
/// matrix this yields a Haar-distributed isometry.
pub fn haar_from_ginibre<T: Scalar>(g: CMatrix<T>) -> CMatrix<T> {
    let cols = g.ncols();
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..cols {
        let rjj = r[(j, j)];
        let mag = rjj.norm_sqr().sqrt();
        if mag > T::zero() {
            let phase = rjj / cre(mag);
            let col = q.column(j) * phase;
            q.set_column(j, &col);
        }
    }
    q
}

/// Haar-random `d x d` unitary.
pub fn random_unitary<T: Scalar, R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix<T> {
    haar_from_ginibre(ginibre(d, d, rng))
}

/// POVM whose `i`-th vector is the conjugated `i`-th row of the `m x d`
/// isometry `v`; `Σ_i |x_i><x_i| = (V†V)^* = 1`.
pub fn povm_from_isometry<T: Scalar>(v: &CMatrix<T>, tol: &Tolerances) -> Result<RankOnePovm<T>> {
    let (m, d) = v.shape();
    let vectors = (0..m)
        .map(|i| Ket::from_iterator(d, v.row(i).iter().map(|z| z.conj())))
        .collect();
    RankOnePovm::new(d, vectors, tol)
}

/// Random rank-one POVM with `m` effects on `C^d`, induced by a Haar
/// isometry `C^d -> C^m`.
pub fn sample_random_povm<T: Scalar, R: Rng + ?Sized>(
    d: usize,
    m: usize,
    rng: &mut R,
    tol: &Tolerances,
) -> Result<RankOnePovm<T>> {
    if d == 0 || m < d {
        return Err(Error::InvalidShape(format!(
            "need 1 <= d <= m, got d = {d}, m = {m}"
        )));
    }
    povm_from_isometry(&haar_from_ginibre(ginibre(m, d, rng)), tol)
}
