//! SIC POVMs as Weyl-Heisenberg orbits of a fiducial vector.

use std::f64::consts::PI;

use super::RankOnePovm;
use crate::error::{Error, Result};
use crate::matcore::{c, cis, cre, Ket};
use crate::scalar::Scalar;
use crate::tol::Tolerances;

/// Effect permutation pairing the qutrit SIC with a relabelled copy of
/// itself that can only be discriminated adaptively.
pub const DEFAULT_SIC_PERMUTATION: [usize; 9] = [9, 8, 7, 3, 1, 2, 6, 4, 5];

/// `(0, 1, -1)/√2`, a fiducial for the qutrit Hesse SIC.
pub fn default_sic_fiducial<T: Scalar>() -> Ket<T> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Ket::from_vec(vec![c(0.0, 0.0), c(h, 0.0), c(-h, 0.0)])
}

/// `X^a Z^b |fid>` with `X|k> = |k+1 mod d>` and `Z|k> = ω^k |k>`.
fn displaced<T: Scalar>(fid: &Ket<T>, a: usize, b: usize) -> Ket<T> {
    let d = fid.len();
    let mut out = Ket::zeros(d);
    for k in 0..d {
        let phase = cis(T::lit(2.0 * PI * ((b * k) % d) as f64 / d as f64));
        out[(k + a) % d] = fid[k] * phase;
    }
    out
}

/// SIC POVM in dimension `d`: vector `a*d + b` (zero-based) is
/// `X^a Z^b |fid> / √d`.
///
/// `fiducial` defaults to [`default_sic_fiducial`] and is required for
/// `d != 3`. It is normalised before use. Fails with [`Error::NotSic`] if any
/// pair of orbit vectors has `|<φ_i|φ_j>|^2` away from `1/(d+1)`.
pub fn build_sic<T: Scalar>(d: usize, fiducial: Option<&Ket<T>>, tol: &Tolerances) -> Result<RankOnePovm<T>> {
    let fid = match fiducial {
        Some(f) => f.clone(),
        None if d == 3 => default_sic_fiducial(),
        None => {
            return Err(Error::PreconditionFailed(format!(
                "no built-in SIC fiducial for d = {d}; supply one"
            )))
        }
    };
    if fid.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "fiducial has length {}, expected {d}",
            fid.len()
        )));
    }
    let norm = fid.norm();
    if !(norm > T::zero()) || !norm.is_finite() {
        return Err(Error::InvalidShape("fiducial must be a non-zero finite vector".into()));
    }
    let fid = fid / cre(norm);

    let orbit: Vec<Ket<T>> = (0..d)
        .flat_map(|a| (0..d).map(move |b| (a, b)))
        .map(|(a, b)| displaced(&fid, a, b))
        .collect();

    let expected = 1.0 / (d as f64 + 1.0);
    for i in 0..orbit.len() {
        for j in (i + 1)..orbit.len() {
            let overlap = orbit[i].dotc(&orbit[j]).norm_sqr().to_f64_lossy();
            if (overlap - expected).abs() > tol.sic_overlap {
                return Err(Error::NotSic { i, j, overlap, expected });
            }
        }
    }

    let scale = cre(T::lit(1.0 / (d as f64).sqrt()));
    RankOnePovm::new(d, orbit.into_iter().map(|v| v * scale).collect(), tol)
}
