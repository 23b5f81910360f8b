//! Rank-one POVMs and pairs of them.
//!
//! A rank-one POVM on `C^d` is stored as the list of vectors `x_i` whose
//! dyads `|x_i><x_i|` are the effects; weights live inside the vectors.

mod haar;
mod io;
mod sic;

pub use haar::{ginibre, haar_from_ginibre, povm_from_isometry, random_unitary, sample_random_povm};
pub use io::PovmPairFile;
pub use sic::{build_sic, default_sic_fiducial, DEFAULT_SIC_PERMUTATION};

use crate::error::{Error, Result};
use crate::matcore::{dyad, max_abs, CMatrix, Ket};
use crate::scalar::Scalar;
use crate::tol::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct RankOnePovm<T: Scalar> {
    dim: usize,
    vectors: Vec<Ket<T>>,
}

/// Result of checking the completeness relation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Validation {
    /// Max-norm deviation of `Σ |x_i><x_i|` from the identity.
    pub deviation: f64,
    pub ok: bool,
}

impl<T: Scalar> RankOnePovm<T> {
    /// Builds and validates a POVM.
    pub fn new(dim: usize, vectors: Vec<Ket<T>>, tol: &Tolerances) -> Result<Self> {
        let p = Self::new_unchecked(dim, vectors)?;
        let v = p.validate(tol);
        if !v.ok {
            return Err(Error::NotComplete { deviation: v.deviation });
        }
        Ok(p)
    }

    /// Shape checks only; completeness is not enforced.
    pub fn new_unchecked(dim: usize, vectors: Vec<Ket<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidShape("dimension must be positive".into()));
        }
        if vectors.len() < dim {
            return Err(Error::InvalidShape(format!(
                "a rank-one POVM on C^{dim} needs at least {dim} effects, got {}",
                vectors.len()
            )));
        }
        if let Some((i, v)) = vectors.iter().enumerate().find(|(_, v)| v.len() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "effect vector {i} has length {}, expected dim = {dim}",
                v.len()
            )));
        }
        if vectors.iter().flatten().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite("effect vector"));
        }
        Ok(Self { dim, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of effects `m`.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Ket<T>] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &Ket<T> {
        &self.vectors[i]
    }

    pub fn effect(&self, i: usize) -> CMatrix<T> {
        dyad(&self.vectors[i], &self.vectors[i])
    }

    pub fn effect_sum(&self) -> CMatrix<T> {
        self.vectors
            .iter()
            .fold(CMatrix::zeros(self.dim, self.dim), |acc, v| acc + dyad(v, v))
    }

    pub fn validate(&self, tol: &Tolerances) -> Validation {
        let dev = self.effect_sum() - CMatrix::<T>::identity(self.dim, self.dim);
        let deviation = max_abs(&dev).to_f64_lossy();
        Validation {
            deviation,
            ok: deviation < tol.completeness,
        }
    }

    /// Vector `i` of the result is vector `perm[i] - 1` of `self`
    /// (`perm` is one-based).
    pub fn permute_effects(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.len())?;
        Ok(Self {
            dim: self.dim,
            vectors: perm.iter().map(|&p| self.vectors[p - 1].clone()).collect(),
        })
    }

    /// The POVM `{W |x_i>}` for a unitary `W`.
    pub fn rotated(&self, w: &CMatrix<T>) -> Result<Self> {
        if w.nrows() != self.dim || w.ncols() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "rotation is {}x{}, POVM dimension is {}",
                w.nrows(),
                w.ncols(),
                self.dim
            )));
        }
        Ok(Self {
            dim: self.dim,
            vectors: self.vectors.iter().map(|v| w * v).collect(),
        })
    }
}

/// Checks that `perm` is a one-based bijection on `1..=m`.
pub fn check_permutation(perm: &[usize], m: usize) -> Result<()> {
    if perm.len() != m {
        return Err(Error::InvalidPermutation(format!(
            "expected {m} entries, got {}",
            perm.len()
        )));
    }
    let mut seen = vec![false; m];
    for &p in perm {
        if p == 0 || p > m {
            return Err(Error::InvalidPermutation(format!("entry {p} outside 1..={m}")));
        }
        if std::mem::replace(&mut seen[p - 1], true) {
            return Err(Error::InvalidPermutation(format!("entry {p} repeated")));
        }
    }
    Ok(())
}

/// One-based inverse of a one-based permutation.
pub fn invert_permutation(perm: &[usize]) -> Result<Vec<usize>> {
    check_permutation(perm, perm.len())?;
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p - 1] = i + 1;
    }
    Ok(inv)
}

/// Two POVMs with the same dimension and effect count.
#[derive(Debug, Clone, PartialEq)]
pub struct PovmPair<T: Scalar> {
    pub first: RankOnePovm<T>,
    pub second: RankOnePovm<T>,
}

impl<T: Scalar> PovmPair<T> {
    pub fn new(first: RankOnePovm<T>, second: RankOnePovm<T>) -> Result<Self> {
        if first.dim() != second.dim() {
            return Err(Error::DimensionMismatch(format!(
                "POVM dimensions differ: {} vs {}",
                first.dim(),
                second.dim()
            )));
        }
        if first.len() != second.len() {
            return Err(Error::DimensionMismatch(format!(
                "effect counts differ: {} vs {}",
                first.len(),
                second.len()
            )));
        }
        Ok(Self { first, second })
    }

    pub fn dim(&self) -> usize {
        self.first.dim()
    }

    pub fn effects(&self) -> usize {
        self.first.len()
    }

    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        for p in [&self.first, &self.second] {
            let v = p.validate(tol);
            if !v.ok {
                return Err(Error::NotComplete { deviation: v.deviation });
            }
        }
        Ok(())
    }

    /// Applies the same unitary to both POVMs.
    pub fn rotated(&self, w: &CMatrix<T>) -> Result<Self> {
        Self::new(self.first.rotated(w)?, self.second.rotated(w)?)
    }

    /// Relabels the effects of both POVMs with the same permutation.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        Self::new(self.first.permute_effects(perm)?, self.second.permute_effects(perm)?)
    }

    /// The SIC POVM paired with its effect permutation `perm`.
    pub fn sic(d: usize, perm: &[usize], tol: &Tolerances) -> Result<Self> {
        let first = build_sic(d, None, tol)?;
        let second = first.permute_effects(perm)?;
        Self::new(first, second)
    }
}
