use serde::{Deserialize, Serialize};

use super::{PovmPair, RankOnePovm};
use crate::error::{Error, Result};
use crate::json::{ket_in, ket_out, JsonVector};
use crate::scalar::Scalar;
use crate::tol::Tolerances;

/// On-disk form of a POVM pair.
///
/// ```json
/// {"dim": 3, "m": 9, "first": [[[re, im], ...], ...], "second": [...]}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PovmPairFile {
    pub dim: usize,
    pub m: usize,
    pub first: Vec<JsonVector>,
    pub second: Vec<JsonVector>,
}

impl PovmPairFile {
    pub fn from_pair<T: Scalar>(pair: &PovmPair<T>) -> Self {
        Self {
            dim: pair.dim(),
            m: pair.effects(),
            first: pair.first.vectors().iter().map(ket_out).collect(),
            second: pair.second.vectors().iter().map(ket_out).collect(),
        }
    }

    /// Rebuilds the pair, enforcing shape and completeness.
    pub fn to_pair<T: Scalar>(&self, tol: &Tolerances) -> Result<PovmPair<T>> {
        let load = |name: &str, vs: &[JsonVector]| -> Result<RankOnePovm<T>> {
            if vs.len() != self.m {
                return Err(Error::DimensionMismatch(format!(
                    "\"{name}\" has {} vectors but m = {}",
                    vs.len(),
                    self.m
                )));
            }
            if let Some((i, v)) = vs.iter().enumerate().find(|(_, v)| v.len() != self.dim) {
                return Err(Error::DimensionMismatch(format!(
                    "\"{name}\" vector {i} has length {} but dim = {}",
                    v.len(),
                    self.dim
                )));
            }
            let kets = vs.iter().map(|v| ket_in(v)).collect::<Result<Vec<_>>>()?;
            let p = RankOnePovm::new_unchecked(self.dim, kets)?;
            let v = p.validate(tol);
            if !v.ok {
                return Err(Error::PreconditionFailed(format!(
                    "completeness invariant violated for \"{name}\": sum of effects deviates from identity by {:.3e}",
                    v.deviation
                )));
            }
            Ok(p)
        };
        PovmPair::new(load("first", &self.first)?, load("second", &self.second)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serialises")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
