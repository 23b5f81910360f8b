use serde::{Deserialize, Serialize};

use super::{AdaptiveScheme, FinalMeasurement};
use crate::error::{Error, Result};
use crate::json::{ket_in, ket_out, matrix_in, matrix_out, JsonMatrix, JsonVector};
use crate::scalar::Scalar;

/// Tag identifying the vectorization convention of `xi`, `eta` and `input_state`.
pub const VEC_CONVENTION: &str = "vec=col-of-first-factor";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FinalMeasurementFile {
    /// Zero-based `(i, j)`.
    pub path: [usize; 2],
    pub first: JsonVector,
    pub second: JsonVector,
    pub dummy: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeFile {
    pub convention: String,
    pub dim: usize,
    pub m: usize,
    pub input_state: JsonVector,
    pub a: JsonMatrix,
    pub xi: JsonVector,
    pub eta: JsonVector,
    pub phases: Vec<f64>,
    pub isometries: Vec<JsonMatrix>,
    pub final_measurements: Vec<FinalMeasurementFile>,
}

impl SchemeFile {
    pub fn from_scheme<T: Scalar>(s: &AdaptiveScheme<T>) -> Self {
        Self {
            convention: VEC_CONVENTION.to_string(),
            dim: s.d,
            m: s.m,
            input_state: ket_out(&s.input_state),
            a: matrix_out(&s.a),
            xi: ket_out(&s.xi),
            eta: ket_out(&s.eta),
            phases: s.phases.iter().map(|p| p.to_f64_lossy()).collect(),
            isometries: s.isometries.iter().map(matrix_out).collect(),
            final_measurements: s
                .final_measurements
                .iter()
                .enumerate()
                .map(|(k, f)| FinalMeasurementFile {
                    path: [k / s.m, k % s.m],
                    first: ket_out(&f.first),
                    second: ket_out(&f.second),
                    dummy: f.dummy,
                })
                .collect(),
        }
    }

    pub fn to_scheme<T: Scalar>(&self) -> Result<AdaptiveScheme<T>> {
        if self.convention != VEC_CONVENTION {
            return Err(Error::PreconditionFailed(format!(
                "unsupported convention {:?}, expected {VEC_CONVENTION:?}",
                self.convention
            )));
        }
        let (d, m) = (self.dim, self.m);
        let shape = |what: &str| Error::DimensionMismatch(format!("scheme field {what} has the wrong size"));
        let input_state = ket_in(&self.input_state)?;
        let xi = ket_in(&self.xi)?;
        let eta = ket_in(&self.eta)?;
        if [&input_state, &xi, &eta].iter().any(|v| v.len() != d * d) {
            return Err(shape("input_state/xi/eta"));
        }
        let a = matrix_in(&self.a)?;
        if a.shape() != (d, d) {
            return Err(shape("a"));
        }
        if self.phases.len() != m || self.isometries.len() != m {
            return Err(shape("phases/isometries"));
        }
        if self.phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite("scheme phases"));
        }
        let isometries = self
            .isometries
            .iter()
            .map(|u| matrix_in::<T>(u))
            .collect::<Result<Vec<_>>>()?;
        if isometries.iter().any(|u| u.shape() != (d * d, d)) {
            return Err(shape("isometries"));
        }
        if self.final_measurements.len() != m * m {
            return Err(shape("final_measurements"));
        }
        let mut final_measurements = Vec::with_capacity(m * m);
        for (k, f) in self.final_measurements.iter().enumerate() {
            if f.path != [k / m, k % m] {
                return Err(Error::InvalidShape(format!(
                    "final measurement {k} has path {:?}, expected {:?}",
                    f.path,
                    [k / m, k % m]
                )));
            }
            let first = ket_in(&f.first)?;
            let second = ket_in(&f.second)?;
            if first.len() != d || second.len() != d {
                return Err(shape("final_measurements"));
            }
            final_measurements.push(FinalMeasurement {
                first,
                second,
                dummy: f.dummy,
            });
        }
        Ok(AdaptiveScheme {
            d,
            m,
            input_state,
            a,
            xi,
            eta,
            phases: self.phases.iter().map(|&p| T::lit(p)).collect(),
            isometries,
            final_measurements,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
