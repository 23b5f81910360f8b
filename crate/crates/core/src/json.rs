//! Complex numbers on the wire are `[re, im]` pairs of doubles.

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::matcore::{CMatrix, Ket};
use crate::scalar::Scalar;

pub type JsonComplex = [f64; 2];
pub type JsonVector = Vec<JsonComplex>;
/// Row-major list of rows.
pub type JsonMatrix = Vec<Vec<JsonComplex>>;

pub fn complex_out<T: Scalar>(z: &Complex<T>) -> JsonComplex {
    [z.re.to_f64_lossy(), z.im.to_f64_lossy()]
}

pub fn complex_in<T: Scalar>(z: &JsonComplex) -> Result<Complex<T>> {
    if !(z[0].is_finite() && z[1].is_finite()) {
        return Err(Error::NonFinite("JSON complex number"));
    }
    Ok(Complex::new(T::lit(z[0]), T::lit(z[1])))
}

pub fn ket_out<T: Scalar>(v: &Ket<T>) -> JsonVector {
    v.iter().map(complex_out).collect()
}

pub fn ket_in<T: Scalar>(v: &[JsonComplex]) -> Result<Ket<T>> {
    let items = v.iter().map(complex_in).collect::<Result<Vec<_>>>()?;
    Ok(Ket::from_vec(items))
}

pub fn matrix_out<T: Scalar>(m: &CMatrix<T>) -> JsonMatrix {
    m.row_iter()
        .map(|row| row.iter().map(complex_out).collect())
        .collect()
}

pub fn matrix_in<T: Scalar>(rows: &[Vec<JsonComplex>]) -> Result<CMatrix<T>> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::DimensionMismatch("ragged matrix rows in JSON".into()));
    }
    let mut m = CMatrix::zeros(nrows, ncols);
    for (i, row) in rows.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            m[(i, j)] = complex_in(z)?;
        }
    }
    Ok(m)
}
