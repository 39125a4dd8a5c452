//! JSON interchange: complex numbers as `[re, im]`, matrices as lists of rows.

use num_complex::Complex64;
use serde::ser::{SerializeSeq, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::matrices::ComplexMatrix;

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

pub fn complex_to_json(z: Complex64) -> [f64; 2] {
    // keep -0.0 out of reports
    [z.re + 0.0, z.im + 0.0]
}

pub fn matrix_to_json(m: &ComplexMatrix) -> JsonMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| complex_to_json(m[(i, j)])).collect())
        .collect()
}

pub fn ser_complex_vec<S: Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&complex_to_json(*z))?;
    }
    seq.end()
}

pub fn ser_matrix<S: Serializer>(m: &ComplexMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(matrix_to_json(m))
}

pub fn ser_matrix_vec<S: Serializer>(v: &[ComplexMatrix], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(matrix_to_json))
}

fn input(path: &str, msg: impl Into<String>) -> Error {
    Error::Input {
        path: path.to_string(),
        msg: msg.into(),
    }
}

/// Accepts `[re, im]` or a bare real number.
pub fn complex_from_json(v: &Value, path: &str) -> Result<Complex64> {
    match v {
        Value::Number(x) => Ok(Complex64::new(x.as_f64().unwrap_or(f64::NAN), 0.0)),
        Value::Array(pair) if pair.len() == 2 => {
            let part = |k: usize| {
                pair[k]
                    .as_f64()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| input(&format!("{path}[{k}]"), "expected a finite number"))
            };
            Ok(Complex64::new(part(0)?, part(1)?))
        }
        _ => Err(input(path, "expected [re, im] or a number")),
    }
}

/// A square matrix given as a list of rows.
pub fn matrix_from_json(v: &Value, path: &str) -> Result<ComplexMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| input(path, "expected a list of rows"))?;
    let n = rows.len();
    if n == 0 {
        return Err(input(path, "matrix has no rows"));
    }
    let mut m = ComplexMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        let rpath = format!("{path}[{i}]");
        let entries = row
            .as_array()
            .ok_or_else(|| input(&rpath, "expected a row of entries"))?;
        if entries.len() != n {
            return Err(input(&rpath, format!("row has {} entries (expected {n})", entries.len())));
        }
        for (j, e) in entries.iter().enumerate() {
            m[(i, j)] = complex_from_json(e, &format!("{rpath}[{j}]"))?;
        }
    }
    Ok(m)
}
