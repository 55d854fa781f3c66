//! Shared JSON encodings: complex entries as `[re, im]` pairs and dense
//! matrices as nested row lists.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{c64, ComplexMatrix, HermitianOperator};

pub type JsonComplex = [f64; 2];
pub type JsonMatrix = Vec<Vec<JsonComplex>>;

pub fn matrix_to_json(m: &ComplexMatrix) -> JsonMatrix {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &JsonMatrix) -> Result<ComplexMatrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Parse("ragged matrix rows".into()));
    }
    let data = rows.iter().flatten().map(|[re, im]| c64(*re, *im)).collect();
    ComplexMatrix::from_row_major(nrows, ncols, data)
}

pub fn hermitian_from_json(rows: &JsonMatrix) -> Result<HermitianOperator> {
    HermitianOperator::new(matrix_from_json(rows)?)
}

pub fn ket_to_json(k: &ComplexMatrix) -> Vec<JsonComplex> {
    k.as_slice().iter().map(|z| [z.re, z.im]).collect()
}

pub fn ket_from_json(v: &[JsonComplex]) -> Result<ComplexMatrix> {
    let data = v.iter().map(|[re, im]| c64(*re, *im)).collect::<Vec<_>>();
    ComplexMatrix::from_row_major(data.len(), 1, data)
}

/// A probability given as a JSON number or as an exact rational string
/// such as `"1/3"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Probability {
    Number(f64),
    Text(String),
}

impl Probability {
    pub fn value(&self) -> Result<f64> {
        match self {
            Probability::Number(x) => Ok(*x),
            Probability::Text(s) => parse_rational(s),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("cannot parse probability '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|_| bad())?;
            let d: f64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0.0 {
                return Err(bad());
            }
            Ok(n / d)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/3").unwrap(), 1.0 / 3.0);
        assert_eq!(parse_rational(" 0.25 ").unwrap(), 0.25);
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn ragged_rejected() {
        let rows: JsonMatrix = vec![vec![[1.0, 0.0]], vec![[1.0, 0.0], [0.0, 0.0]]];
        assert!(matrix_from_json(&rows).is_err());
    }
}
