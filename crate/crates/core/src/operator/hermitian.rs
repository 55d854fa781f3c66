use std::ops::{Add, Sub};

use super::matrix::{ComplexMatrix, C64};
use super::TOL_HERM;
use crate::error::{Error, Result};

/// Square complex matrix equal to its conjugate transpose.
///
/// Construction symmetrizes inputs that are Hermitian up to the
/// tolerance and rejects the rest, so arithmetic drift never leaks into
/// eigen-solves.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, TOL_HERM)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol_herm: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::dims(format!(
                "Hermitian operator must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let adj = matrix.adjoint();
        let dev = matrix.max_abs_diff(&adj);
        if dev > tol_herm * matrix.max_abs().max(1.0) {
            return Err(Error::invalid(format!(
                "matrix is not Hermitian (max |A - A†| = {dev:.3e})"
            )));
        }
        Ok(Self::symmetrize(&matrix))
    }

    /// (A + A†)/2 for any square matrix; never fails.
    pub fn symmetrize(matrix: &ComplexMatrix) -> Self {
        assert!(matrix.is_square());
        let n = matrix.rows();
        let mut m = ComplexMatrix::from_fn(n, n, |r, c| 0.5 * (matrix[(r, c)] + matrix[(c, r)].conj()));
        for i in 0..n {
            m[(i, i)] = C64::new(m[(i, i)].re, 0.0);
        }
        HermitianOperator { matrix: m }
    }

    pub fn identity(n: usize) -> Self {
        HermitianOperator {
            matrix: ComplexMatrix::identity(n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        HermitianOperator {
            matrix: ComplexMatrix::zeros(n, n),
        }
    }

    pub fn diag(values: &[f64]) -> Self {
        HermitianOperator {
            matrix: ComplexMatrix::diag_real(values),
        }
    }

    /// |ψ⟩⟨ψ| for a column vector (not normalized here).
    pub fn projector(ket: &ComplexMatrix) -> Self {
        Self::symmetrize(&ket.outer())
    }

    /// Pure-state density operator for the normalized ket.
    pub fn pure_state(ket: &ComplexMatrix) -> Self {
        Self::projector(&ket.normalized())
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn scale(&self, s: f64) -> Self {
        HermitianOperator {
            matrix: self.matrix.scale_real(s),
        }
    }

    /// U·self·U† for a square `u` of matching dimension.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        Self::symmetrize(&u.matmul(&self.matrix).matmul(&u.adjoint()))
    }

    /// Plain matrix product (generally not Hermitian).
    pub fn mul(&self, other: &HermitianOperator) -> ComplexMatrix {
        self.matrix.matmul(&other.matrix)
    }

    /// Re Tr(self · other); exact for two Hermitian operators up to rounding.
    pub fn trace_with(&self, other: &HermitianOperator) -> f64 {
        self.matrix.trace_product(&other.matrix).re
    }

    /// ⟨v|self|v⟩ for a column vector.
    pub fn expectation(&self, v: &ComplexMatrix) -> f64 {
        v.inner(&self.matrix.matmul(v)).re
    }

    pub fn max_abs_diff(&self, other: &HermitianOperator) -> f64 {
        self.matrix.max_abs_diff(&other.matrix)
    }

    /// Anticommutator half ½{self, other}.
    pub fn jordan(&self, other: &HermitianOperator) -> Self {
        let ab = self.matrix.matmul(&other.matrix);
        Self::symmetrize(&ab)
    }

    pub fn sum<'a>(dim: usize, ops: impl IntoIterator<Item = &'a HermitianOperator>) -> Self {
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for op in ops {
            acc += op.matrix();
        }
        HermitianOperator { matrix: acc }
    }
}

impl Add for &HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: &HermitianOperator) -> HermitianOperator {
        HermitianOperator {
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl Sub for &HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: &HermitianOperator) -> HermitianOperator {
        HermitianOperator {
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetrizes_small_drift_and_rejects_large() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = C64::new(0.3, 1e-13);
        m[(1, 0)] = C64::new(0.3, 0.0);
        let h = HermitianOperator::new(m.clone()).unwrap();
        assert_eq!(h.matrix()[(0, 1)], h.matrix()[(1, 0)].conj());

        m[(1, 0)] = C64::new(0.5, 0.0);
        assert!(HermitianOperator::new(m).is_err());
    }

    #[test]
    fn rejects_non_square() {
        assert!(HermitianOperator::new(ComplexMatrix::zeros(2, 3)).is_err());
    }
}
