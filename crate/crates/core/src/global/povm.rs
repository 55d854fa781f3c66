use crate::error::{Error, Result};
use crate::operator::{
    hermitian_eigen, pinv_sqrt, psd_margin, ComplexMatrix, HermitianOperator, Tolerances,
};

/// Finite list of PSD operators summing to the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    elements: Vec<HermitianOperator>,
}

impl Povm {
    pub fn new(elements: Vec<HermitianOperator>) -> Result<Self> {
        Self::with_tolerances(elements, &Tolerances::default())
    }

    pub fn with_tolerances(elements: Vec<HermitianOperator>, tol: &Tolerances) -> Result<Self> {
        let dim = Self::common_dim(&elements)?;
        for (k, e) in elements.iter().enumerate() {
            let m = psd_margin(e)?;
            if m < -tol.psd {
                return Err(Error::invalid(format!(
                    "POVM element {k} is not positive semidefinite (min eigenvalue {m:e})"
                )));
            }
        }
        let dev = Self::completeness_error_of(dim, &elements);
        if dev > tol.psd {
            return Err(Error::invalid(format!(
                "POVM elements do not sum to identity (max deviation {dev:e})"
            )));
        }
        Ok(Povm { elements })
    }

    /// Skips validation; for elements that are valid by construction.
    pub(crate) fn from_elements_unchecked(elements: Vec<HermitianOperator>) -> Self {
        debug_assert!(!elements.is_empty());
        Povm { elements }
    }

    /// Projective measurement in the basis of the given kets (normalized
    /// internally); any remaining subspace is added to element `remainder_to`.
    pub fn from_kets(kets: &[ComplexMatrix], remainder_to: usize) -> Result<Self> {
        let elements: Vec<_> = kets.iter().map(HermitianOperator::pure_state).collect();
        Self::completed(elements, remainder_to)
    }

    /// Adds 𝟙 − Σ elements to `remainder_to` and validates the result.
    pub fn completed(mut elements: Vec<HermitianOperator>, remainder_to: usize) -> Result<Self> {
        let dim = Self::common_dim(&elements)?;
        let sum = HermitianOperator::sum(dim, &elements);
        let rest = &HermitianOperator::identity(dim) - &sum;
        if rest.matrix().max_abs() > 0.0 {
            elements[remainder_to] = &elements[remainder_to] + &rest;
        }
        Self::new(elements)
    }

    /// Rescales PSD operators onto a POVM via G^{-1/2} E_k G^{-1/2} with
    /// G = Σ E_k; negative eigenvalues are clipped first.
    pub fn normalized_from(elements: Vec<HermitianOperator>) -> Result<Self> {
        let dim = Self::common_dim(&elements)?;
        let clipped = elements
            .iter()
            .map(|e| Ok(hermitian_eigen(e)?.reconstruct_with(|x| x.max(0.0))))
            .collect::<Result<Vec<_>>>()?;
        let g = HermitianOperator::sum(dim, &clipped);
        let scale = g.matrix().max_abs().max(1.0);
        let gi = pinv_sqrt(&g, 1e-14 * scale)?;
        let mut out: Vec<_> = clipped.iter().map(|e| e.conjugate_by(gi.matrix())).collect();
        // anything G does not cover goes to the first element
        let rest = &HermitianOperator::identity(dim) - &HermitianOperator::sum(dim, &out);
        out[0] = &out[0] + &rest;
        Ok(Povm { elements: out })
    }

    /// The two-outcome-per-hypothesis "always guess `k`" measurement.
    pub fn constant_guess(dim: usize, outcomes: usize, k: usize) -> Self {
        let elements = (0..outcomes)
            .map(|i| {
                if i == k {
                    HermitianOperator::identity(dim)
                } else {
                    HermitianOperator::zeros(dim)
                }
            })
            .collect();
        Povm { elements }
    }

    fn common_dim(elements: &[HermitianOperator]) -> Result<usize> {
        let first = elements
            .first()
            .ok_or_else(|| Error::invalid("POVM has no elements"))?;
        let dim = first.dim();
        if let Some((k, e)) = elements.iter().enumerate().find(|(_, e)| e.dim() != dim) {
            return Err(Error::dims(format!(
                "POVM element {k} has dimension {}, expected {dim}",
                e.dim()
            )));
        }
        Ok(dim)
    }

    fn completeness_error_of(dim: usize, elements: &[HermitianOperator]) -> f64 {
        HermitianOperator::sum(dim, elements).max_abs_diff(&HermitianOperator::identity(dim))
    }

    pub fn completeness_error(&self) -> f64 {
        Self::completeness_error_of(self.dim(), &self.elements)
    }

    pub fn elements(&self) -> &[HermitianOperator] {
        &self.elements
    }

    pub fn element(&self, k: usize) -> &HermitianOperator {
        &self.elements[k]
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    /// Same measurement with an extra outcome appended.
    pub fn with_extra(&self, extra: HermitianOperator) -> Self {
        let mut e = self.elements.clone();
        e.push(extra);
        Povm { elements: e }
    }

    /// Conjugates every element by the unitary `u`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        Povm {
            elements: self.elements.iter().map(|e| e.conjugate_by(u)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let half = HermitianOperator::identity(2).scale(0.5);
        assert!(Povm::new(vec![half.clone(), half.clone()]).is_ok());
        assert!(Povm::new(vec![half.clone()]).is_err());
        let neg = HermitianOperator::diag(&[1.5, 1.0]);
        let comp = HermitianOperator::diag(&[-0.5, 0.0]);
        assert!(Povm::new(vec![neg, comp]).is_err());
        assert!(Povm::new(vec![]).is_err());
    }

    #[test]
    fn normalization_restores_identity() {
        let a = HermitianOperator::diag(&[0.7, 0.1]);
        let b = HermitianOperator::diag(&[0.2, 0.3]);
        let p = Povm::normalized_from(vec![a, b]).unwrap();
        assert!(p.completeness_error() < 1e-14);
    }

    #[test]
    fn completion_goes_to_requested_element() {
        let k0 = ComplexMatrix::basis_ket(3, 0);
        let k1 = ComplexMatrix::basis_ket(3, 1);
        let p = Povm::from_kets(&[k0, k1], 1).unwrap();
        assert!((p.element(1).trace() - 2.0).abs() < 1e-15);
    }
}
