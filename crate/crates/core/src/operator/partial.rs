use super::hermitian::HermitianOperator;
use super::matrix::{ComplexMatrix, ZERO};
use super::MAX_DIM;
use crate::error::{Error, Result};

/// Which factor of a bipartite space to keep when tracing out the other.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Kronecker product `a ⊗ b`, rejected when the result exceeds [`MAX_DIM`].
pub fn tensor_product(a: &HermitianOperator, b: &HermitianOperator) -> Result<HermitianOperator> {
    tensor_product_with_max(a, b, MAX_DIM)
}

pub fn tensor_product_with_max(
    a: &HermitianOperator,
    b: &HermitianOperator,
    max_dim: usize,
) -> Result<HermitianOperator> {
    let dim = a.dim().saturating_mul(b.dim());
    if dim > max_dim {
        return Err(Error::invalid(format!(
            "tensor product dimension {dim} exceeds maximum {max_dim}"
        )));
    }
    Ok(HermitianOperator::symmetrize(&a.matrix().kron(b.matrix())))
}

/// Partial trace over a general (not necessarily Hermitian) square matrix on
/// `dim_a * dim_b`, keeping `keep`.
pub fn partial_trace_matrix(
    op: &ComplexMatrix,
    (dim_a, dim_b): (usize, usize),
    keep: Subsystem,
) -> Result<ComplexMatrix> {
    if !op.is_square() || dim_a == 0 || dim_b == 0 || op.rows() != dim_a * dim_b {
        return Err(Error::dims(format!(
            "dims ({dim_a}, {dim_b}) do not factor a {}x{} operator",
            op.rows(),
            op.cols()
        )));
    }
    Ok(match keep {
        Subsystem::A => ComplexMatrix::from_fn(dim_a, dim_a, |r, c| {
            (0..dim_b).fold(ZERO, |acc, k| acc + op[(r * dim_b + k, c * dim_b + k)])
        }),
        Subsystem::B => ComplexMatrix::from_fn(dim_b, dim_b, |r, c| {
            (0..dim_a).fold(ZERO, |acc, k| acc + op[(k * dim_b + r, k * dim_b + c)])
        }),
    })
}

pub fn partial_trace(
    op: &HermitianOperator,
    dims: (usize, usize),
    keep: Subsystem,
) -> Result<HermitianOperator> {
    Ok(HermitianOperator::symmetrize(&partial_trace_matrix(op.matrix(), dims, keep)?))
}

/// Tr_B(ρ (𝟙_A ⊗ N)) as an operator on A.
pub fn contract_b(
    rho: &HermitianOperator,
    n_b: &HermitianOperator,
    (dim_a, dim_b): (usize, usize),
) -> Result<ComplexMatrix> {
    check_factor(rho, dim_a, dim_b, n_b.dim(), dim_b)?;
    let n = n_b.matrix();
    // (ρ(𝟙⊗N))_{(a,k),(a',k')} summed over k = k' gives Σ_{k,l} ρ_{(a,k),(a',l)} N_{l,k}
    Ok(ComplexMatrix::from_fn(dim_a, dim_a, |r, c| {
        let mut acc = ZERO;
        for k in 0..dim_b {
            for l in 0..dim_b {
                acc += rho.matrix()[(r * dim_b + k, c * dim_b + l)] * n[(l, k)];
            }
        }
        acc
    }))
}

/// Tr_A(ρ (M ⊗ 𝟙_B)) as an operator on B.
pub fn contract_a(
    rho: &HermitianOperator,
    m_a: &HermitianOperator,
    (dim_a, dim_b): (usize, usize),
) -> Result<ComplexMatrix> {
    check_factor(rho, dim_a, dim_b, m_a.dim(), dim_a)?;
    let m = m_a.matrix();
    Ok(ComplexMatrix::from_fn(dim_b, dim_b, |r, c| {
        let mut acc = ZERO;
        for k in 0..dim_a {
            for l in 0..dim_a {
                acc += rho.matrix()[(k * dim_b + r, l * dim_b + c)] * m[(l, k)];
            }
        }
        acc
    }))
}

/// ⟨λ|ρ|λ⟩ with |λ⟩ acting on A: the (unnormalized) operator left on B.
pub fn sandwich_a(
    rho: &HermitianOperator,
    lambda: &ComplexMatrix,
    (dim_a, dim_b): (usize, usize),
) -> Result<HermitianOperator> {
    check_factor(rho, dim_a, dim_b, lambda.rows(), dim_a)?;
    let m = ComplexMatrix::from_fn(dim_b, dim_b, |r, c| {
        let mut acc = ZERO;
        for k in 0..dim_a {
            for l in 0..dim_a {
                acc += lambda[(k, 0)].conj() * rho.matrix()[(k * dim_b + r, l * dim_b + c)] * lambda[(l, 0)];
            }
        }
        acc
    });
    Ok(HermitianOperator::symmetrize(&m))
}

fn check_factor(rho: &HermitianOperator, dim_a: usize, dim_b: usize, got: usize, want: usize) -> Result<()> {
    if rho.dim() != dim_a * dim_b {
        return Err(Error::dims(format!(
            "dims ({dim_a}, {dim_b}) do not factor dimension {}",
            rho.dim()
        )));
    }
    if got != want {
        return Err(Error::dims(format!("local operator has dimension {got}, expected {want}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::C64;

    #[test]
    fn computational_basis_projector_product() {
        let p0 = HermitianOperator::projector(&ComplexMatrix::basis_ket(2, 0));
        let p1 = HermitianOperator::projector(&ComplexMatrix::basis_ket(2, 1));
        let t = tensor_product(&p0, &p1).unwrap();
        assert_eq!(t, HermitianOperator::diag(&[0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn overflow_is_rejected() {
        let big = HermitianOperator::identity(9);
        assert!(tensor_product(&big, &big).is_err());
        assert!(tensor_product_with_max(&big, &big, 81).is_ok());
    }

    #[test]
    fn bell_reduced_state_is_maximally_mixed() {
        let s = 1.0 / 2f64.sqrt();
        let bell = ComplexMatrix::ket(&[C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0)]);
        let rho = HermitianOperator::projector(&bell);
        let red = partial_trace(&rho, (2, 2), Subsystem::B).unwrap();
        assert!(red.max_abs_diff(&HermitianOperator::identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn bad_factorization_rejected() {
        let rho = HermitianOperator::identity(6);
        assert!(partial_trace(&rho, (2, 2), Subsystem::A).is_err());
        assert!(partial_trace(&rho, (2, 3), Subsystem::A).is_ok());
    }
}
