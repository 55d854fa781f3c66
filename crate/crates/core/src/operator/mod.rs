//! Dense complex Hermitian linear algebra: construction, Kronecker
//! products, partial traces, Jacobi eigendecomposition and PSD margins.

mod eigen;
mod hermitian;
mod matrix;
mod partial;

pub use eigen::{
    cholesky, hermitian_eigen, hpd_inverse_logdet, max_eigenvalue, pinv_sqrt, psd_margin, sqrt_psd,
    trace_norm, EigenDecomposition,
};
pub use hermitian::HermitianOperator;
pub use matrix::{ComplexMatrix, C64};
pub use partial::{
    contract_a, contract_b, partial_trace, partial_trace_matrix, sandwich_a, tensor_product,
    tensor_product_with_max, Subsystem,
};

/// Largest operator dimension accepted by tensor products.
pub const MAX_DIM: usize = 64;
pub const MAX_JACOBI_SWEEPS: usize = 100;

pub const TOL_HERM: f64 = 1e-10;
pub const TOL_EIG: f64 = 1e-9;
pub const TOL_PSD: f64 = 1e-8;

/// Numerical tolerances shared by every check in the crate.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    pub herm: f64,
    pub eig: f64,
    pub psd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            herm: TOL_HERM,
            eig: TOL_EIG,
            psd: TOL_PSD,
        }
    }
}

/// Builds `a + i b` concisely.
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
