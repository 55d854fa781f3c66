use super::hermitian::HermitianOperator;
use super::matrix::{ComplexMatrix, C64, ZERO};
use super::MAX_JACOBI_SWEEPS;
use crate::error::{Error, Result};

/// Spectrum of a Hermitian operator: ascending eigenvalues and unit
/// eigenvectors stored as the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, k: usize) -> ComplexMatrix {
        self.vectors.column(k)
    }

    /// V f(Λ) V†.
    pub fn reconstruct_with(&self, mut f: impl FnMut(f64) -> f64) -> HermitianOperator {
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            let w = f(self.values[k]);
            if w == 0.0 {
                continue;
            }
            for r in 0..n {
                let vr = self.vectors[(r, k)] * w;
                for c in 0..n {
                    out[(r, c)] += vr * self.vectors[(c, k)].conj();
                }
            }
        }
        HermitianOperator::symmetrize(&out)
    }

    pub fn reconstruct(&self) -> HermitianOperator {
        self.reconstruct_with(|x| x)
    }

    /// Projector onto the span of eigenvectors whose eigenvalue satisfies `keep`.
    pub fn spectral_projector(&self, mut keep: impl FnMut(f64) -> bool) -> HermitianOperator {
        self.reconstruct_with(|x| if keep(x) { 1.0 } else { 0.0 })
    }
}

/// Full eigendecomposition by cyclic complex Jacobi rotations.
pub fn hermitian_eigen(op: &HermitianOperator) -> Result<EigenDecomposition> {
    jacobi(op.matrix(), MAX_JACOBI_SWEEPS)
}

fn off_norm_sq(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    s
}

fn jacobi(input: &ComplexMatrix, max_sweeps: usize) -> Result<EigenDecomposition> {
    let n = input.rows();
    let mut a = input.clone();
    let mut v = ComplexMatrix::identity(n);
    let scale: f64 = input.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let target = (4.0 * n as f64 * f64::EPSILON * scale).powi(2);

    let mut converged = n <= 1 || off_norm_sq(&a) <= target;
    let mut sweep = 0;
    while !converged && sweep < max_sweeps {
        sweep += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let b = a[(p, q)];
                let babs = b.norm();
                if babs == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let phase = b / babs;
                // after the phase change D = diag(1, e^{-iφ}) the (p,q) block is real
                let zeta = (aqq - app) / (2.0 * babs);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G = D·R: G_pp = c, G_pq = s, G_qp = -s e^{-iφ}, G_qq = c e^{-iφ}
                let gpp = C64::new(c, 0.0);
                let gpq = C64::new(s, 0.0);
                let gqp = -s * phase.conj();
                let gqq = c * phase.conj();

                // A <- A G (columns p, q)
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * gpp + akq * gqp;
                    a[(k, q)] = akp * gpq + akq * gqq;
                }
                // A <- G† A (rows p, q)
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
                    a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                // V <- V G
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * gpp + vkq * gqp;
                    v[(k, q)] = vkp * gpq + vkq * gqq;
                }
            }
        }
        converged = off_norm_sq(&a) <= target;
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "Jacobi eigensolver did not converge in {max_sweeps} sweeps (dim {n})"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(EigenDecomposition { values, vectors })
}

/// Minimum eigenvalue; the operator counts as PSD when this is ≥ −tol_psd.
pub fn psd_margin(op: &HermitianOperator) -> Result<f64> {
    Ok(hermitian_eigen(op)?.values[0])
}

pub fn max_eigenvalue(op: &HermitianOperator) -> Result<f64> {
    Ok(*hermitian_eigen(op)?.values.last().expect("non-empty spectrum"))
}

/// Tr|X| as the sum of absolute eigenvalues.
pub fn trace_norm(op: &HermitianOperator) -> Result<f64> {
    Ok(hermitian_eigen(op)?.values.iter().map(|x| x.abs()).sum())
}

/// Square root of the positive part.
pub fn sqrt_psd(op: &HermitianOperator) -> Result<HermitianOperator> {
    Ok(hermitian_eigen(op)?.reconstruct_with(|x| x.max(0.0).sqrt()))
}

/// Pseudo-inverse square root: eigenvalues below `cutoff` are treated as zero.
pub fn pinv_sqrt(op: &HermitianOperator, cutoff: f64) -> Result<HermitianOperator> {
    Ok(hermitian_eigen(op)?.reconstruct_with(|x| if x > cutoff { 1.0 / x.sqrt() } else { 0.0 }))
}

/// Lower-triangular Cholesky factor of a Hermitian positive-definite
/// matrix; `None` if a pivot is not strictly positive.
pub fn cholesky(op: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = op.rows();
    let mut l = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = op[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) {
            return None;
        }
        let djj = d.sqrt();
        l[(j, j)] = C64::new(djj, 0.0);
        for i in (j + 1)..n {
            let mut s = op[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / djj;
        }
    }
    Some(l)
}

/// Inverse and log-determinant of a positive-definite matrix from its
/// Cholesky factor; `None` when not positive definite.
pub fn hpd_inverse_logdet(op: &ComplexMatrix) -> Option<(ComplexMatrix, f64)> {
    let n = op.rows();
    let l = cholesky(op)?;
    let logdet = 2.0 * (0..n).map(|i| l[(i, i)].re.ln()).sum::<f64>();
    // invert L by forward substitution, then A^{-1} = L^{-†} L^{-1}
    let mut linv = ComplexMatrix::zeros(n, n);
    for col in 0..n {
        for i in col..n {
            let mut s = if i == col { C64::new(1.0, 0.0) } else { ZERO };
            for k in col..i {
                s -= l[(i, k)] * linv[(k, col)];
            }
            linv[(i, col)] = s / l[(i, i)];
        }
    }
    let inv = linv.adjoint().matmul(&linv);
    Some((inv, logdet))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::matrix::ONE;

    fn sigma_x() -> HermitianOperator {
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 1)] = ONE;
        m[(1, 0)] = ONE;
        HermitianOperator::new(m).unwrap()
    }

    #[test]
    fn pauli_x_spectrum() {
        let e = hermitian_eigen(&sigma_x()).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        assert!(e.reconstruct().max_abs_diff(&sigma_x()) < 1e-14);
    }

    #[test]
    fn complex_offdiagonal_reconstructs() {
        let m = ComplexMatrix::from_fn(4, 4, |r, c| {
            if r == c {
                C64::new(r as f64, 0.0)
            } else if r < c {
                C64::new(0.3 * (r + c) as f64, 0.7 - 0.1 * c as f64)
            } else {
                C64::new(0.3 * (r + c) as f64, -(0.7 - 0.1 * r as f64))
            }
        });
        let h = HermitianOperator::new(m).unwrap();
        let e = hermitian_eigen(&h).unwrap();
        assert!(e.reconstruct().max_abs_diff(&h) < 1e-12);
        let vtv = e.vectors.adjoint().matmul(&e.vectors);
        assert!(vtv.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn identity_margin_is_one() {
        assert!((psd_margin(&HermitianOperator::identity(2)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        assert!(cholesky(sigma_x().matrix()).is_none());
        let (inv, logdet) = hpd_inverse_logdet(&ComplexMatrix::diag_real(&[2.0, 4.0])).unwrap();
        assert!((inv[(1, 1)].re - 0.25).abs() < 1e-15);
        assert!((logdet - 8f64.ln()).abs() < 1e-14);
    }
}
