//! Interior-point solver for minimum-error discrimination of weighted
//! operators {W_j}: maximize Σ_j Tr(W_j π_j) over POVMs.
//!
//! The dual problem, minimize Tr(Y) subject to Y ⪰ W_j, is followed along
//! its log-barrier central path. On that path π_j = (Y − W_j)^{-1}/t is a
//! POVM with duality gap m/t. A final polish re-solves Y on the detected
//! kernels of Y − W_j and projects the POVM onto them so that the
//! optimality conditions hold to rounding error.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Povm;
use crate::error::{Error, Result};
use crate::operator::{
    hermitian_eigen, hpd_inverse_logdet, max_eigenvalue, ComplexMatrix, HermitianOperator, C64,
};

#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// Cap on Newton steps across all barrier stages.
    pub max_iters: usize,
    /// Target duality gap, relative to the largest eigenvalue among the W_j.
    pub tol: f64,
    /// Randomizes the dual starting point.
    pub seed: Option<u64>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_iters: 2000,
            tol: 1e-10,
            seed: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct WeightedSolution {
    pub povm: Povm,
    /// Σ_j Tr(W_j π_j) for the returned POVM.
    pub value: f64,
    /// Tr(Y) for a strictly feasible dual Y ⪰ W_j: an upper bound on the optimum.
    pub dual_bound: f64,
    /// Σ_j W_j π_j, symmetrized.
    pub gamma: HermitianOperator,
    pub iterations: usize,
    pub converged: bool,
}

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Orthonormal basis of n×n Hermitian matrices under Re Tr(A B):
/// E_kk, then (E_kl + E_lk)/√2 and i(E_kl − E_lk)/√2 for k < l.
#[derive(Clone, Copy)]
struct HermBasis {
    n: usize,
}

impl HermBasis {
    fn len(&self) -> usize {
        self.n * self.n
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.n;
        (0..n).flat_map(move |k| ((k + 1)..n).map(move |l| (k, l)))
    }

    fn from_coords(&self, y: &[f64]) -> ComplexMatrix {
        let n = self.n;
        let mut m = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = C64::new(y[k], 0.0);
        }
        for (idx, (k, l)) in self.pairs().enumerate() {
            let s = y[n + 2 * idx];
            let a = y[n + 2 * idx + 1];
            m[(k, l)] = C64::new(s, a) * SQRT_HALF;
            m[(l, k)] = C64::new(s, -a) * SQRT_HALF;
        }
        m
    }

    /// Re Tr(B_a A) for every basis element.
    fn coords(&self, a: &ComplexMatrix) -> Vec<f64> {
        let n = self.n;
        let mut out = Vec::with_capacity(self.len());
        for k in 0..n {
            out.push(a[(k, k)].re);
        }
        for (k, l) in self.pairs() {
            out.push((a[(l, k)].re + a[(k, l)].re) * SQRT_HALF);
            out.push((a[(k, l)].im - a[(l, k)].im) * SQRT_HALF);
        }
        out
    }

    fn trace_coords(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.len()];
        v[..self.n].iter_mut().for_each(|x| *x = 1.0);
        v
    }

    /// Column j of the basis element B_a times the vector v: (B_a v) as a
    /// full n-vector.
    fn apply(&self, a: usize, v: &[C64]) -> Vec<C64> {
        let n = self.n;
        let mut out = vec![C64::new(0.0, 0.0); n];
        if a < n {
            out[a] = v[a];
            return out;
        }
        let idx = (a - n) / 2;
        let (k, l) = self.pairs().nth(idx).expect("basis index in range");
        if (a - n).is_multiple_of(2) {
            out[k] = v[l] * SQRT_HALF;
            out[l] = v[k] * SQRT_HALF;
        } else {
            out[k] = C64::new(0.0, 1.0) * v[l] * SQRT_HALF;
            out[l] = C64::new(0.0, -1.0) * v[k] * SQRT_HALF;
        }
        out
    }
}

struct Barrier<'a> {
    basis: HermBasis,
    ops: &'a [ComplexMatrix],
}

struct Eval {
    value: f64,
    inverses: Vec<ComplexMatrix>,
}

impl Barrier<'_> {
    /// t·Tr(Y) − Σ log det(Y − W_j); `None` outside the domain.
    fn eval(&self, y: &[f64], t: f64) -> Option<Eval> {
        let ymat = self.basis.from_coords(y);
        let trace: f64 = y[..self.basis.n].iter().sum();
        let mut value = t * trace;
        let mut inverses = Vec::with_capacity(self.ops.len());
        for w in self.ops {
            let s = &ymat - w;
            let (inv, logdet) = hpd_inverse_logdet(&s)?;
            value -= logdet;
            inverses.push(inv);
        }
        Some(Eval { value, inverses })
    }

    fn gradient(&self, ev: &Eval, t: f64) -> Vec<f64> {
        let mut g: Vec<f64> = self.basis.trace_coords().iter().map(|x| t * x).collect();
        for inv in &ev.inverses {
            for (gi, ci) in g.iter_mut().zip(self.basis.coords(inv)) {
                *gi -= ci;
            }
        }
        g
    }

    fn hessian(&self, ev: &Eval) -> DMatrix<f64> {
        let n = self.basis.n;
        let d = self.basis.len();
        let mut h = DMatrix::<f64>::zeros(d, d);
        let pairs: Vec<(usize, usize)> = self.basis.pairs().collect();
        for w in &ev.inverses {
            for a in 0..d {
                // W B_a W built from the sparse structure of B_a
                let m = if a < n {
                    ComplexMatrix::from_fn(n, n, |r, c| w[(r, a)] * w[(a, c)])
                } else {
                    let (k, l) = pairs[(a - n) / 2];
                    if (a - n).is_multiple_of(2) {
                        ComplexMatrix::from_fn(n, n, |r, c| {
                            (w[(r, k)] * w[(l, c)] + w[(r, l)] * w[(k, c)]) * SQRT_HALF
                        })
                    } else {
                        ComplexMatrix::from_fn(n, n, |r, c| {
                            C64::new(0.0, 1.0) * (w[(r, k)] * w[(l, c)] - w[(r, l)] * w[(k, c)]) * SQRT_HALF
                        })
                    }
                };
                for (b, v) in self.basis.coords(&m).into_iter().enumerate() {
                    h[(a, b)] += v;
                }
            }
        }
        // symmetrize rounding
        let ht = h.transpose();
        (h + ht) * 0.5
    }
}

fn solve_spd(h: &DMatrix<f64>, rhs: &DVector<f64>) -> Option<DVector<f64>> {
    if let Some(ch) = h.clone().cholesky() {
        return Some(ch.solve(rhs));
    }
    let scale = h.diagonal().amax().max(1e-300);
    let mut ridge = 1e-14 * scale;
    for _ in 0..20 {
        let hr = h + DMatrix::<f64>::identity(h.nrows(), h.ncols()) * ridge;
        if let Some(ch) = hr.cholesky() {
            return Some(ch.solve(rhs));
        }
        ridge *= 10.0;
    }
    None
}

/// min ‖x − x0‖ subject to A x = b in the least-squares sense.
fn min_norm_correction(a: &DMatrix<f64>, b: &DVector<f64>, x0: &DVector<f64>) -> Option<DVector<f64>> {
    let resid = b - a * x0;
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.amax();
    let delta = svd.solve(&resid, 1e-12 * smax.max(1e-300)).ok()?;
    Some(x0 + delta)
}

/// Maximizes Σ_j Tr(W_j π_j) over POVMs {π_j}.
pub fn solve_weighted(ops: &[HermitianOperator], opts: &SolverOptions) -> Result<WeightedSolution> {
    let m = ops.len();
    let first = ops.first().ok_or_else(|| Error::invalid("no operators to discriminate"))?;
    let n = first.dim();
    if ops.iter().any(|o| o.dim() != n) {
        return Err(Error::dims("operators to discriminate differ in dimension"));
    }
    let scale = ops
        .iter()
        .map(max_eigenvalue)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    if m == 1 || scale <= 1e-300 {
        let povm = Povm::constant_guess(n, m, 0);
        return Ok(finish(ops, povm, scale.max(0.0) * n as f64, 0, true));
    }
    let scaled: Vec<ComplexMatrix> = ops.iter().map(|o| o.matrix().scale_real(1.0 / scale)).collect();
    let basis = HermBasis { n };
    let barrier = Barrier { basis, ops: &scaled };

    let mut y = basis.coords(&ComplexMatrix::identity(n).scale_real(2.0));
    if let Some(seed) = opts.seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (k, yk) in y.iter_mut().enumerate() {
            let amp = if k < n { 0.5 } else { 0.2 };
            *yk += rng.gen_range(-amp..amp);
        }
        for yk in y.iter_mut().take(n) {
            *yk += 1.0;
        }
    }
    let mut t = 1.0;
    let mut iterations = 0;
    let mut converged = false;
    let mut budget_exhausted = false;
    let mut ev = barrier
        .eval(&y, t)
        .ok_or_else(|| Error::Numerical("infeasible dual start".into()))?;

    'outer: loop {
        // centering
        for _ in 0..200 {
            if iterations >= opts.max_iters {
                budget_exhausted = true;
                break 'outer;
            }
            let g = barrier.gradient(&ev, t);
            let h = barrier.hessian(&ev);
            let gv = DVector::from_vec(g.clone());
            let Some(step) = solve_spd(&h, &(-&gv)) else {
                break;
            };
            let dec = -gv.dot(&step);
            // the barrier value carries rounding of order ε·|value|
            if !(dec > 0.0) || dec * 0.5 < 1e-11 + 1e-14 * ev.value.abs() {
                break;
            }
            iterations += 1;
            let mut alpha = 1.0;
            let mut accepted = None;
            for _ in 0..40 {
                let trial: Vec<f64> = y.iter().zip(step.iter()).map(|(a, d)| a + alpha * d).collect();
                if let Some(tev) = barrier.eval(&trial, t) {
                    if tev.value <= ev.value - 0.25 * alpha * dec {
                        accepted = Some((trial, tev));
                        break;
                    }
                }
                alpha *= 0.5;
            }
            match accepted {
                Some((ny, nev)) => {
                    y = ny;
                    ev = nev;
                }
                None => break,
            }
        }
        if (m as f64) / t <= opts.tol {
            converged = true;
            break;
        }
        t *= 10.0;
        ev = barrier
            .eval(&y, t)
            .ok_or_else(|| Error::Numerical("barrier left its domain".into()))?;
    }
    let _ = budget_exhausted;

    let dual_bound = scale * y[..n].iter().sum::<f64>();
    let central: Vec<HermitianOperator> = ev
        .inverses
        .iter()
        .map(|inv| HermitianOperator::symmetrize(&inv.scale_real(1.0 / t)))
        .collect();
    let central_povm = Povm::normalized_from(central.clone())?;
    let central_sol = finish(ops, central_povm, dual_bound, iterations, converged);

    let polished = polish(&basis, &scaled, &y, &central, t)
        .ok()
        .flatten()
        .map(|p| finish(ops, p, dual_bound, iterations, converged));

    Ok(match polished {
        Some(p) if quality(ops, &p) >= quality(ops, &central_sol) => p,
        _ => central_sol,
    })
}

fn finish(ops: &[HermitianOperator], povm: Povm, dual_bound: f64, iterations: usize, converged: bool) -> WeightedSolution {
    let n = povm.dim();
    let mut gamma = ComplexMatrix::zeros(n, n);
    let mut value = 0.0;
    for (w, p) in ops.iter().zip(povm.elements()) {
        let wp = w.mul(p);
        value += wp.trace().re;
        gamma += &wp;
    }
    WeightedSolution {
        povm,
        value,
        dual_bound: dual_bound.max(value),
        gamma: HermitianOperator::symmetrize(&gamma),
        iterations,
        converged,
    }
}

/// Worst optimality margin: min_j λ_min(Γ − W_j) combined with the value.
fn quality(ops: &[HermitianOperator], sol: &WeightedSolution) -> f64 {
    let mut worst = f64::INFINITY;
    for w in ops {
        let d = &sol.gamma - w;
        match hermitian_eigen(&d) {
            Ok(e) => worst = worst.min(e.values[0]),
            Err(_) => return f64::NEG_INFINITY,
        }
    }
    worst
}

/// Kernel basis (as columns) of Y − W_j: eigenvalues below `threshold`.
fn kernel(y: &ComplexMatrix, w: &ComplexMatrix, threshold: f64) -> Result<Vec<Vec<C64>>> {
    let s = HermitianOperator::symmetrize(&(y - w));
    let e = hermitian_eigen(&s)?;
    let n = s.dim();
    Ok((0..n)
        .filter(|&k| e.values[k] < threshold)
        .map(|k| (0..n).map(|r| e.vectors[(r, k)]).collect())
        .collect())
}

fn polish(
    basis: &HermBasis,
    ops: &[ComplexMatrix],
    y0: &[f64],
    central: &[HermitianOperator],
    t: f64,
) -> Result<Option<Povm>> {
    let n = basis.n;
    let threshold = 1.0 / t.sqrt();
    let mut y = DVector::from_vec(y0.to_vec());

    for _ in 0..3 {
        let ymat = basis.from_coords(y.as_slice());
        let kernels = ops
            .iter()
            .map(|w| kernel(&ymat, w, threshold))
            .collect::<Result<Vec<_>>>()?;
        let rows: usize = kernels.iter().map(|k| 2 * n * k.len()).sum();
        if rows == 0 {
            return Ok(None);
        }
        let d = basis.len();
        let mut a = DMatrix::<f64>::zeros(rows, d);
        let mut b = DVector::<f64>::zeros(rows);
        let mut row = 0;
        for (w, ker) in ops.iter().zip(&kernels) {
            for v in ker {
                // (Y − W) v = 0  ⇔  Y v = W v
                let wv: Vec<C64> = (0..n)
                    .map(|r| (0..n).map(|c| w[(r, c)] * v[c]).sum())
                    .collect();
                let cols: Vec<Vec<C64>> = (0..d).map(|ai| basis.apply(ai, v)).collect();
                for r in 0..n {
                    for (ai, col) in cols.iter().enumerate() {
                        a[(row, ai)] = col[r].re;
                        a[(row + 1, ai)] = col[r].im;
                    }
                    b[row] = wv[r].re;
                    b[row + 1] = wv[r].im;
                    row += 2;
                }
            }
        }
        match min_norm_correction(&a, &b, &y) {
            Some(ny) => y = ny,
            None => return Ok(None),
        }
    }

    // project the central-path POVM onto the kernels and restore completeness
    let ymat = basis.from_coords(y.as_slice());
    let kernels = ops
        .iter()
        .map(|w| kernel(&ymat, w, threshold))
        .collect::<Result<Vec<_>>>()?;
    let mut x0 = Vec::new();
    let mut blocks = Vec::new();
    for (ker, pi) in kernels.iter().zip(central) {
        let k = ker.len();
        let v = ComplexMatrix::from_fn(n, k.max(1), |r, c| if k == 0 { C64::new(0.0, 0.0) } else { ker[c][r] });
        if k == 0 {
            blocks.push((v, 0));
            continue;
        }
        let xb = v.adjoint().matmul(pi.matrix()).matmul(&v);
        x0.extend(HermBasis { n: k }.coords(&xb));
        blocks.push((v, k));
    }
    let nvars = x0.len();
    if nvars == 0 {
        return Ok(None);
    }
    // columns: coords(V E V†) for each block basis element E
    let d = basis.len();
    let mut a = DMatrix::<f64>::zeros(d, nvars);
    let mut col = 0;
    for (v, k) in &blocks {
        if *k == 0 {
            continue;
        }
        let kb = HermBasis { n: *k };
        for ei in 0..kb.len() {
            let mut unit = vec![0.0; kb.len()];
            unit[ei] = 1.0;
            let e = kb.from_coords(&unit);
            let full = v.matmul(&e).matmul(&v.adjoint());
            for (r, val) in basis.coords(&full).into_iter().enumerate() {
                a[(r, col)] = val;
            }
            col += 1;
        }
    }
    let b = DVector::from_vec(basis.trace_coords());
    let x = match min_norm_correction(&a, &b, &DVector::from_vec(x0)) {
        Some(x) => x,
        None => return Ok(None),
    };
    let mut elements = Vec::with_capacity(ops.len());
    let mut off = 0;
    for (v, k) in &blocks {
        if *k == 0 {
            elements.push(HermitianOperator::zeros(n));
            continue;
        }
        let kb = HermBasis { n: *k };
        let xb = kb.from_coords(&x.as_slice()[off..off + kb.len()]);
        off += kb.len();
        elements.push(HermitianOperator::symmetrize(&v.matmul(&xb).matmul(&v.adjoint())));
    }
    Ok(Some(Povm::normalized_from(elements)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_round_trip() {
        let b = HermBasis { n: 3 };
        let y: Vec<f64> = (0..9).map(|k| k as f64 * 0.37 - 1.0).collect();
        let m = b.from_coords(&y);
        assert!(HermitianOperator::new(m.clone()).is_ok());
        let back = b.coords(&m);
        for (a, c) in y.iter().zip(back) {
            assert!((a - c).abs() < 1e-14);
        }
    }

    #[test]
    fn apply_matches_dense_product() {
        let b = HermBasis { n: 3 };
        let v = vec![C64::new(0.3, 0.1), C64::new(-0.2, 0.5), C64::new(0.7, -0.4)];
        for a in 0..9 {
            let mut unit = vec![0.0; 9];
            unit[a] = 1.0;
            let ba = b.from_coords(&unit);
            let dense = ba.matmul(&ComplexMatrix::ket(&v));
            let sparse = b.apply(a, &v);
            for r in 0..3 {
                assert!((dense[(r, 0)] - sparse[r]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn orthogonal_states_are_perfect() {
        let ops = vec![
            HermitianOperator::diag(&[0.5, 0.0]),
            HermitianOperator::diag(&[0.0, 0.5]),
        ];
        let sol = solve_weighted(&ops, &SolverOptions::default()).unwrap();
        assert!((sol.value - 1.0).abs() < 1e-10, "{}", sol.value);
        assert!(sol.dual_bound >= sol.value);
    }
}
