//! Domino states: a subset-guessing first step on A, perfect
//! discrimination within the subset on B, and the case-by-case check that
//! no B-measurement Ñ beats it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CaseOptions, CaseStrategy, CaseStudyResult};
use crate::ensembles::{builtin_ensemble, domino_factors, domino_subset_ensemble, EnsembleName};
use crate::error::{Error, Result};
use crate::global::{p_corr_global, solve_min_error, Povm};
use crate::operator::{c64, hermitian_eigen, psd_margin, ComplexMatrix, HermitianOperator};
use crate::report::{ConditionReport, Verdict};
use crate::sequential::{
    check_necessary_a, check_necessary_b, gamma_a_sym, p_corr_sequential, random_povm, SequentialStrategy,
};

/// Γ^A = diag(p, q, p) at the optimum.
pub fn domino_p_q() -> (f64, f64) {
    let root = 7f64.sqrt() * 31f64.sqrt();
    ((17.0 + root) / 108.0, (21.0 + root) / 144.0)
}

fn gamma_closed_form() -> HermitianOperator {
    let (p, q) = domino_p_q();
    HermitianOperator::diag(&[p, q, p])
}

fn basis(k: usize) -> ComplexMatrix {
    ComplexMatrix::basis_ket(3, k)
}

/// (|a⟩ + c|b⟩) with real amplitude c.
fn combo(a: usize, b: usize, c: f64) -> ComplexMatrix {
    &basis(a) + &basis(b).scale_real(c)
}

fn u0() -> ComplexMatrix {
    ComplexMatrix::diag_real(&[-1.0, 1.0, 1.0])
}

fn u1() -> ComplexMatrix {
    let one = c64(1.0, 0.0);
    let zero = c64(0.0, 0.0);
    ComplexMatrix::from_row_major(3, 3, vec![zero, zero, one, zero, one, zero, one, zero, zero])
        .expect("3x3 permutation")
}

/// A-measurement: each M_j is a weighted projector onto the zero
/// eigenvector of Γ^A − ρ_j/3, with one weight per symmetry class.
fn domino_a_measurement() -> Result<(Vec<HermitianOperator>, [f64; 2])> {
    let subsets = domino_subset_ensemble();
    let gamma = gamma_closed_form();
    let mut projectors = Vec::with_capacity(8);
    for rho in subsets.ensemble.states() {
        let eig = hermitian_eigen(&(&gamma - &rho.scale(1.0 / 3.0)))?;
        projectors.push(HermitianOperator::projector(&eig.vector(0)));
    }
    // subsets 0–3 contain ψ₁; 4–7 do not
    let class_sum = |c: usize, k: usize| -> f64 { projectors[4 * c..4 * c + 4].iter().map(|p| p.matrix()[(k, k)].re).sum() };
    let (a11, a12, a21, a22) = (class_sum(0, 0), class_sum(1, 0), class_sum(0, 1), class_sum(1, 1));
    let det = a11 * a22 - a12 * a21;
    if det.abs() < 1e-14 {
        return Err(Error::Numerical("domino weight system is singular".into()));
    }
    let w = [(a22 - a12) / det, (a11 - a21) / det];
    if w.iter().any(|&x| x < 0.0) {
        return Err(Error::Numerical(format!("domino weight completion is infeasible: {w:?}")));
    }
    let ms: Vec<HermitianOperator> = projectors
        .iter()
        .enumerate()
        .map(|(j, p)| p.scale(w[j / 4]))
        .collect();
    let dev = HermitianOperator::sum(3, &ms).max_abs_diff(&HermitianOperator::identity(3));
    if dev > 1e-8 {
        return Err(Error::Numerical(format!("domino A-measurement misses the identity by {dev:e}")));
    }
    Ok((ms, w))
}

/// Full sequential strategy for the nine domino states: outcome j of A
/// names subset S_j, and B projects onto the three χ_i of that subset.
pub fn domino_strategy_operators() -> Result<(Vec<HermitianOperator>, Vec<Vec<HermitianOperator>>)> {
    let (ms, _) = domino_a_measurement()?;
    let factors = domino_factors();
    let subsets = domino_subset_ensemble().index_sets;
    let b = subsets
        .iter()
        .map(|set| {
            let mut ops = vec![HermitianOperator::zeros(3); 9];
            for &i in set {
                ops[i] = HermitianOperator::projector(&factors[i].1);
            }
            // the three χ_i span B already; completion only guards rounding
            Ok(Povm::completed(ops, set[0])?.elements().to_vec())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((ms, b))
}

pub fn domino_strategy() -> Result<CaseStudyResult> {
    domino_strategy_with(&CaseOptions::default())
}

pub fn domino_strategy_with(opts: &CaseOptions) -> Result<CaseStudyResult> {
    let ens = builtin_ensemble(EnsembleName::Domino);
    let (a, b) = domino_strategy_operators()?;
    let strategy = SequentialStrategy::from_operators(a, b, &opts.tol)?;
    let p_corr = p_corr_sequential(&ens, &strategy)?;
    let (p, q) = domino_p_q();
    let (_, w) = domino_a_measurement()?;

    let mut res = CaseStudyResult::new("domino", CaseStrategy::Sequential(strategy.clone()), p_corr);
    res.report("necessary_b", check_necessary_b(&ens, &strategy, &opts.tol)?);
    res.report("necessary_a", check_necessary_a(&ens, &strategy, &opts.tol)?);

    res.extra("p", p);
    res.extra("q", q);
    res.extra("sqrt_217", 7f64.sqrt() * 31f64.sqrt());
    res.extra("p_corr_closed_form", 2.0 * p + q);
    res.extra("weight_class_1", w[0]);
    res.extra("weight_class_5", w[1]);
    res.extra(
        "completeness_deviation",
        HermitianOperator::sum(3, strategy.a_povm().elements()).max_abs_diff(&HermitianOperator::identity(3)),
    );
    // both defining inequalities hold with equality
    res.extra("ineq1_residual", (p - 1.0 / 18.0) * (q - 2.0 / 9.0) - (1.0 / (9.0 * 2f64.sqrt())).powi(2));
    res.extra("ineq2_residual", (p - 5.0 / 18.0) * (q - 1.0 / 18.0) - (1.0f64 / 18.0).powi(2));

    let g = gamma_a_sym(&ens, &strategy)?;
    res.extra("gamma_a_deviation", g.max_abs_diff(&gamma_closed_form()));
    let invariance = [u0(), u1()]
        .iter()
        .map(|u| g.conjugate_by(u).max_abs_diff(&g))
        .fold(0.0, f64::max);
    res.extra("gamma_a_symmetry_defect", invariance);

    let subsets = domino_subset_ensemble().ensemble;
    let slack = subsets
        .states()
        .iter()
        .map(|rho| psd_margin(&(&g - &rho.scale(1.0 / 3.0))))
        .collect::<Result<Vec<_>>>()?;
    res.extra("subset_condition_margin", slack.iter().copied().fold(f64::INFINITY, f64::min));

    let global = solve_min_error(&ens, 2000, 1e-12)?;
    res.extra("p_corr_global", p_corr_global(&ens, &global.povm)?);
    Ok(res)
}

/// σ̃ = Σ_k ⟨χ_k|Ñ_k|χ_k⟩ |φ_k⟩⟨φ_k| for a nine-outcome measurement on B.
pub fn domino_sigma_tilde(n: &[HermitianOperator]) -> HermitianOperator {
    let factors = domino_factors();
    let terms: Vec<_> = factors
        .iter()
        .zip(n)
        .map(|((phi, chi), nk)| HermitianOperator::projector(phi).scale(nk.expectation(chi)))
        .collect();
    HermitianOperator::sum(3, &terms)
}

#[derive(Clone, Debug)]
pub struct DominoSweepOptions {
    /// Nodes for the one-parameter cases.
    pub line_points: usize,
    /// Nodes per axis for the two-parameter cases.
    pub plane_points: usize,
    /// Random measurements used to check the V₀, V₁ reductions.
    pub symmetry_samples: usize,
    pub seed: u64,
}

impl Default for DominoSweepOptions {
    fn default() -> Self {
        DominoSweepOptions {
            line_points: 128,
            plane_points: 64,
            symmetry_samples: 64,
            seed: 0,
        }
    }
}

/// Runs the sweep with `grid_points` nodes per parameter.
pub fn domino_certificate_sweep(grid_points: usize) -> Result<ConditionReport> {
    domino_certificate_sweep_with(&DominoSweepOptions {
        line_points: grid_points,
        plane_points: grid_points,
        ..DominoSweepOptions::default()
    })
}

fn proj(k: &ComplexMatrix, w: f64) -> HermitianOperator {
    HermitianOperator::projector(k).scale(w)
}

/// Nine elements, all zero except the listed ones (zero-based indices).
fn measurement(entries: Vec<(usize, HermitianOperator)>) -> Vec<HermitianOperator> {
    let mut n = vec![HermitianOperator::zeros(3); 9];
    for (k, e) in entries {
        n[k] = e;
    }
    n
}

fn fiducials() -> Vec<Vec<HermitianOperator>> {
    let mut out = Vec::new();
    for i in [5, 6] {
        for j in [7, 8] {
            out.push(measurement(vec![(0, proj(&basis(1), 1.0)), (i, proj(&basis(0), 1.0)), (j, proj(&basis(2), 1.0))]));
        }
    }
    for j in [7, 8] {
        out.push(measurement(vec![
            (1, proj(&combo(0, 1, 1.0), 0.5)),
            (2, proj(&combo(0, 1, -1.0), 0.5)),
            (j, proj(&basis(2), 1.0)),
        ]));
    }
    for i in [5, 6] {
        out.push(measurement(vec![
            (3, proj(&combo(1, 2, 1.0), 0.5)),
            (4, proj(&combo(1, 2, -1.0), 0.5)),
            (i, proj(&basis(0), 1.0)),
        ]));
    }
    out
}

fn case1(r: f64, j: usize) -> Vec<HermitianOperator> {
    let sr = r.sqrt();
    measurement(vec![
        (0, proj(&basis(1), 1.0 - r)),
        (1, proj(&combo(0, 1, sr), 0.5)),
        (2, proj(&combo(0, 1, -sr), 0.5)),
        (j, proj(&basis(2), 1.0)),
    ])
}

fn case2(r: f64, i: usize, j: usize) -> Vec<HermitianOperator> {
    let sr = r.sqrt();
    measurement(vec![
        (1, proj(&combo(1, 0, sr), 0.5)),
        (2, proj(&combo(1, 0, -sr), 0.5)),
        (i, proj(&basis(0), 1.0 - r)),
        (j, proj(&basis(2), 1.0)),
    ])
}

fn case3(r: f64, s: f64) -> Vec<HermitianOperator> {
    let (sr, ss) = (r.sqrt(), s.sqrt());
    measurement(vec![
        (0, proj(&basis(1), 1.0 - r - s)),
        (1, proj(&combo(0, 1, sr), 0.5)),
        (2, proj(&combo(0, 1, -sr), 0.5)),
        (3, proj(&combo(2, 1, ss), 0.5)),
        (4, proj(&combo(2, 1, -ss), 0.5)),
    ])
}

fn case4(r: f64, s: f64, i: usize) -> Vec<HermitianOperator> {
    let (sr, ss) = (r.sqrt(), s.sqrt());
    measurement(vec![
        (1, proj(&combo(1, 0, sr), 0.5 * (1.0 - s))),
        (2, proj(&combo(1, 0, -sr), 0.5 * (1.0 - s))),
        (3, proj(&combo(2, 1, ss), 0.5)),
        (4, proj(&combo(2, 1, -ss), 0.5)),
        (i, proj(&basis(0), 1.0 - r * (1.0 - s))),
    ])
}

struct Sweep {
    gamma: HermitianOperator,
    worst: f64,
    invalid: usize,
    nodes: usize,
}

impl Sweep {
    /// Margin of Γ^A − σ̃/9 for one measurement; invalid measurements are
    /// counted and skipped.
    fn visit(&mut self, n: &[HermitianOperator]) -> Result<f64> {
        self.nodes += 1;
        if Povm::new(n.to_vec()).is_err() {
            self.invalid += 1;
            return Ok(f64::INFINITY);
        }
        let m = psd_margin(&(&self.gamma - &domino_sigma_tilde(n).scale(1.0 / 9.0)))?;
        self.worst = self.worst.min(m);
        Ok(m)
    }
}

fn grid(points: usize) -> impl Iterator<Item = f64> + Clone {
    (0..points).map(move |k| k as f64 / points as f64)
}

pub fn domino_certificate_sweep_with(opts: &DominoSweepOptions) -> Result<ConditionReport> {
    if opts.line_points < 32 || opts.plane_points < 32 {
        return Err(Error::invalid("domino sweep needs at least 32 grid points per parameter"));
    }
    let tol = 1e-9;
    let gamma = gamma_closed_form();
    let mut report = ConditionReport::new();
    let mut sweep = Sweep {
        gamma: gamma.clone(),
        worst: f64::INFINITY,
        invalid: 0,
        nodes: 0,
    };

    // fiducials: σ̃ is three times one of the subset states
    let subsets = domino_subset_ensemble().ensemble;
    let mut fid_worst = f64::INFINITY;
    let mut reduction_gap: f64 = 0.0;
    for n in fiducials() {
        fid_worst = fid_worst.min(sweep.visit(&n)?);
        let sigma = domino_sigma_tilde(&n);
        let gap = subsets
            .states()
            .iter()
            .map(|rho| sigma.max_abs_diff(&rho.scale(3.0)))
            .fold(f64::INFINITY, f64::min);
        reduction_gap = reduction_gap.max(gap);
    }
    report.push(Verdict::new("fiducial_margin", fid_worst, tol));
    report.scalar("fiducial_reduction_gap", reduction_gap);

    let mut case_worst = [f64::INFINITY; 4];
    for r in grid(opts.line_points) {
        for j in [7, 8] {
            case_worst[0] = case_worst[0].min(sweep.visit(&case1(r, j))?);
            for i in [5, 6] {
                case_worst[1] = case_worst[1].min(sweep.visit(&case2(r, i, j))?);
            }
        }
    }
    for r in grid(opts.plane_points) {
        for s in grid(opts.plane_points) {
            if r + s <= 1.0 {
                case_worst[2] = case_worst[2].min(sweep.visit(&case3(r, s))?);
            }
            for i in [5, 6] {
                case_worst[3] = case_worst[3].min(sweep.visit(&case4(r, s, i))?);
            }
        }
    }
    for (k, m) in case_worst.iter().enumerate() {
        report.push(Verdict::new(format!("case_{}_margin", k + 1), *m, tol));
    }

    // σ̃ is unchanged by V₀ with Ñ₂ ↔ Ñ₃ and by V₁ with Ñ₄ ↔ Ñ₅
    let v0 = ComplexMatrix::diag_real(&[-1.0, 1.0, 1.0]);
    let v1 = ComplexMatrix::diag_real(&[1.0, 1.0, -1.0]);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut sym: f64 = 0.0;
    for _ in 0..opts.symmetry_samples {
        let n = random_povm(3, 9, &mut rng)?;
        let sigma = domino_sigma_tilde(n.elements());
        for (v, (a, b)) in [(&v0, (1, 2)), (&v1, (3, 4))] {
            let mut moved: Vec<_> = n.elements().iter().map(|e| e.conjugate_by(v)).collect();
            moved.swap(a, b);
            sym = sym.max(domino_sigma_tilde(&moved).max_abs_diff(&sigma));
        }
    }
    report.scalar("symmetry_reduction_defect", sym);
    report.scalar("minimum_margin", sweep.worst);
    report.scalar("nodes", sweep.nodes as f64);
    report.scalar("invalid_nodes", sweep.invalid as f64);
    if sweep.invalid > 0 {
        report.note(format!("{} grid nodes did not define a measurement and were skipped", sweep.invalid));
    }
    Ok(report)
}
