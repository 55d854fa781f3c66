use super::SequentialStrategy;
use crate::ensembles::Ensemble;
use crate::error::{Error, Result};
use crate::operator::{
    contract_a, contract_b, hermitian_eigen, partial_trace, tensor_product, ComplexMatrix, HermitianOperator,
    Subsystem, Tolerances,
};
use crate::report::{ConditionReport, Verdict, Witness};

pub const LABEL_NECESSARY_B: &str = "necessary_b";
pub const LABEL_NECESSARY_A: &str = "necessary_a";

/// Outcome probabilities below this are treated as never occurring.
pub const REACHABLE_EPS: f64 = 1e-14;

/// p_i Tr_A(ρ_i (M ⊗ 𝟙)) for every hypothesis i: the weighted B-operators
/// left after A-outcome M.
pub fn branch_operators(ensemble: &Ensemble, m: &HermitianOperator) -> Result<Vec<HermitianOperator>> {
    let dims = ensemble.require_bipartite()?;
    ensemble
        .states()
        .iter()
        .zip(ensemble.priors())
        .map(|(rho, p)| Ok(HermitianOperator::symmetrize(&contract_a(rho, m, dims)?).scale(*p)))
        .collect()
}

/// K_j = Σ_i p_i Tr_B(ρ_i (𝟙 ⊗ N_{i|j})) for every A-outcome j; K_j = c_j σ_j.
pub fn induced_operators(ensemble: &Ensemble, strategy: &SequentialStrategy) -> Result<Vec<HermitianOperator>> {
    let dims = strategy.check_compatible(ensemble)?;
    (0..strategy.outcomes())
        .map(|j| {
            let mut k = ComplexMatrix::zeros(dims.0, dims.0);
            for (i, (rho, p)) in ensemble.states().iter().zip(ensemble.priors()).enumerate() {
                k += &contract_b(rho, strategy.n(i, j), dims)?.scale_real(*p);
            }
            Ok(HermitianOperator::symmetrize(&k))
        })
        .collect()
}

/// Σ_{ij} p_i Tr(ρ_i (M_j ⊗ N_{i|j})).
pub fn p_corr_sequential(ensemble: &Ensemble, strategy: &SequentialStrategy) -> Result<f64> {
    strategy.check_compatible(ensemble)?;
    let mut total = 0.0;
    for j in 0..strategy.outcomes() {
        for (i, w) in branch_operators(ensemble, strategy.m(j))?.iter().enumerate() {
            total += w.trace_with(strategy.n(i, j));
        }
    }
    Ok(total)
}

/// Same quantity from full tensor products M_j ⊗ N_{i|j} on AB.
pub fn p_corr_sequential_joint(ensemble: &Ensemble, strategy: &SequentialStrategy) -> Result<f64> {
    strategy.check_compatible(ensemble)?;
    let mut total = 0.0;
    for j in 0..strategy.outcomes() {
        for (i, (rho, p)) in ensemble.states().iter().zip(ensemble.priors()).enumerate() {
            let op = tensor_product(strategy.m(j), strategy.n(i, j))?;
            total += p * rho.trace_with(&op);
        }
    }
    Ok(total)
}

/// Σ_{ij} p_i Tr_A(ρ_i^A M_j) Tr_B(ρ_i^B N_{i|j}) with ρ_i^{A,B} the
/// marginals; equals [`p_corr_sequential`] for product-state ensembles.
pub fn p_corr_sequential_factorized(ensemble: &Ensemble, strategy: &SequentialStrategy) -> Result<f64> {
    let dims = strategy.check_compatible(ensemble)?;
    let mut total = 0.0;
    for (i, (rho, p)) in ensemble.states().iter().zip(ensemble.priors()).enumerate() {
        let ra = partial_trace(rho, dims, Subsystem::A)?;
        let rb = partial_trace(rho, dims, Subsystem::B)?;
        for j in 0..strategy.outcomes() {
            total += p * ra.trace_with(strategy.m(j)) * rb.trace_with(strategy.n(i, j));
        }
    }
    Ok(total)
}

/// Posterior priors p_{i|j} and conditional B-states σ_{i|j} after the
/// A-outcome `a_element`. States with zero posterior get 𝟙/d_B.
pub fn bayes_posteriors(
    ensemble: &Ensemble,
    a_element: &HermitianOperator,
) -> Result<(Vec<f64>, Vec<HermitianOperator>)> {
    let (dim_a, dim_b) = ensemble.require_bipartite()?;
    if a_element.dim() != dim_a {
        return Err(Error::dims(format!(
            "A-element has dimension {}, expected {dim_a}",
            a_element.dim()
        )));
    }
    let ops = branch_operators(ensemble, a_element)?;
    let total: f64 = ops.iter().map(|o| o.trace()).sum();
    if !(total > REACHABLE_EPS) {
        return Err(Error::UnreachableOutcome(0));
    }
    let posteriors = ops.iter().map(|o| o.trace() / total).collect();
    let states = ops
        .iter()
        .map(|o| {
            let t = o.trace();
            if t > REACHABLE_EPS {
                o.scale(1.0 / t)
            } else {
                HermitianOperator::identity(dim_b).scale(1.0 / dim_b as f64)
            }
        })
        .collect();
    Ok((posteriors, states))
}

/// The A-side problem induced by fixing the B-measurements.
#[derive(Clone, Debug)]
pub struct InducedAEnsemble {
    /// σ_j, or `None` for outcomes j whose weight c_j vanishes.
    pub sigma_states: Vec<Option<HermitianOperator>>,
    pub weights_c: Vec<f64>,
    pub probs_q: Vec<f64>,
}

impl InducedAEnsemble {
    pub fn degenerate_branches(&self) -> Vec<usize> {
        (0..self.sigma_states.len())
            .filter(|&j| self.sigma_states[j].is_none())
            .collect()
    }

    /// c_j σ_j (zero for degenerate branches).
    pub fn weighted(&self, j: usize, dim_a: usize) -> HermitianOperator {
        match &self.sigma_states[j] {
            Some(s) => s.scale(self.weights_c[j]),
            None => HermitianOperator::zeros(dim_a),
        }
    }
}

pub fn induced_a_ensemble(ensemble: &Ensemble, strategy: &SequentialStrategy) -> Result<InducedAEnsemble> {
    let ks = induced_operators(ensemble, strategy)?;
    let weights_c: Vec<f64> = ks.iter().map(|k| k.trace()).collect();
    let total: f64 = weights_c.iter().sum();
    if !(total > REACHABLE_EPS) {
        return Err(Error::invalid("strategy never guesses correctly: all induced weights vanish"));
    }
    let sigma_states = ks
        .iter()
        .zip(&weights_c)
        .map(|(k, c)| (*c > REACHABLE_EPS).then(|| k.scale(1.0 / c)))
        .collect();
    Ok(InducedAEnsemble {
        sigma_states,
        probs_q: weights_c.iter().map(|c| c / total).collect(),
        weights_c,
    })
}

/// Γ^A = Σ_{ij} p_i Tr_B(ρ_i (𝟙 ⊗ N_{i|j})) M_j, which need not be Hermitian.
pub fn gamma_a(ensemble: &Ensemble, strategy: &SequentialStrategy) -> Result<ComplexMatrix> {
    let ks = induced_operators(ensemble, strategy)?;
    let dim_a = strategy.dims().0;
    let mut g = ComplexMatrix::zeros(dim_a, dim_a);
    for (j, k) in ks.iter().enumerate() {
        g += &k.mul(strategy.m(j));
    }
    Ok(g)
}

/// Hermitian part of Γ^A, Σ_j ½{K_j, M_j}.
pub fn gamma_a_sym(ensemble: &Ensemble, strategy: &SequentialStrategy) -> Result<HermitianOperator> {
    Ok(HermitianOperator::symmetrize(&gamma_a(ensemble, strategy)?))
}

/// For every branch j and hypothesis k:
/// Σ_i p_i Tr_A(ρ_i M_j) N_{i|j} − p_k Tr_A(ρ_k M_j) ⪰ 0 (Hermitian part).
pub fn check_necessary_b(
    ensemble: &Ensemble,
    strategy: &SequentialStrategy,
    tol: &Tolerances,
) -> Result<ConditionReport> {
    let (_, dim_b) = strategy.check_compatible(ensemble)?;
    let mut report = ConditionReport::new();
    let mut worst = f64::INFINITY;
    let mut worst_witness = None;
    let mut slack: f64 = 0.0;
    for j in 0..strategy.outcomes() {
        let ops = branch_operators(ensemble, strategy.m(j))?;
        let mut g = ComplexMatrix::zeros(dim_b, dim_b);
        for (i, w) in ops.iter().enumerate() {
            g += &w.mul(strategy.n(i, j));
        }
        let g_sym = HermitianOperator::symmetrize(&g);
        let mut branch_worst = f64::INFINITY;
        for (k, w) in ops.iter().enumerate() {
            let eig = hermitian_eigen(&(&g_sym - w))?;
            branch_worst = branch_worst.min(eig.values[0]);
            if eig.values[0] < worst {
                worst = eig.values[0];
                worst_witness = Some(eig.vector(0));
            }
            let r = (&g - w.matrix()).matmul(strategy.n(k, j).matrix());
            slack = slack.max(r.max_abs());
        }
        report.scalar(format!("branch_{j}_margin"), branch_worst);
    }
    let mut v = Verdict::new(LABEL_NECESSARY_B, worst, tol.psd);
    if !v.pass {
        if let Some(w) = worst_witness {
            v = v.with_witness(Witness::Vector(w));
        }
    }
    report.push(v);
    report.scalar("branch_slackness_residual", slack);
    Ok(report)
}

/// For every k: Γ^A_sym − Σ_i p_i Tr_B(ρ_i (𝟙 ⊗ N_{i|k})) ⪰ 0.
pub fn check_necessary_a(
    ensemble: &Ensemble,
    strategy: &SequentialStrategy,
    tol: &Tolerances,
) -> Result<ConditionReport> {
    let ks = induced_operators(ensemble, strategy)?;
    let g = gamma_a(ensemble, strategy)?;
    let g_sym = HermitianOperator::symmetrize(&g);
    let mut report = ConditionReport::new();
    let mut worst = f64::INFINITY;
    let mut worst_witness = None;
    for (k, op) in ks.iter().enumerate() {
        let eig = hermitian_eigen(&(&g_sym - op))?;
        report.scalar(format!("outcome_{k}_margin"), eig.values[0]);
        if eig.values[0] < worst {
            worst = eig.values[0];
            worst_witness = Some(eig.vector(0));
        }
    }
    let mut v = Verdict::new(LABEL_NECESSARY_A, worst, tol.psd);
    if !v.pass {
        if let Some(w) = worst_witness {
            v = v.with_witness(Witness::Vector(w));
        }
    }
    report.push(v);
    report.scalar("gamma_a_hermiticity_defect", g.max_abs_diff(&g.adjoint()));
    Ok(report)
}
