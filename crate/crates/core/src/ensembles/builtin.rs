use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use super::Ensemble;
use crate::error::{Error, Result};
use crate::operator::{c64, ComplexMatrix, HermitianOperator, C64};

const PHASE_EPS: f64 = 1e-14;

/// Named ensembles shipped with the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnsembleName {
    Trine,
    AntiTrine,
    DoubleTrine,
    Bell3,
    Domino,
    DominoSubsets,
    /// Trine states with the posteriors left by outcome `j` of the trine
    /// measurement.
    TrineMirror(usize),
}

impl EnsembleName {
    pub const ALL: [EnsembleName; 9] = [
        EnsembleName::Trine,
        EnsembleName::AntiTrine,
        EnsembleName::DoubleTrine,
        EnsembleName::Bell3,
        EnsembleName::Domino,
        EnsembleName::DominoSubsets,
        EnsembleName::TrineMirror(0),
        EnsembleName::TrineMirror(1),
        EnsembleName::TrineMirror(2),
    ];
}

impl fmt::Display for EnsembleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnsembleName::Trine => write!(f, "trine"),
            EnsembleName::AntiTrine => write!(f, "anti_trine"),
            EnsembleName::DoubleTrine => write!(f, "double_trine"),
            EnsembleName::Bell3 => write!(f, "bell3"),
            EnsembleName::Domino => write!(f, "domino"),
            EnsembleName::DominoSubsets => write!(f, "domino_subsets"),
            EnsembleName::TrineMirror(j) => write!(f, "trine_mirror({j})"),
        }
    }
}

impl FromStr for EnsembleName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let name = match s {
            "trine" => EnsembleName::Trine,
            "anti_trine" => EnsembleName::AntiTrine,
            "double_trine" => EnsembleName::DoubleTrine,
            "bell3" => EnsembleName::Bell3,
            "domino" => EnsembleName::Domino,
            "domino_subsets" => EnsembleName::DominoSubsets,
            _ => {
                let arg = s
                    .strip_prefix("trine_mirror(")
                    .and_then(|r| r.strip_suffix(')'))
                    .or_else(|| s.strip_prefix("trine_mirror:"));
                match arg.and_then(|a| a.trim().parse::<usize>().ok()) {
                    Some(j) if j < 3 => EnsembleName::TrineMirror(j),
                    _ => return Err(Error::invalid(format!("unknown ensemble name '{s}'"))),
                }
            }
        };
        Ok(name)
    }
}

/// |ψ_j⟩ = (|0⟩ + e^{2πij/3}|1⟩)/√2.
pub fn trine_ket(j: usize) -> ComplexMatrix {
    let s = 1.0 / 2f64.sqrt();
    ComplexMatrix::ket(&[c64(s, 0.0), C64::from_polar(s, 2.0 * PI * j as f64 / 3.0)])
}

/// |ψ_j^⊥⟩ = (|0⟩ − e^{2πij/3}|1⟩)/√2.
pub fn anti_trine_ket(j: usize) -> ComplexMatrix {
    let s = 1.0 / 2f64.sqrt();
    ComplexMatrix::ket(&[c64(s, 0.0), -C64::from_polar(s, 2.0 * PI * j as f64 / 3.0)])
}

/// Rotation by 2π/3 about z mapping |ψ_j⟩ to |ψ_{j+1}⟩.
pub fn trine_rotation() -> ComplexMatrix {
    ComplexMatrix::diag(&[c64(1.0, 0.0), C64::from_polar(1.0, 2.0 * PI / 3.0)])
}

/// Bell states |Ψ_0⟩ = |00⟩+|11⟩, |Ψ_1⟩ = |01⟩+|10⟩, |Ψ_2⟩ = |00⟩−|11⟩
/// (normalized), |Ψ_3⟩ = |01⟩−|10⟩.
pub fn bell_ket(k: usize) -> ComplexMatrix {
    let s = 1.0 / 2f64.sqrt();
    let amps = match k {
        0 => [s, 0.0, 0.0, s],
        1 => [0.0, s, s, 0.0],
        2 => [s, 0.0, 0.0, -s],
        3 => [0.0, s, -s, 0.0],
        _ => panic!("Bell index {k} out of range"),
    };
    ComplexMatrix::ket(&amps.map(|a| c64(a, 0.0)))
}

fn qutrit(amps: [f64; 3]) -> ComplexMatrix {
    ComplexMatrix::ket(&amps.map(|a| c64(a, 0.0)))
}

/// Product factors (|φ_i⟩, |χ_i⟩) of the nine domino states, in order
/// ψ_1 … ψ_9.
pub fn domino_factors() -> Vec<(ComplexMatrix, ComplexMatrix)> {
    let s = 1.0 / 2f64.sqrt();
    let k0 = qutrit([1.0, 0.0, 0.0]);
    let k1 = qutrit([0.0, 1.0, 0.0]);
    let k2 = qutrit([0.0, 0.0, 1.0]);
    let p01 = qutrit([s, s, 0.0]);
    let m01 = qutrit([s, -s, 0.0]);
    let p12 = qutrit([0.0, s, s]);
    let m12 = qutrit([0.0, s, -s]);
    vec![
        (k1.clone(), k1.clone()),
        (k0.clone(), p01.clone()),
        (k0.clone(), m01.clone()),
        (k2.clone(), p12.clone()),
        (k2.clone(), m12.clone()),
        (p12.clone(), k0.clone()),
        (m12.clone(), k0),
        (p01.clone(), k2.clone()),
        (m01, k2),
    ]
}

/// The eight triples of domino states (zero-based indices into ψ_1 … ψ_9)
/// whose B-factors are mutually orthogonal.
pub fn domino_subsets() -> [[usize; 3]; 8] {
    [
        [0, 5, 7],
        [0, 5, 8],
        [0, 6, 7],
        [0, 6, 8],
        [1, 2, 7],
        [1, 2, 8],
        [3, 4, 5],
        [3, 4, 6],
    ]
}

/// A-side mixtures of the domino subsets together with the subsets.
#[derive(Clone, Debug)]
pub struct SubsetEnsemble {
    pub ensemble: Ensemble,
    pub index_sets: Vec<[usize; 3]>,
}

/// ρ_j = (1/3) Σ_{i ∈ I_j} |φ_i⟩⟨φ_i| with priors 1/8.
pub fn domino_subset_ensemble() -> SubsetEnsemble {
    let factors = domino_factors();
    let index_sets = domino_subsets().to_vec();
    let states = index_sets
        .iter()
        .map(|set| {
            let ops: Vec<_> = set
                .iter()
                .map(|&i| HermitianOperator::projector(&factors[i].0).scale(1.0 / 3.0))
                .collect();
            HermitianOperator::sum(3, &ops)
        })
        .collect();
    let ensemble = Ensemble::new(states, vec![1.0 / 8.0; 8], None).expect("domino subsets are valid");
    SubsetEnsemble { ensemble, index_sets }
}

fn phased(k: ComplexMatrix) -> ComplexMatrix {
    k.phase_fixed(PHASE_EPS)
}

/// Builds one of the named ensembles with exact amplitudes.
pub fn builtin_ensemble(name: EnsembleName) -> Ensemble {
    let third = 1.0 / 3.0;
    let built = match name {
        EnsembleName::Trine => {
            let kets: Vec<_> = (0..3).map(|j| phased(trine_ket(j))).collect();
            Ensemble::from_kets(&kets, vec![third; 3], None)
        }
        EnsembleName::AntiTrine => {
            let kets: Vec<_> = (0..3).map(|j| phased(anti_trine_ket(j))).collect();
            Ensemble::from_kets(&kets, vec![third; 3], None)
        }
        EnsembleName::DoubleTrine => {
            let kets: Vec<_> = (0..3)
                .map(|j| phased(trine_ket(j).kron(&trine_ket(j))))
                .collect();
            Ensemble::from_kets(&kets, vec![third; 3], Some((2, 2)))
        }
        EnsembleName::Bell3 => {
            let kets: Vec<_> = (0..3).map(|k| phased(bell_ket(k))).collect();
            Ensemble::from_kets(&kets, vec![third; 3], Some((2, 2)))
        }
        EnsembleName::Domino => {
            let kets: Vec<_> = domino_factors()
                .into_iter()
                .map(|(a, b)| phased(a.kron(&b)))
                .collect();
            Ensemble::from_kets(&kets, vec![1.0 / 9.0; 9], Some((3, 3)))
        }
        EnsembleName::DominoSubsets => return domino_subset_ensemble().ensemble,
        EnsembleName::TrineMirror(j) => {
            let kets: Vec<_> = (0..3).map(|i| phased(trine_ket(i))).collect();
            let priors = (0..3)
                .map(|i| if i == j { 1.0 / 6.0 + 0.5 } else { 1.0 / 6.0 })
                .collect();
            Ensemble::from_kets(&kets, priors, None)
        }
    };
    built.expect("builtin ensembles satisfy the ensemble invariants")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{partial_trace, Subsystem};

    #[test]
    fn trine_pairwise_overlaps() {
        for i in 0..3 {
            for j in 0..3 {
                let ov = trine_ket(i).inner(&trine_ket(j)).norm_sqr();
                let want = 0.25 * (1.0 + 3.0 * (i == j) as u8 as f64);
                assert!((ov - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn anti_trine_resolves_identity() {
        let ops: Vec<_> = (0..3)
            .map(|j| HermitianOperator::projector(&anti_trine_ket(j)).scale(2.0 / 3.0))
            .collect();
        assert!(HermitianOperator::sum(2, &ops).max_abs_diff(&HermitianOperator::identity(2)) < 1e-15);
    }

    #[test]
    fn double_trine_symmetry() {
        let u = trine_rotation();
        let uu = u.kron(&u);
        let base = trine_ket(0).kron(&trine_ket(0));
        let mut cur = base.clone();
        for j in 0..3 {
            let want = trine_ket(j).kron(&trine_ket(j));
            assert!(cur.distance_up_to_phase(&want) < 1e-14);
            cur = uu.matmul(&cur);
        }
    }

    #[test]
    fn bell3_reduced_states_are_maximally_mixed() {
        let e = builtin_ensemble(EnsembleName::Bell3);
        for s in e.states() {
            let red = partial_trace(s, (2, 2), Subsystem::A).unwrap();
            assert!(red.max_abs_diff(&HermitianOperator::identity(2).scale(0.5)) < 1e-15);
        }
    }

    #[test]
    fn domino_orthonormal() {
        let kets: Vec<_> = domino_factors().into_iter().map(|(a, b)| a.kron(&b)).collect();
        for i in 0..9 {
            for j in 0..9 {
                let ov = kets[i].inner(&kets[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ov - c64(want, 0.0)).norm() < 1e-12, "{i} {j}");
            }
        }
    }

    #[test]
    fn subsets_are_orthogonal_on_b() {
        let f = domino_factors();
        for set in domino_subsets() {
            for a in 0..3 {
                for b in (a + 1)..3 {
                    assert!(f[set[a]].1.inner(&f[set[b]].1).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for n in EnsembleName::ALL {
            assert_eq!(n.to_string().parse::<EnsembleName>().unwrap(), n);
        }
        assert!("quadrine".parse::<EnsembleName>().is_err());
        assert!("trine_mirror(3)".parse::<EnsembleName>().is_err());
    }

    #[test]
    fn subset_rho1_and_rho5_match_listing() {
        let sub = domino_subset_ensemble();
        let s = 1.0 / 2f64.sqrt();
        let k1 = qutrit([0.0, 1.0, 0.0]);
        let p12 = qutrit([0.0, s, s]);
        let p01 = qutrit([s, s, 0.0]);
        let rho1 = HermitianOperator::sum(
            3,
            &[
                HermitianOperator::projector(&k1),
                HermitianOperator::projector(&p12),
                HermitianOperator::projector(&p01),
            ],
        )
        .scale(1.0 / 3.0);
        assert!(sub.ensemble.state(0).max_abs_diff(&rho1) < 1e-15);
        let rho5 = &HermitianOperator::diag(&[2.0 / 3.0, 0.0, 0.0])
            + &HermitianOperator::projector(&p01).scale(1.0 / 3.0);
        assert!(sub.ensemble.state(4).max_abs_diff(&rho5) < 1e-15);
    }
}
