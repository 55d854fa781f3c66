//! The matrix layer: tensor products, partial traces, spectra.

use seqdisc::ensembles::{bell_ket, trine_ket};
use seqdisc::operator::{hermitian_eigen, partial_trace, tensor_product, trace_norm, HermitianOperator, Subsystem};

fn main() -> seqdisc::Result<()> {
    let psi = HermitianOperator::pure_state(&trine_ket(0));
    let phi = HermitianOperator::pure_state(&trine_ket(1));
    let product = tensor_product(&psi, &phi)?;
    let back = partial_trace(&product, (2, 2), Subsystem::A)?;
    println!("Tr_B(ψ⊗φ) recovers ψ to {:.1e}", back.max_abs_diff(&psi));

    let bell = HermitianOperator::pure_state(&bell_ket(0));
    let reduced = partial_trace(&bell, (2, 2), Subsystem::A)?;
    println!("Bell state marginal eigenvalues {:?}", hermitian_eigen(&reduced)?.values);

    let diff = &psi.scale(0.5) - &phi.scale(0.5);
    println!("Helstrom value ½(1 + ‖ρ0/2 − ρ1/2‖₁) = {:.10}", 0.5 * (1.0 + trace_norm(&diff)?));
    Ok(())
}
