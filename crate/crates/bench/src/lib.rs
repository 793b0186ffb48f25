//! Shared fixtures for the benchmarks.

use psic_core::harness::{ic_factor, qutrit_case_two};
use psic_core::povm::{gen_dim4_vpsic, tensor_povm};
use psic_core::span::SPAN_TOL;
use psic_core::states::{random_pure_state, rng};
use psic_core::{complement, operator_span, HermitianMatrix, OperatorSubspace, Povm, StatisticsVector};

/// Random Hermitian matrix of size `d`.
pub fn hermitian(d: usize, seed: u64) -> HermitianMatrix {
    HermitianMatrix::random(d, &mut rng(seed))
}

/// Case-(ii) qutrit tensor dimension-4 factor: a dimension-12 product with a
/// nontrivial complement.
pub fn product_povm() -> Povm {
    tensor_povm(&qutrit_case_two(1).expect("qutrit"), &gen_dim4_vpsic())
}

/// Informationally complete qubit tensor case-(ii) qutrit (dimension 6).
pub fn small_product() -> Povm {
    tensor_povm(&ic_factor(2, 2).expect("qubit"), &qutrit_case_two(3).expect("qutrit"))
}

pub fn product_complement(p: &Povm) -> OperatorSubspace {
    complement(&operator_span(p, SPAN_TOL))
}

/// Statistics of a seeded random pure state.
pub fn pure_statistics(p: &Povm, seed: u64) -> StatisticsVector {
    let psi = random_pure_state(p.dim(), &mut rng(seed));
    StatisticsVector { probabilities: p.pure_probabilities(&psi) }
}
