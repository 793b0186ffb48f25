//! Numerical consistency checks for the tensor-product behaviour of PSIC and
//! VPSIC, and for the matrix identities their proofs rely on.
//!
//! Every check is deterministic given its parameters and seed. A report's
//! verdict is
//!
//! * `consistent` when every check passes,
//! * `refuted` when the premise was deliberately broken (a corrupted factor)
//!   and an explicit pair of distinct states with equal statistics was found,
//! * `violation_candidate` otherwise: a check failed on an instance that
//!   satisfies the premise. Such a report carries its seed and instance so it
//!   can be reproduced.

mod machinery;
mod props;

use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::certify::{certify_povm, CertifyConfig, Property, SearchConfig, WitnessPair};
use crate::error::{Error, Result};
use crate::operator::{tensor_all, HermitianMatrix};
use crate::povm::{gen_dim4_vpsic, gen_random, gen_with_complement, Povm};
use crate::span::{is_ic, SPAN_TOL};
use crate::states::{derive_seed, fidelity_pure, pure_density, random_density, random_pure_state, rng, tensor_state};

pub use machinery::{
    check_interlacing, check_proof_unitaries, interlacing_suite, unitary_u3, InterlacingReport,
};
pub use props::{
    check_factorized_dims, check_multipartite, check_prop1, check_prop2, check_prop3, check_prop4,
    closed_form_min_rank_pm, explore_psic_product, factorize_23, tensor_inertia, Exploration, Prop1Options,
    Prop2Options, Prop3Options, MAX_PRODUCT_DIM,
};

/// Statistics closer than this count as indistinguishable.
pub const DISTINGUISH_TOL: f64 = 1e-9;
/// Pure pairs with fidelity above `1 - SAME_STATE_TOL` are the same state.
pub const SAME_STATE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    /// Signed slack: nonnegative when the check passes, its size says by how much.
    pub margin: f64,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, pass: bool, margin: f64) -> Self {
        // JSON has no infinities.
        let margin = if margin.is_finite() { margin } else { f64::MAX.copysign(margin) };
        Self { name: name.into(), pass, margin }
    }

    /// Passes when `value <= bound`.
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::new(name, value <= bound, bound - value)
    }

    /// Passes when `value > bound`.
    pub fn above(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::new(name, value > bound, value - bound)
    }

    pub fn equal(name: impl Into<String>, got: usize, expected: usize) -> Self {
        // `0.0 - x` avoids a negative zero on success.
        Self::new(name, got == expected, 0.0 - got.abs_diff(expected) as f64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HarnessVerdict {
    Consistent,
    Refuted,
    ViolationCandidate,
}

impl HarnessVerdict {
    /// 0 consistent, 2 refuted, 3 violation candidate.
    pub fn exit_code(self) -> i32 {
        match self {
            HarnessVerdict::Consistent => 0,
            HarnessVerdict::Refuted => 2,
            HarnessVerdict::ViolationCandidate => 3,
        }
    }
}

/// Two distinct states of a composite system with (near) equal statistics.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LiftedWitness {
    pub description: String,
    pub first: HermitianMatrix,
    pub second: HermitianMatrix,
    pub statistics_distance: f64,
    pub separation: f64,
}

impl LiftedWitness {
    pub fn is_indistinguishable(&self) -> bool {
        self.statistics_distance <= DISTINGUISH_TOL && self.separation > 1e-6
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PropositionReport {
    pub proposition: String,
    pub instance: Value,
    pub checks: Vec<CheckResult>,
    pub verdict: HarnessVerdict,
    pub seed: u64,
    /// False when a factor was deliberately replaced by one violating the hypotheses.
    pub premise_holds: bool,
    pub witnesses: Vec<LiftedWitness>,
}

impl PropositionReport {
    fn finish(
        proposition: &str,
        instance: Value,
        seed: u64,
        premise_holds: bool,
        checks: Vec<CheckResult>,
        witnesses: Vec<LiftedWitness>,
    ) -> Self {
        let verdict = if checks.iter().all(|c| c.pass) {
            HarnessVerdict::Consistent
        } else if !premise_holds && witnesses.iter().any(LiftedWitness::is_indistinguishable) {
            HarnessVerdict::Refuted
        } else {
            HarnessVerdict::ViolationCandidate
        };
        Self { proposition: proposition.into(), instance, checks, verdict, seed, premise_holds, witnesses }
    }

    pub fn passed(&self) -> bool {
        self.verdict == HarnessVerdict::Consistent
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Debug)]
pub struct HarnessConfig {
    /// Random state pairs per falsification check.
    pub pairs: usize,
    pub search: SearchConfig,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self { pairs: 10_000, search: SearchConfig::default() }
    }
}

fn traceless<R: rand::Rng + ?Sized>(d: usize, r: &mut R) -> HermitianMatrix {
    let h = HermitianMatrix::random(d, r);
    &h - &HermitianMatrix::identity(d).scale(h.trace() / d as f64)
}

/// A seeded, verified informationally complete POVM with `d^2 + 1` outcomes.
pub fn ic_factor(d: usize, seed: u64) -> Result<Povm> {
    for attempt in 0..20 {
        let p = gen_random(d, d * d + 1, derive_seed(seed, attempt))?;
        if is_ic(&p, SPAN_TOL).informationally_complete {
            return Ok(p);
        }
    }
    Err(Error::InvalidParameter(format!("no informationally complete POVM found in dimension {d}")))
}

/// Qutrit POVM whose complement is spanned by a seeded random invertible traceless matrix.
pub fn qutrit_case_two(seed: u64) -> Result<Povm> {
    let mut r = rng(seed);
    loop {
        let g = traceless(3, &mut r);
        let ev = crate::operator::eigenvalues(&g);
        if ev.iter().all(|l| l.abs() > 1e-3 * g.norm()) {
            return gen_with_complement(3, &[g]);
        }
    }
}

/// A pure-state informationally complete factor that is not informationally
/// complete whenever that is possible.
///
/// Qubits get an IC POVM, qutrits a seeded case-(ii) POVM, dimension four the
/// POVM with complement `R diag(1,1,-1,-1)`, larger dimensions an IC POVM.
pub fn psic_factor(d: usize, seed: u64) -> Result<Povm> {
    match d {
        3 => qutrit_case_two(seed),
        4 => Ok(gen_dim4_vpsic()),
        _ => ic_factor(d, seed),
    }
}

/// A factor that is not pure-state informationally complete.
pub fn non_psic_factor(d: usize, seed: u64) -> Result<Povm> {
    match d {
        0 | 1 => Err(Error::InvalidParameter(format!("dimension {d} has no non-PSIC POVM"))),
        2 => gen_random(2, 3, seed),
        _ => {
            let mut diag = vec![0.0; d];
            diag[0] = 1.0;
            diag[1] = -1.0;
            gen_with_complement(d, &[HermitianMatrix::from_real_diagonal(&diag)])
        }
    }
}

/// Factor witness for the failure of `property`, taken from certification.
fn factor_witness(povm: &Povm, property: Property, seed: u64) -> Result<WitnessPair> {
    let report = certify_povm(povm, property, &CertifyConfig::with_seed(seed))?;
    report
        .witness
        .ok_or_else(|| Error::InvalidWitness(format!("factor is {property}: no witness to lift")))
}

/// Embeds a factor witness into the product with seeded pure states on the other factors.
fn lift_witness(
    description: &str,
    product: &Povm,
    dims: &[usize],
    index: usize,
    pair: &WitnessPair,
    seed: u64,
) -> LiftedWitness {
    let mut r = rng(seed);
    let others: Vec<HermitianMatrix> = dims.iter().map(|&d| pure_density(&random_pure_state(d, &mut r))).collect();
    let build = |rho: &HermitianMatrix| {
        let parts: Vec<&HermitianMatrix> = others.iter().enumerate().map(|(j, s)| if j == index { rho } else { s }).collect();
        tensor_all(&parts).expect("at least one factor")
    };
    let (first, second) = (build(&pair.first), build(&pair.second));
    witness_from_states(description, product, first, second)
}

fn witness_from_states(description: &str, povm: &Povm, first: HermitianMatrix, second: HermitianMatrix) -> LiftedWitness {
    let p = povm.probabilities_unchecked(&first);
    let q = povm.probabilities_unchecked(&second);
    let statistics_distance = p.iter().zip(&q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let separation = (&first - &second).norm();
    LiftedWitness { description: description.into(), first, second, statistics_distance, separation }
}

/// Corrupts factor `index`, and checks that a lifted factor witness has equal
/// product statistics.
fn necessity_probe(
    name: &str,
    factors: &[Povm],
    index: usize,
    replacement: Povm,
    property: Property,
    seed: u64,
) -> Result<(CheckResult, LiftedWitness)> {
    let mut parts = factors.to_vec();
    parts[index] = replacement;
    let product = crate::povm::tensor_povm_n(&parts)?;
    let pair = factor_witness(&parts[index], property, seed)?;
    let dims: Vec<usize> = parts.iter().map(Povm::dim).collect();
    let w = lift_witness(name, &product, &dims, index, &pair, derive_seed(seed, 1));
    let check = CheckResult::new(name, w.is_indistinguishable(), DISTINGUISH_TOL - w.statistics_distance);
    Ok((check, w))
}

fn random_state_for(dims: &[usize], product_state: bool, r: &mut crate::states::Rng64) -> DVector<Complex64> {
    if product_state {
        dims.iter().map(|&d| random_pure_state(d, r)).reduce(|a, b| tensor_state(&a, &b)).expect("nonempty dims")
    } else {
        random_pure_state(dims.iter().product(), r)
    }
}

/// Minimum statistics distance over random pure pairs plus `candidates`.
///
/// Every fourth pair uses product states; the rest are generic (entangled)
/// Gaussian states. Pairs of the same state are skipped.
fn pure_pair_falsification(
    name: &str,
    povm: &Povm,
    dims: &[usize],
    pairs: usize,
    seed: u64,
    candidates: &[LiftedWitness],
) -> CheckResult {
    let e = povm.coordinate_matrix();
    let min_random = (0..pairs)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(derive_seed(seed, i as u64));
            let product = i % 4 == 0;
            let psi = random_state_for(dims, product, &mut r);
            let phi = random_state_for(dims, product, &mut r);
            if fidelity_pure(&psi, &phi) > 1.0 - SAME_STATE_TOL {
                return f64::INFINITY;
            }
            let diff = (&pure_density(&psi) - &pure_density(&phi)).to_real_coords();
            (e.transpose() * diff).amax()
        })
        .reduce(|| f64::INFINITY, f64::min);
    let min_cand = candidates.iter().map(|w| w.statistics_distance).fold(f64::INFINITY, f64::min);
    CheckResult::above(name, min_random.min(min_cand), DISTINGUISH_TOL)
}

/// Minimum statistics distance between random pure states and random full-rank states.
fn pure_mixed_falsification(
    name: &str,
    povm: &Povm,
    dims: &[usize],
    pairs: usize,
    seed: u64,
    candidates: &[LiftedWitness],
) -> CheckResult {
    let e = povm.coordinate_matrix();
    let d: usize = dims.iter().product();
    let min_random = (0..pairs)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(derive_seed(seed, i as u64));
            let psi = random_state_for(dims, i % 4 == 0, &mut r);
            let sigma = random_density(d, &mut r);
            let diff = (&pure_density(&psi) - &sigma).to_real_coords();
            (e.transpose() * diff).amax()
        })
        .reduce(|| f64::INFINITY, f64::min);
    let min_cand = candidates.iter().map(|w| w.statistics_distance).fold(f64::INFINITY, f64::min);
    CheckResult::above(name, min_random.min(min_cand), DISTINGUISH_TOL)
}
