//! Tensor-product instances: IC (x) PSIC, qutrit (x) PSIC, IC (x) VPSIC, the
//! qutrit VPSIC/IC equivalence, and products of qubits and qutrits.

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{
    ic_factor, lift_witness, necessity_probe, non_psic_factor, psic_factor, pure_mixed_falsification,
    pure_pair_falsification, qutrit_case_two, witness_from_states, CheckResult, HarnessConfig, LiftedWitness,
    PropositionReport,
};
use crate::certify::{
    certify_povm, min_rank_pm_search, min_rank_search, psic_witness_states, vpsic_witness_states, CertifyConfig,
    CertifyReport, Property, RankTarget, SearchConfig, Verdict, BORDERLINE_ENERGY,
};
use crate::error::{Error, Result};
use crate::operator::{eigenvalues, inertia_of_spectrum, rank_pm, tensor, HermitianMatrix};
use crate::povm::{gen_qutrit_psic, gen_random, gen_with_complement, tensor_povm, tensor_povm_n, Povm};
use crate::span::{complement, operator_span, OperatorSubspace, SPAN_TOL};
use crate::states::{derive_seed, rng};

use super::machinery::check_interlacing;

/// Largest composite dimension the product checks accept.
pub const MAX_PRODUCT_DIM: usize = 36;

const CONTAINMENT_TOL: f64 = 1e-9;

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn certify_holds(povm: &Povm, property: Property, seed: u64) -> Result<CertifyReport> {
    certify_povm(povm, property, &CertifyConfig::with_seed(seed))
}

fn premise_check(name: &str, report: &CertifyReport) -> CheckResult {
    CheckResult::new(name, report.holds(), if report.holds() { 0.0 } else { -1.0 })
}

/// Searches `comp` for an element of measure `<= bad_up_to`; passes when none is found.
fn min_measure_check(
    name: &str,
    comp: &OperatorSubspace,
    target: RankTarget,
    bad_up_to: usize,
    cfg: &HarnessConfig,
    seed: u64,
) -> Result<(CheckResult, Option<HermitianMatrix>)> {
    let sc = SearchConfig { seed, max_target: Some(bad_up_to), ..cfg.search.clone() };
    let cert = match target {
        RankTarget::Rank => min_rank_search(comp, &sc)?,
        RankTarget::RankPm => min_rank_pm_search(comp, &sc)?,
    };
    if cert.found_at_most(bad_up_to) {
        let m = cert.min_found.unwrap_or(0);
        return Ok((CheckResult::new(name, false, m as f64 - (bad_up_to + 1) as f64), cert.witness(comp)));
    }
    if cert.borderline {
        return Ok((CheckResult::new(name, false, cert.best_objective - BORDERLINE_ENERGY), None));
    }
    let margin = if comp.is_zero() { 1.0 } else { cert.best_objective };
    Ok((CheckResult::new(name, true, margin), None))
}

fn product_complement(product: &Povm) -> (OperatorSubspace, OperatorSubspace) {
    let span = operator_span(product, SPAN_TOL);
    let comp = complement(&span);
    (span, comp)
}

/// Largest norm of the projection of `sub`'s basis onto `span` (zero iff `sub` is orthogonal to it).
fn leak(sub: &OperatorSubspace, span: &OperatorSubspace) -> f64 {
    sub.basis().iter().map(|t| span.project(t).norm()).fold(0.0, f64::max)
}

/// Checks that `parts` are mutually orthogonal, orthogonal to `span`, and fill its complement.
fn decomposition_checks(prefix: &str, parts: &[&OperatorSubspace], span: &OperatorSubspace) -> Vec<CheckResult> {
    let d = span.ambient_dim();
    let mut cross: f64 = 0.0;
    for (i, a) in parts.iter().enumerate() {
        for b in &parts[i + 1..] {
            cross = cross.max(a.max_cross_inner(b));
        }
    }
    let contained = parts.iter().map(|p| leak(p, span)).fold(0.0, f64::max);
    let total: usize = parts.iter().map(|p| p.dim()).sum();
    vec![
        CheckResult::at_most(format!("{prefix}_orthogonal"), cross, CONTAINMENT_TOL),
        CheckResult::at_most(format!("{prefix}_contained"), contained, CONTAINMENT_TOL),
        CheckResult::equal(format!("{prefix}_dimension"), total, d * d - span.dim()),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop1Options {
    pub da: usize,
    pub db: usize,
    /// Replace `B` by a POVM whose complement contains a rank-two element.
    pub corrupt_b: bool,
}

/// IC `A` (x) PSIC `B` is PSIC.
pub fn check_prop1(o: &Prop1Options, seed: u64, cfg: &HarnessConfig) -> Result<PropositionReport> {
    if !(2..=3).contains(&o.da) || !(3..=4).contains(&o.db) {
        return Err(invalid(format!("dimensions ({}, {}) need d_A in 2..=3 and d_B in 3..=4", o.da, o.db)));
    }
    let a = ic_factor(o.da, derive_seed(seed, 0))?;
    let b = if o.corrupt_b { non_psic_factor(o.db, derive_seed(seed, 1))? } else { psic_factor(o.db, derive_seed(seed, 1))? };
    let product = tensor_povm(&a, &b);
    let dims = [o.da, o.db];
    let mut checks = vec![
        CheckResult::equal("a_informationally_complete", operator_span(&a, SPAN_TOL).dim(), o.da * o.da),
        premise_check("b_psic", &certify_holds(&b, Property::Psic, seed)?),
    ];

    // R(A (x) B)^perp = L_s(H_A) (x) R(B)^perp when A is IC.
    let (span, comp) = product_complement(&product);
    let cb = complement(&operator_span(&b, SPAN_TOL));
    let lifted = OperatorSubspace::full(o.da).tensor(&cb);
    checks.extend(decomposition_checks("complement_is_full_tensor_b_perp", &[&lifted], &span));

    let (rank_check, found) = min_measure_check("min_rank_at_least_3", &comp, RankTarget::Rank, 2, cfg, derive_seed(seed, 2))?;
    checks.push(rank_check);

    let mut witnesses = Vec::new();
    if o.corrupt_b {
        let pair = super::factor_witness(&b, Property::Psic, seed)?;
        witnesses.push(lift_witness("sigma (x) psi_i from the factor witness of B", &product, &dims, 1, &pair, derive_seed(seed, 3)));
    }
    if let Some(t) = found {
        if let Ok(pair) = psic_witness_states(&t, cfg.search.tol) {
            witnesses.push(witness_from_states("pure pair from the rank-two complement element", &product, pair.first, pair.second));
        }
    }
    checks.push(pure_pair_falsification("pure_pairs_distinguished", &product, &dims, cfg.pairs, derive_seed(seed, 4), &witnesses));

    let instance = json!({
        "d_a": o.da, "d_b": o.db, "corrupt_b": o.corrupt_b,
        "a": "random informationally complete", "b": if o.corrupt_b { "not PSIC" } else { "PSIC, span deficient" },
        "product_complement_dim": comp.dim(), "pairs": cfg.pairs,
    });
    Ok(PropositionReport::finish("1", instance, seed, !o.corrupt_b, checks, witnesses))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prop2Options {
    pub db: usize,
    /// Diagonal of the qutrit complement generator `S` (traceless, invertible).
    pub s: [f64; 3],
    /// Replace `A` by a qutrit POVM with complement `R diag(1,-1,0)`.
    pub corrupt_a: bool,
}

impl Default for Prop2Options {
    fn default() -> Self {
        Self { db: 3, s: [1.0, 1.0, -2.0], corrupt_a: false }
    }
}

/// Qutrit `A` (x) `B` is PSIC iff both factors are.
pub fn check_prop2(o: &Prop2Options, seed: u64, cfg: &HarnessConfig) -> Result<PropositionReport> {
    if !(3..=4).contains(&o.db) {
        return Err(invalid(format!("d_B = {} must be 3 or 4", o.db)));
    }
    let sum: f64 = o.s.iter().sum();
    let scale = o.s.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if sum.abs() > 1e-12 * scale.max(1.0) || o.s.iter().any(|x| x.abs() <= 1e-12 * scale) {
        return Err(invalid(format!("S = diag{:?} must be traceless and invertible", o.s)));
    }
    let a = if o.corrupt_a { non_psic_factor(3, 0)? } else { gen_qutrit_psic(o.s)? };
    let b = psic_factor(o.db, derive_seed(seed, 1))?;
    let product = tensor_povm(&a, &b);
    let dims = [3, o.db];
    let mut checks = vec![
        premise_check("a_psic", &certify_holds(&a, Property::Psic, seed)?),
        premise_check("b_psic", &certify_holds(&b, Property::Psic, seed)?),
    ];

    // (R S (x) L_s(H_B)) + (R(A) (x) R(B)^perp).
    let ra = operator_span(&a, SPAN_TOL);
    let ca = complement(&ra);
    let cb = complement(&operator_span(&b, SPAN_TOL));
    let s_part = ca.tensor(&OperatorSubspace::full(o.db));
    let r_part = ra.tensor(&cb);
    let (span, comp) = product_complement(&product);
    checks.push(CheckResult::equal("a_complement_one_dimensional", ca.dim(), 1));
    checks.extend(decomposition_checks("s_tensor_all_plus_span_a_tensor_b_perp", &[&s_part, &r_part], &span));

    let (rank_check, found) = min_measure_check("min_rank_at_least_3", &comp, RankTarget::Rank, 2, cfg, derive_seed(seed, 2))?;
    checks.push(rank_check);

    let mut witnesses = Vec::new();
    if o.corrupt_a {
        let pair = super::factor_witness(&a, Property::Psic, seed)?;
        witnesses.push(lift_witness("psi_i (x) sigma from the factor witness of A", &product, &dims, 0, &pair, derive_seed(seed, 3)));
    }
    if let Some(t) = found {
        if let Ok(pair) = psic_witness_states(&t, cfg.search.tol) {
            witnesses.push(witness_from_states("pure pair from the rank-two complement element", &product, pair.first, pair.second));
        }
    }
    checks.push(pure_pair_falsification("pure_pairs_distinguished", &product, &dims, cfg.pairs, derive_seed(seed, 4), &witnesses));

    // Converse direction on this instance: a non-PSIC factor breaks the product.
    let factors = [a.clone(), b.clone()];
    for (i, d) in dims.iter().enumerate() {
        let name = format!("necessity_probe_factor_{i}");
        let (c, w) = necessity_probe(&name, &factors, i, non_psic_factor(*d, derive_seed(seed, 5 + i as u64))?, Property::Psic, seed)?;
        checks.push(c);
        witnesses.push(w);
    }

    let instance = json!({
        "d_a": 3, "d_b": o.db, "s": o.s, "corrupt_a": o.corrupt_a,
        "product_complement_dim": comp.dim(), "summand_dims": [s_part.dim(), r_part.dim()], "pairs": cfg.pairs,
    });
    Ok(PropositionReport::finish("2", instance, seed, !o.corrupt_a, checks, witnesses))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop3Options {
    pub da: usize,
    pub db: usize,
    /// Complement generator `diag(2,-1,-1,0,..)` (rank± one) instead of `diag(1,1,-1,-1,0,..)`.
    pub corrupt_b: bool,
    /// Use a case-(ii) qutrit `A` (not IC) instead of an IC one; needs `da = 3`.
    pub case_two_a: bool,
}

/// Inertia of `M (x) G` from the inertias of the factors.
pub fn tensor_inertia(m: (usize, usize), g: (usize, usize)) -> (usize, usize) {
    (m.0 * g.0 + m.1 * g.1, m.0 * g.1 + m.1 * g.0)
}

/// `min rank±(M (x) G)` over nonzero Hermitian `M` of size `da`, from the inertia of `G`.
pub fn closed_form_min_rank_pm(da: usize, g: (usize, usize)) -> usize {
    let mut best = usize::MAX;
    for p in 0..=da {
        for n in 0..=(da - p) {
            if p + n == 0 {
                continue;
            }
            let (pos, neg) = tensor_inertia((p, n), g);
            best = best.min(pos.min(neg));
        }
    }
    best
}

fn padded_diag(d: usize, head: &[f64]) -> HermitianMatrix {
    let mut v = vec![0.0; d];
    v[..head.len()].copy_from_slice(head);
    HermitianMatrix::from_real_diagonal(&v)
}

/// IC `A` (x) VPSIC `B` is VPSIC.
pub fn check_prop3(o: &Prop3Options, seed: u64, cfg: &HarnessConfig) -> Result<PropositionReport> {
    if !(2..=3).contains(&o.da) || o.db < 4 || o.da * o.db > MAX_PRODUCT_DIM {
        return Err(invalid(format!("dimensions ({}, {}) need d_A in 2..=3, d_B >= 4, d_A d_B <= 36", o.da, o.db)));
    }
    if o.case_two_a && o.da != 3 {
        return Err(invalid("a case-(ii) factor needs d_A = 3"));
    }
    let a = if o.case_two_a { qutrit_case_two(derive_seed(seed, 0))? } else { ic_factor(o.da, derive_seed(seed, 0))? };
    let g = if o.corrupt_b { padded_diag(o.db, &[2.0, -1.0, -1.0]) } else { padded_diag(o.db, &[1.0, 1.0, -1.0, -1.0]) };
    let b = gen_with_complement(o.db, &[g])?;
    let product = tensor_povm(&a, &b);
    let dims = [o.da, o.db];
    let mut checks = vec![
        CheckResult::equal("a_informationally_complete", operator_span(&a, SPAN_TOL).dim(), o.da * o.da),
        premise_check("b_vpsic", &certify_holds(&b, Property::Vpsic, seed)?),
    ];

    let (span, comp) = product_complement(&product);
    let cb = complement(&operator_span(&b, SPAN_TOL));
    let mut witnesses = Vec::new();

    // Closed form: with A IC and R(B)^perp = R G, every complement element is M (x) G.
    if !o.case_two_a && cb.dim() == 1 {
        let gen = &cb.basis()[0];
        let lifted = OperatorSubspace::full(o.da).tensor(&cb);
        checks.extend(decomposition_checks("complement_is_full_tensor_g", &[&lifted], &span));
        let gi = inertia_of_spectrum(&eigenvalues(gen), cfg.search.tol);
        let exact = closed_form_min_rank_pm(o.da, (gi.positive, gi.negative));
        checks.push(CheckResult::new("closed_form_min_rank_pm_at_least_2", exact >= 2, exact as f64 - 2.0));

        let mut r = rng(derive_seed(seed, 6));
        let mut mismatches = 0usize;
        for k in 0..50 {
            let m = sample_inertia_matrix(o.da, k, &mut r);
            let mi = inertia_of_spectrum(&eigenvalues(&m), 1e-10);
            let (pos, neg) = tensor_inertia((mi.positive, mi.negative), (gi.positive, gi.negative));
            if rank_pm(&tensor(&m, gen), 1e-10)? != pos.min(neg) {
                mismatches += 1;
            }
        }
        checks.push(CheckResult::equal("closed_form_matches_spectra", mismatches, 0));
    }

    let (pm_check, found) =
        min_measure_check("min_rank_pm_at_least_2", &comp, RankTarget::RankPm, 1, cfg, derive_seed(seed, 2))?;
    checks.push(pm_check);

    if o.corrupt_b {
        let pair = super::factor_witness(&b, Property::Vpsic, seed)?;
        witnesses.push(lift_witness("sigma (x) pure vs sigma (x) mixed from the factor witness of B", &product, &dims, 1, &pair, derive_seed(seed, 3)));
    }
    if let Some(t) = found {
        if let Ok(pair) = vpsic_witness_states(&t, cfg.search.tol) {
            witnesses.push(witness_from_states("pure/mixed pair from the rank± one complement element", &product, pair.first, pair.second));
        }
    }
    checks.push(pure_mixed_falsification("pure_mixed_pairs_distinguished", &product, &dims, cfg.pairs, derive_seed(seed, 4), &witnesses));

    // Interlacing on diagonal blocks of sampled complement elements.
    let mut r = rng(derive_seed(seed, 7));
    let mut slack = f64::INFINITY;
    let mut monotone = true;
    if !comp.is_zero() {
        for _ in 0..20 {
            let c: Vec<f64> = (0..comp.dim()).map(|_| rand_distr::Distribution::sample(&rand_distr::StandardNormal, &mut r)).collect();
            let t = comp.element(&c);
            for i in 0..o.da {
                let cols: Vec<usize> = (i * o.db..(i + 1) * o.db).collect();
                let rep = check_interlacing(&t, &cols, 1e-9)?;
                slack = slack.min(rep.min_slack);
                monotone &= rep.rank_pm_monotone;
            }
        }
    }
    let slack = if slack.is_finite() { slack } else { 0.0 };
    checks.push(CheckResult::new("interlacing_on_complement_blocks", slack >= -1e-9 && monotone, slack + 1e-9));

    let instance = json!({
        "d_a": o.da, "d_b": o.db, "corrupt_b": o.corrupt_b, "case_two_a": o.case_two_a,
        "b_complement_generator": if o.corrupt_b { "diag(2,-1,-1,0,..)" } else { "diag(1,1,-1,-1,0,..)" },
        "product_complement_dim": comp.dim(), "pairs": cfg.pairs,
    });
    let premise = !o.corrupt_b && !o.case_two_a;
    Ok(PropositionReport::finish("3", instance, seed, premise, checks, witnesses))
}

/// Random Hermitian matrices cycling through full rank, rank one and mixed low rank.
fn sample_inertia_matrix(d: usize, k: usize, r: &mut crate::states::Rng64) -> HermitianMatrix {
    match k % 3 {
        0 => HermitianMatrix::random(d, r),
        1 => {
            let v = crate::states::random_pure_state(d, r);
            HermitianMatrix::projector(&v).scale(if k.is_multiple_of(2) { 1.0 } else { -1.0 })
        }
        _ => {
            let u = crate::states::random_pure_state(d, r);
            let w = crate::states::random_pure_state(d, r);
            &HermitianMatrix::projector(&u) - &HermitianMatrix::projector(&w).scale(0.5)
        }
    }
}

/// Qutrits are VPSIC iff IC; then the IC (x) VPSIC check on a qutrit `A`.
pub fn check_prop4(db: usize, seed: u64, cfg: &HarnessConfig) -> Result<PropositionReport> {
    let instances: Vec<(&str, Povm)> = vec![
        ("case_i", ic_factor(3, derive_seed(seed, 0))?),
        ("case_ii_1_1_m2", gen_qutrit_psic([1.0, 1.0, -2.0])?),
        ("case_ii_1_2_m3", gen_qutrit_psic([1.0, 2.0, -3.0])?),
        ("case_ii_seeded", qutrit_case_two(derive_seed(seed, 1))?),
        ("span_deficient_random", gen_random(3, 6, derive_seed(seed, 2))?),
    ];
    let mut checks = Vec::new();
    for (name, povm) in &instances {
        let ic = certify_holds(povm, Property::Ic, seed)?;
        let vp = certify_holds(povm, Property::Vpsic, seed)?;
        let agree = (ic.verdict == Verdict::Yes) == (vp.verdict == Verdict::Yes)
            && vp.verdict != Verdict::Undetermined
            && vp.strength == crate::certify::Strength::Exact;
        checks.push(CheckResult::new(format!("qutrit_vpsic_iff_ic/{name}"), agree, if agree { 0.0 } else { -1.0 }));
        let comp = complement(&operator_span(povm, SPAN_TOL));
        if comp.dim() == 1 {
            let rpm = rank_pm(&comp.basis()[0], cfg.search.tol)?;
            checks.push(CheckResult::equal(format!("rank_pm_of_generator_is_1/{name}"), rpm, 1));
        }
    }
    let inner = check_prop3(&Prop3Options { da: 3, db, corrupt_b: false, case_two_a: false }, seed, cfg)?;
    checks.extend(inner.checks.iter().map(|c| CheckResult { name: format!("ic_qutrit_tensor_vpsic/{}", c.name), ..c.clone() }));
    let instance = json!({
        "qutrit_instances": instances.iter().map(|(n, _)| *n).collect::<Vec<_>>(),
        "product": inner.instance,
    });
    Ok(PropositionReport::finish("4", instance, seed, true, checks, inner.witnesses))
}

fn product_checks(
    proposition: &str,
    factor_dims: &[usize],
    factors: Vec<Povm>,
    instance: serde_json::Value,
    seed: u64,
    cfg: &HarnessConfig,
) -> Result<PropositionReport> {
    let product = tensor_povm_n(&factors)?;
    let (span, comp) = product_complement(&product);
    let spans: Vec<usize> = factors.iter().map(|f| operator_span(f, SPAN_TOL).dim()).collect();
    let mut checks = Vec::new();
    for (i, f) in factors.iter().enumerate() {
        checks.push(premise_check(&format!("factor_{i}_psic"), &certify_holds(f, Property::Psic, seed)?));
    }
    checks.push(CheckResult::equal("span_dimension_multiplies", span.dim(), spans.iter().product()));
    let (rank_check, _) = min_measure_check("min_rank_at_least_3", &comp, RankTarget::Rank, 2, cfg, derive_seed(seed, 2))?;
    checks.push(rank_check);
    checks.push(pure_pair_falsification("pure_pairs_distinguished", &product, factor_dims, cfg.pairs, derive_seed(seed, 4), &[]));

    let mut witnesses: Vec<LiftedWitness> = Vec::new();
    for (i, &d) in factor_dims.iter().enumerate() {
        let name = format!("necessity_probe_factor_{i}");
        let (c, w) = necessity_probe(&name, &factors, i, non_psic_factor(d, derive_seed(seed, 10 + i as u64))?, Property::Psic, seed)?;
        checks.push(c);
        witnesses.push(w);
    }
    let mut instance = instance;
    instance["span_dims"] = json!(spans);
    instance["product_complement_dim"] = json!(comp.dim());
    instance["pairs"] = json!(cfg.pairs);
    Ok(PropositionReport::finish(proposition, instance, seed, true, checks, witnesses))
}

/// PSIC qubits and qutrits multiply to a PSIC product.
pub fn check_multipartite(factor_dims: &[usize], seed: u64, cfg: &HarnessConfig) -> Result<PropositionReport> {
    if factor_dims.len() < 2 {
        return Err(invalid("need at least two factors"));
    }
    if let Some(d) = factor_dims.iter().find(|d| !matches!(d, 2 | 3)) {
        return Err(invalid(format!("factor dimension {d} is neither 2 nor 3")));
    }
    let total: usize = factor_dims.iter().product();
    if total > MAX_PRODUCT_DIM {
        return Err(Error::BudgetExceeded(total, MAX_PRODUCT_DIM));
    }
    let factors = factor_dims
        .iter()
        .enumerate()
        .map(|(i, &d)| psic_factor(d, derive_seed(seed, 100 + i as u64)))
        .collect::<Result<Vec<_>>>()?;
    let instance = json!({ "factors": factor_dims, "qubits": "informationally complete", "qutrits": "case (ii)" });
    product_checks("multi", factor_dims, factors, instance, seed, cfg)
}

/// `(n, m)` with `d = 2^n 3^m`, if `d` has no other prime factors.
pub fn factorize_23(mut d: usize) -> Option<(usize, usize)> {
    if d < 2 {
        return None;
    }
    let (mut n, mut m) = (0, 0);
    while d.is_multiple_of(2) {
        d /= 2;
        n += 1;
    }
    while d.is_multiple_of(3) {
        d /= 3;
        m += 1;
    }
    (d == 1).then_some((n, m))
}

/// `A = (x)_j A_j` on `2^{n_a} 3^{m_a}` and `B` likewise, each factor PSIC.
pub fn check_factorized_dims(
    (n_a, m_a): (usize, usize),
    (n_b, m_b): (usize, usize),
    seed: u64,
    cfg: &HarnessConfig,
) -> Result<PropositionReport> {
    let side = |n: usize, m: usize| -> Vec<usize> { std::iter::repeat_n(2, n).chain(std::iter::repeat_n(3, m)).collect() };
    let (fa, fb) = (side(n_a, m_a), side(n_b, m_b));
    if fa.is_empty() || fb.is_empty() {
        return Err(invalid("both sides need at least one factor"));
    }
    let da: usize = fa.iter().product();
    let db: usize = fb.iter().product();
    if da * db > MAX_PRODUCT_DIM {
        return Err(Error::BudgetExceeded(da * db, MAX_PRODUCT_DIM));
    }
    let all: Vec<usize> = fa.iter().chain(&fb).copied().collect();
    let factors = all
        .iter()
        .enumerate()
        .map(|(i, &d)| psic_factor(d, derive_seed(seed, 100 + i as u64)))
        .collect::<Result<Vec<_>>>()?;
    let instance = json!({ "d_a": da, "d_b": db, "a_factors": fa, "b_factors": fb });
    product_checks("dims", &all, factors, instance, seed, cfg)
}

/// Exploratory PSIC (x) PSIC instance outside the proven cases.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Exploration {
    pub d_a: usize,
    pub d_b: usize,
    pub seed: u64,
    /// Always "empirical": this is not a theorem check.
    pub label: String,
    pub factor_a_complement_dim: usize,
    pub factor_b_complement_dim: usize,
    pub product: CertifyReport,
}

/// Each factor has a one-dimensional complement spanned by a seeded invertible
/// traceless matrix (so it is PSIC but not IC); the product is certified
/// by search.
pub fn explore_psic_product(d_a: usize, d_b: usize, seed: u64, cfg: &CertifyConfig) -> Result<Exploration> {
    if d_a < 3 || d_b < 3 || d_a * d_b > MAX_PRODUCT_DIM {
        return Err(invalid(format!("dimensions ({d_a}, {d_b}) need both >= 3 and product <= 36")));
    }
    let make = |d: usize, s: u64| -> Result<Povm> {
        let mut r = rng(s);
        let h = HermitianMatrix::random(d, &mut r);
        let g = &h - &HermitianMatrix::identity(d).scale(h.trace() / d as f64);
        gen_with_complement(d, &[g])
    };
    let a = make(d_a, derive_seed(seed, 0))?;
    let b = make(d_b, derive_seed(seed, 1))?;
    let product = tensor_povm(&a, &b);
    let report = certify_povm(&product, Property::Psic, cfg)?;
    Ok(Exploration {
        d_a,
        d_b,
        seed,
        label: "empirical".into(),
        factor_a_complement_dim: complement(&operator_span(&a, SPAN_TOL)).dim(),
        factor_b_complement_dim: complement(&operator_span(&b, SPAN_TOL)).dim(),
        product: report,
    })
}
