//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;

use psic_core::certify::{brute_force_min_rank, min_rank_pm_search, min_rank_search, RankTarget, SearchConfig};
use psic_core::harness::{
    check_factorized_dims, check_multipartite, check_prop1, check_prop2, check_prop3, check_prop4,
    check_proof_unitaries, interlacing_suite, psic_factor, qutrit_case_two, HarnessConfig, HarnessVerdict, Prop1Options,
    Prop2Options, Prop3Options, PropositionReport,
};
use psic_core::povm::{born_probabilities, gen_from_span, gen_qutrit_psic, gen_random, tensor_povm};
use psic_core::span::{bipartite_complement, SPAN_TOL};
use psic_core::states::{derive_seed, fidelity_pure, random_density, random_pure_state, rng};
use psic_core::tomography::{fit_objective, linear_inversion, pure_state_fit};
use psic_core::{certify_povm, CertifyConfig, HermitianMatrix, OperatorSubspace, Property, Strength, Verdict};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: psic_core::Error) -> String {
    e.to_string()
}

fn traceless(d: usize, r: &mut impl Rng) -> HermitianMatrix {
    let h = HermitianMatrix::random(d, r);
    &h - &HermitianMatrix::identity(d).scale(h.trace() / d as f64)
}

fn consistent(report: &PropositionReport) -> Result<(), String> {
    let failed: Vec<&str> = report.failed_checks().map(|c| c.name.as_str()).collect();
    ensure(report.verdict == HarnessVerdict::Consistent, || {
        format!("check {} is {:?}; failed: {}", report.proposition, report.verdict, failed.join(", "))
    })
}

fn require_check(report: &PropositionReport, name: &str) -> Result<(), String> {
    match report.check(name) {
        Some(c) if c.pass => Ok(()),
        Some(c) => Err(format!("check {} / {name} failed with margin {:.3e}", report.proposition, c.margin)),
        None => Err(format!("check {} has no {name}", report.proposition)),
    }
}

fn refuted(report: &PropositionReport) -> Result<(), String> {
    ensure(report.verdict == HarnessVerdict::Refuted, || format!("corrupted {} gave {:?}", report.proposition, report.verdict))?;
    ensure(report.witnesses.iter().any(|w| w.is_indistinguishable() && w.statistics_distance <= 1e-9), || {
        format!("corrupted {} has no equal-statistics witness", report.proposition)
    })
}

fn qutrit_counts() -> Outcome {
    let cfg = CertifyConfig::default();
    let p = gen_qutrit_psic([1.0, 1.0, -2.0]).map_err(err)?;
    let psic = certify_povm(&p, Property::Psic, &cfg).map_err(err)?;
    let ic = certify_povm(&p, Property::Ic, &cfg).map_err(err)?;
    ensure(psic.span_dim == 8 && psic.verdict == Verdict::Yes && psic.strength == Strength::Exact, || {
        format!("span {} PSIC {:?} {:?}", psic.span_dim, psic.verdict, psic.strength)
    })?;
    ensure(ic.verdict == Verdict::No && ic.strength == Strength::Exact, || format!("IC {:?}", ic.verdict))?;

    let mut r = rng(11);
    let mut checked = 0;
    for trial in 0..40 {
        let extra = trial % 8;
        let mut basis = vec![HermitianMatrix::identity(3)];
        basis.extend((0..extra).map(|_| traceless(3, &mut r)));
        let povm = gen_from_span(&basis).map_err(err)?;
        let rep = certify_povm(&povm, Property::Ic, &cfg).map_err(err)?;
        ensure(rep.span_dim == extra + 1, || format!("span {} for {} generators", rep.span_dim, extra + 1))?;
        ensure(rep.verdict == Verdict::No && rep.strength == Strength::Exact, || format!("span {} not IC-no", rep.span_dim))?;
        checked += 1;
    }
    // Random POVMs with too few outcomes.
    for n in 1..=8 {
        let povm = gen_random(3, n, 500 + n as u64).map_err(err)?;
        let rep = certify_povm(&povm, Property::Ic, &cfg).map_err(err)?;
        ensure(rep.span_dim <= n && rep.verdict == Verdict::No, || format!("{n} outcomes: {:?}", rep.verdict))?;
        checked += 1;
    }
    Ok(format!("span-8 qutrit PSIC exact and IC no; {checked} deficient qutrits IC no"))
}

fn qubit_equivalence() -> Outcome {
    for i in 0..100u64 {
        let n = 1 + (i as usize % 6);
        let povm = gen_random(2, n, derive_seed(21, i)).map_err(err)?;
        let cfg = CertifyConfig::with_seed(i);
        let psic = certify_povm(&povm, Property::Psic, &cfg).map_err(err)?;
        let ic = certify_povm(&povm, Property::Ic, &cfg).map_err(err)?;
        ensure(psic.verdict == ic.verdict && psic.verdict != Verdict::Undetermined, || {
            format!("seed {i}, {n} outcomes: PSIC {:?} vs IC {:?}", psic.verdict, ic.verdict)
        })?;
    }
    Ok("100 qubit POVMs, PSIC verdict equals IC verdict".into())
}

fn complement_decomposition() -> Outcome {
    let mut r = rng(31);
    let mut worst: f64 = 0.0;
    for i in 0..50u64 {
        let da = 2 + (i as usize % 2);
        let db = 3 + (i as usize / 2 % 2);
        let make = |d: usize, s: u64, r: &mut rand_chacha::ChaCha8Rng| -> Result<_, String> {
            match r.random_range(0..3) {
                0 => psic_factor(d, s).map_err(err),
                _ => gen_random(d, r.random_range(1..=d * d + 1), s).map_err(err),
            }
        };
        let a = make(da, derive_seed(i, 0), &mut r)?;
        let b = make(db, derive_seed(i, 1), &mut r)?;
        let rep = bipartite_complement(&a, &b, SPAN_TOL).report;
        ensure(rep.holds(1e-9), || format!("pair {i} ({da},{db}): {rep:?}"))?;
        worst = worst.max(rep.max_cross_inner).max(rep.max_containment_residual);
    }
    Ok(format!("50 pairs, worst cross inner product or residual {worst:.2e}"))
}

fn prop1_suite() -> Outcome {
    let cfg = HarnessConfig::default();
    for (da, db) in [(2, 3), (2, 4), (3, 4)] {
        let rep = check_prop1(&Prop1Options { da, db, corrupt_b: false }, 41, &cfg).map_err(err)?;
        consistent(&rep)?;
        require_check(&rep, "pure_pairs_distinguished")?;
        require_check(&rep, "min_rank_at_least_3")?;
        let bad = check_prop1(&Prop1Options { da, db, corrupt_b: true }, 41, &cfg).map_err(err)?;
        refuted(&bad)?;
    }
    Ok(format!("(2,3) (2,4) (3,4) consistent at {} pairs; corrupted B refuted", cfg.pairs))
}

fn prop2_suite() -> Outcome {
    let cfg = HarnessConfig::default();
    for s in [[1.0, 1.0, -2.0], [1.0, 2.0, -3.0]] {
        for db in [3, 4] {
            let rep = check_prop2(&Prop2Options { db, s, corrupt_a: false }, 51, &cfg).map_err(err)?;
            consistent(&rep)?;
            for name in ["pure_pairs_distinguished", "s_tensor_all_plus_span_a_tensor_b_perp_dimension"] {
                require_check(&rep, name)?;
            }
            let bad = check_prop2(&Prop2Options { db, s, corrupt_a: true }, 51, &cfg).map_err(err)?;
            refuted(&bad)?;
        }
    }
    Ok("S = diag(1,1,-2), diag(1,2,-3) with d_B = 3, 4 consistent; corrupted A refuted".into())
}

fn prop34_suite() -> Outcome {
    let cfg = HarnessConfig::default();
    for da in [2, 3] {
        let rep = check_prop3(&Prop3Options { da, db: 4, corrupt_b: false, case_two_a: false }, 61, &cfg).map_err(err)?;
        consistent(&rep)?;
        for name in ["closed_form_min_rank_pm_at_least_2", "pure_mixed_pairs_distinguished"] {
            require_check(&rep, name)?;
        }
        let bad = check_prop3(&Prop3Options { da, db: 4, corrupt_b: true, case_two_a: false }, 61, &cfg).map_err(err)?;
        refuted(&bad)?;
    }
    let rep4 = check_prop4(4, 61, &cfg).map_err(err)?;
    consistent(&rep4)?;
    let iff = rep4.checks.iter().filter(|c| c.name.starts_with("qutrit_vpsic_iff_ic/")).count();
    let rpm = rep4.checks.iter().filter(|c| c.name.starts_with("rank_pm_of_generator_is_1/")).count();
    ensure(iff >= 2 && rpm >= 1, || format!("only {iff} qutrit instances and {rpm} rank± checks"))?;
    Ok(format!("d_A = 2, 3 consistent; {iff} qutrit VPSIC-iff-IC instances, {rpm} rank± = 1 detections"))
}

fn interlacing_and_unitaries() -> Outcome {
    let inter = interlacing_suite(1000, 71).map_err(err)?;
    consistent(&inter)?;
    let slack = inter.check("interlacing_inequalities").map(|c| c.margin).unwrap_or(f64::NAN);
    let unit = check_proof_unitaries(71).map_err(err)?;
    consistent(&unit)?;
    for name in ["u3_unitary", "t11_formula", "trig_gram_rank_7"] {
        require_check(&unit, name)?;
    }
    Ok(format!("1000 draws (margin {slack:.2e}); proof unitaries pass"))
}

fn random_subspace(d: usize, k: usize, r: &mut impl Rng) -> Result<OperatorSubspace, String> {
    let elems: Vec<HermitianMatrix> = (0..k).map(|_| traceless(d, r)).collect();
    OperatorSubspace::span_of(d, &elems, SPAN_TOL).map_err(err)
}

fn oracle_equivalence() -> Outcome {
    let mut r = rng(81);
    let mut agree = 0;
    for i in 0..50u64 {
        let d = 3 + (i as usize % 2);
        let k = 1 + (i as usize / 2 % 2);
        let sub = random_subspace(d, k, &mut r)?;
        let grid = if k == 1 { 4 } else { 720 };
        for (target, cap) in [(RankTarget::Rank, d - 1), (RankTarget::RankPm, d / 2)] {
            let cfg = SearchConfig { max_target: Some(cap), ..SearchConfig::with_seed(i) };
            let found = match target {
                RankTarget::Rank => min_rank_search(&sub, &cfg),
                RankTarget::RankPm => min_rank_pm_search(&sub, &cfg),
            }
            .map_err(err)?;
            let oracle = brute_force_min_rank(&sub, grid, target, cfg.tol).map_err(err)?;
            ensure(found.min_found == oracle.min_found, || {
                format!("subspace {i} (d {d}, dim {k}) {target:?}: search {:?} oracle {:?}", found.min_found, oracle.min_found)
            })?;
            agree += 1;
        }
    }
    Ok(format!("{agree}/100 search results equal the grid oracle"))
}

fn tomography_round_trips() -> Outcome {
    let mut r = rng(91);
    let mut worst_err: f64 = 0.0;
    for i in 0..50u64 {
        let d = 2 + (i as usize % 3);
        let povm = psic_core::harness::ic_factor(d, derive_seed(92, i)).map_err(err)?;
        let rho = random_density(d, &mut r);
        let stats = born_probabilities(&povm, &rho).map_err(err)?;
        let est = linear_inversion(&povm, &stats).map_err(err)?;
        worst_err = worst_err.max(est.estimate.max_abs_diff(&rho));
    }
    ensure(worst_err <= 1e-8, || format!("linear inversion error {worst_err:.3e}"))?;

    let qutrit = qutrit_case_two(93).map_err(err)?;
    let product = tensor_povm(&gen_qutrit_psic([1.0, 1.0, -2.0]).map_err(err)?, &qutrit_case_two(94).map_err(err)?);
    let mut worst_fid: f64 = 1.0;
    for (povm, d) in [(&qutrit, 3), (&product, 9)] {
        for i in 0..50u64 {
            let psi = random_pure_state(d, &mut r);
            let stats = psic_core::StatisticsVector { probabilities: povm.pure_probabilities(&psi) };
            let fit = pure_state_fit(povm, &stats, 16, derive_seed(95, i)).map_err(err)?;
            worst_fid = worst_fid.min(fidelity_pure(&fit.state, &psi));
        }
    }
    ensure(worst_fid >= 1.0 - 1e-6, || format!("pure fit fidelity {worst_fid}"))?;

    let mut worst_rel: f64 = 0.0;
    for i in 0..20 {
        let (povm, d) = if i % 2 == 0 { (&qutrit, 3) } else { (&product, 9) };
        let target = povm.pure_probabilities(&random_pure_state(d, &mut r));
        let psi = random_pure_state(d, &mut r);
        let dir = random_pure_state(d, &mut r);
        let (_, g) = fit_objective(povm, &target, &psi);
        let analytic = dir.dotc(&g).re;
        let h = 1e-6;
        let step = &dir * Complex64::new(h, 0.0);
        let numeric = (fit_objective(povm, &target, &(&psi + &step)).0 - fit_objective(povm, &target, &(&psi - &step)).0) / (2.0 * h);
        worst_rel = worst_rel.max((analytic - numeric).abs() / analytic.abs().max(1e-3));
    }
    ensure(worst_rel <= 1e-5, || format!("gradient relative error {worst_rel:.3e}"))?;
    Ok(format!(
        "inversion error {worst_err:.2e}, worst fidelity 1 - {:.2e}, gradient error {worst_rel:.2e}",
        1.0 - worst_fid
    ))
}

fn multipartite() -> Outcome {
    let cfg = HarnessConfig::default();
    let mut witnesses = 0;
    let mut check_witnesses = |rep: &PropositionReport, factors: usize| -> Result<(), String> {
        consistent(rep)?;
        ensure(rep.witnesses.len() == factors && rep.witnesses.iter().all(|w| w.is_indistinguishable()), || {
            format!("{}: {} of {factors} lifted witnesses", rep.proposition, rep.witnesses.len())
        })?;
        witnesses += factors;
        Ok(())
    };
    for dims in [vec![2, 3], vec![3, 3], vec![2, 2, 3]] {
        let rep = check_multipartite(&dims, 101, &cfg).map_err(err)?;
        check_witnesses(&rep, dims.len())?;
    }
    for (da, db) in [(2, 6), (4, 3), (3, 6)] {
        let fa = psic_core::harness::factorize_23(da).ok_or("not 2^n 3^m")?;
        let fb = psic_core::harness::factorize_23(db).ok_or("not 2^n 3^m")?;
        let rep = check_factorized_dims(fa, fb, 102, &cfg).map_err(err)?;
        check_witnesses(&rep, fa.0 + fa.1 + fb.0 + fb.1)?;
    }
    Ok(format!("6 products consistent; {witnesses} corruption probes lifted to witnesses"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("qutrit counts", qutrit_counts),
        ("qubit equivalence", qubit_equivalence),
        ("complement decomposition", complement_decomposition),
        ("IC (x) PSIC suite", prop1_suite),
        ("qutrit (x) PSIC suite", prop2_suite),
        ("verifiable products suite", prop34_suite),
        ("interlacing and proof machinery", interlacing_and_unitaries),
        ("oracle equivalence", oracle_equivalence),
        ("tomography round trips", tomography_round_trips),
        ("multipartite", multipartite),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
