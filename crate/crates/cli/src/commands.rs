use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde_json::{json, Value};

use psic_core::certify::{certify_povm, CertifyConfig, CertifyReport, Property, SearchConfig, Verdict};
use psic_core::harness::{self, HarnessConfig, PropositionReport};
use psic_core::json::{self as pj, PovmDocument, StateDocument, StatisticsDocument};
use psic_core::povm::{self, born_probabilities, Povm};
use psic_core::states::{random_density, random_pure_state, rng, validate_state};
use psic_core::tomography::{linear_inversion, pure_state_fit, Uniqueness};
use psic_core::{HermitianMatrix, Result as CoreResult};

use crate::output::{emit, with_provenance, TOOL_VERSION};
use crate::{CheckArgs, CheckKind, Command, GenKind, Mode, PropertyArg, RandomState};

pub fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Gen { kind, dim, outcomes, seed, s, basis, output } => {
            gen(kind, dim, outcomes, seed, &s, basis.as_deref(), output.out.as_deref())
        }
        Command::Certify { povm, property, trials, seed, tol, output } => {
            certify(&povm, property, trials, seed, tol, output.out.as_deref())
        }
        Command::Tensor { a, b, output } => tensor(&a, &b, output.out.as_deref()),
        Command::Check(args) => check(&args),
        Command::Reconstruct { povm, stats, mode, starts, seed, reference, output } => {
            reconstruct(&povm, &stats, mode, starts, seed, reference.as_deref(), output.out.as_deref())
        }
        Command::Stats { povm, state, random, seed, state_out, output } => {
            stats(&povm, state.as_deref(), random, seed, state_out.as_deref(), output.out.as_deref())
        }
        Command::Validate { povm, tol, output } => validate(&povm, tol, output.out.as_deref()),
        Command::Explore { da, db, trials, seed, output } => explore(da, db, trials, seed, output.out.as_deref()),
    }
}

fn load(path: &Path) -> Result<Povm> {
    let (povm, _) = pj::load_povm(path).with_context(|| format!("loading POVM {}", path.display()))?;
    Ok(povm)
}

fn povm_summary(povm: &Povm) -> String {
    let span = psic_core::span::operator_span(povm, psic_core::span::SPAN_TOL).dim();
    format!("dim {}, {} outcomes, span dimension {span} of {}\n", povm.dim(), povm.num_outcomes(), povm.dim() * povm.dim())
}

fn gen(kind: GenKind, dim: usize, outcomes: usize, seed: u64, s: &[f64], basis: Option<&Path>, out: Option<&Path>) -> Result<u8> {
    let (p, params) = match kind {
        GenKind::Sic2 => (povm::gen_sic_qubit(), json!({})),
        GenKind::Random => (povm::gen_random(dim, outcomes, seed)?, json!({ "dim": dim, "outcomes": outcomes, "seed": seed })),
        GenKind::QutritPsic => {
            let s: [f64; 3] = s.try_into().map_err(|_| anyhow::anyhow!("--s needs exactly three values"))?;
            (povm::gen_qutrit_psic(s)?, json!({ "s": s }))
        }
        GenKind::Dim4Vpsic => (povm::gen_dim4_vpsic(), json!({ "complement": "diag(1,1,-1,-1)" })),
        GenKind::FromSpan => {
            let path = basis.context("from-span needs --basis FILE")?;
            let mats: Vec<HermitianMatrix> = pj::read_file(path).with_context(|| format!("reading {}", path.display()))?;
            (povm::gen_from_span(&mats)?, json!({ "basis_size": mats.len() }))
        }
    };
    let name = kind.to_possible_value().expect("no skipped variants").get_name().to_owned();
    let meta = json!({ "tool_version": TOOL_VERSION, "generator": name, "params": params });
    let doc = PovmDocument::from_povm(&p, Some(meta));
    emit(out, &doc, &format!("generated {name}: {}", povm_summary(&p)))?;
    Ok(0)
}

fn property(p: PropertyArg) -> Property {
    match p {
        PropertyArg::Ic => Property::Ic,
        PropertyArg::Psic => Property::Psic,
        PropertyArg::Vpsic => Property::Vpsic,
    }
}

fn certify_summary(r: &CertifyReport) -> String {
    let verdict = match r.verdict {
        Verdict::Yes => "yes",
        Verdict::No => "no",
        Verdict::Undetermined => "undetermined",
    };
    let mut s = format!(
        "{}: {verdict} ({:?}); span {} of {}, complement {}\n  {}\n",
        r.property,
        r.strength,
        r.span_dim,
        r.dim * r.dim,
        r.complement_dim,
        r.note
    );
    if let (Some(w), Some(d)) = (&r.witness, r.witness_statistics_distance) {
        let _ = writeln!(s, "  witness {:?}: state separation {:.3e}, statistics distance {d:.3e}", w.kind, w.separation());
    }
    s
}

fn certify(path: &Path, prop: PropertyArg, trials: usize, seed: u64, tol: f64, out: Option<&Path>) -> Result<u8> {
    let p = load(path)?;
    if trials == 0 {
        bail!("--trials must be positive");
    }
    let cfg = CertifyConfig { search: SearchConfig { starts: trials, seed, tol, ..SearchConfig::default() }, ..CertifyConfig::default() };
    let report = certify_povm(&p, property(prop), &cfg)?;
    let mut doc = with_provenance(&report, seed)?;
    doc["povm"] = json!(path.display().to_string());
    doc["trials"] = json!(trials);
    doc["tol"] = json!(tol);
    emit(out, &doc, &certify_summary(&report))?;
    Ok(report.verdict.exit_code() as u8)
}

fn tensor(a: &Path, b: &Path, out: Option<&Path>) -> Result<u8> {
    let (pa, pb) = (load(a)?, load(b)?);
    let product = povm::tensor_povm(&pa, &pb);
    let meta = json!({
        "tool_version": TOOL_VERSION,
        "generator": "tensor",
        "factors": [a.display().to_string(), b.display().to_string()],
        "factor_dims": [pa.dim(), pb.dim()],
    });
    emit(out, &PovmDocument::from_povm(&product, Some(meta)), &format!("tensor product: {}", povm_summary(&product)))?;
    Ok(0)
}

fn report_summary(r: &PropositionReport) -> String {
    let mut s = format!("check {}: {:?}\n", r.proposition, r.verdict);
    for c in &r.checks {
        let _ = writeln!(s, "  [{}] {} (margin {:.3e})", if c.pass { "pass" } else { "FAIL" }, c.name, c.margin);
    }
    for w in &r.witnesses {
        let _ = writeln!(s, "  witness: {} (statistics distance {:.3e}, separation {:.3e})", w.description, w.statistics_distance, w.separation);
    }
    s
}

fn check(a: &CheckArgs) -> Result<u8> {
    let cfg = HarnessConfig { pairs: a.pairs, search: SearchConfig { starts: a.starts, ..SearchConfig::default() } };
    let report: CoreResult<PropositionReport> = match a.which {
        CheckKind::One => harness::check_prop1(
            &harness::Prop1Options { da: a.da.unwrap_or(2), db: a.db.unwrap_or(3), corrupt_b: a.corrupt_b },
            a.seed,
            &cfg,
        ),
        CheckKind::Two => {
            let s: [f64; 3] = a.s.as_slice().try_into().map_err(|_| anyhow::anyhow!("--s needs exactly three values"))?;
            harness::check_prop2(&harness::Prop2Options { db: a.db.unwrap_or(3), s, corrupt_a: a.corrupt_a }, a.seed, &cfg)
        }
        CheckKind::Three => harness::check_prop3(
            &harness::Prop3Options {
                da: a.da.unwrap_or(2),
                db: a.db.unwrap_or(4),
                corrupt_b: a.corrupt_b,
                case_two_a: a.case_two_a,
            },
            a.seed,
            &cfg,
        ),
        CheckKind::Four => harness::check_prop4(a.db.unwrap_or(4), a.seed, &cfg),
        CheckKind::Multi => harness::check_multipartite(&a.factors, a.seed, &cfg),
        CheckKind::Dims => {
            let (da, db) = (a.da.unwrap_or(2), a.db.unwrap_or(6));
            let fa = harness::factorize_23(da).with_context(|| format!("d_A = {da} is not of the form 2^n 3^m"))?;
            let fb = harness::factorize_23(db).with_context(|| format!("d_B = {db} is not of the form 2^n 3^m"))?;
            harness::check_factorized_dims(fa, fb, a.seed, &cfg)
        }
        CheckKind::Interlacing => harness::interlacing_suite(a.draws, a.seed),
        CheckKind::Unitaries => harness::check_proof_unitaries(a.seed),
    };
    let report = report?;
    emit(a.output.out.as_deref(), &with_provenance(&report, a.seed)?, &report_summary(&report))?;
    Ok(report.verdict.exit_code() as u8)
}

fn reconstruct(
    povm_path: &Path,
    stats_path: &Path,
    mode: Mode,
    starts: usize,
    seed: u64,
    reference: Option<&Path>,
    out: Option<&Path>,
) -> Result<u8> {
    let p = load(povm_path)?;
    let sd: StatisticsDocument = pj::read_file(stats_path).with_context(|| format!("reading {}", stats_path.display()))?;
    let stats = sd.statistics();
    let reference: Option<StateDocument> = reference.map(pj::read_file).transpose()?;
    let mut doc = json!({ "povm": povm_path.display().to_string(), "povm_ref": sd.povm_ref });
    let mut summary = String::new();
    let estimate = match mode {
        Mode::Linear => {
            let est = linear_inversion(&p, &stats)?;
            doc["mode"] = json!("linear");
            doc["residual"] = json!(est.residual);
            doc["span_dim"] = json!(est.span_dim);
            let _ = writeln!(summary, "linear inversion: residual {:.3e}, span dimension {}", est.residual, est.span_dim);
            doc["state"] = serde_json::to_value(StateDocument::mixed(&est.estimate))?;
            est.estimate
        }
        Mode::Pure => {
            let fit = pure_state_fit(&p, &stats, starts, seed)?;
            doc["mode"] = json!("pure");
            doc["residual"] = json!(fit.residual);
            doc["span_dim"] = json!(fit.span_dim);
            doc["uniqueness"] = serde_json::to_value(fit.uniqueness)?;
            doc["starts"] = json!(starts);
            let _ = writeln!(summary, "pure fit: residual {:.3e}, span dimension {}, uniqueness {:?}", fit.residual, fit.span_dim, fit.uniqueness);
            if fit.uniqueness == Uniqueness::NotUnique {
                summary.push_str("  several pure states reproduce the statistics\n");
            }
            let state = StateDocument::pure(&fit.state);
            let rho = state.density.clone();
            doc["state"] = serde_json::to_value(state)?;
            rho
        }
    };
    if let Some(r) = reference {
        let err = estimate.max_abs_diff(&r.density);
        // <psi| rho_ref |psi> for a pure estimate.
        let fidelity = match mode {
            Mode::Pure => Some(psic_core::operator::hs_inner(&estimate, &r.density)?),
            Mode::Linear => None,
        };
        doc["reference_max_abs_error"] = json!(err);
        let _ = writeln!(summary, "  max entry error against reference {err:.3e}");
        if let Some(f) = fidelity {
            doc["reference_fidelity"] = json!(f);
            let _ = writeln!(summary, "  fidelity to reference {f:.12}");
        }
    }
    emit(out, &with_provenance(&doc, seed)?, &summary)?;
    Ok(0)
}

fn stats(
    povm_path: &Path,
    state: Option<&Path>,
    random: Option<RandomState>,
    seed: u64,
    state_out: Option<&Path>,
    out: Option<&Path>,
) -> Result<u8> {
    let p = load(povm_path)?;
    let doc = match (state, random) {
        (Some(path), _) => pj::read_file::<StateDocument>(path).with_context(|| format!("reading {}", path.display()))?,
        (None, Some(kind)) => {
            let mut r = rng(seed);
            match kind {
                RandomState::Pure => StateDocument::pure(&random_pure_state(p.dim(), &mut r)),
                RandomState::Mixed => StateDocument::mixed(&random_density(p.dim(), &mut r)),
            }
        }
        (None, None) => bail!("give --state FILE or --random pure|mixed"),
    };
    validate_state(&doc.density)?;
    let sv = born_probabilities(&p, &doc.density)?;
    if let Some(path) = state_out {
        pj::write_file(path, &doc)?;
    }
    let sd = StatisticsDocument::new(povm_path.display().to_string(), &sv);
    emit(out, &sd, &format!("{} probabilities\n", sv.len()))?;
    Ok(0)
}

fn validate(path: &Path, tol: f64, out: Option<&Path>) -> Result<u8> {
    let doc: PovmDocument = pj::read_file(path).with_context(|| format!("reading {}", path.display()))?;
    let p = Povm::from_parts(doc.effects.clone(), doc.labels.clone())?;
    let mut violations = povm::validate(&p, tol);
    if p.dim() != doc.dim {
        violations.insert(0, povm::Violation::EffectDimension { index: 0, dim: p.dim() });
    }
    let summary = if violations.is_empty() {
        format!("valid: {}", povm_summary(&p))
    } else {
        violations.iter().fold(format!("{} violation(s)\n", violations.len()), |mut s, v| {
            let _ = writeln!(s, "  {v:?}");
            s
        })
    };
    let report: Value = json!({ "valid": violations.is_empty(), "violations": violations, "tol": tol });
    emit(out, &with_provenance(&report, 0)?, &summary)?;
    Ok(if violations.is_empty() { 0 } else { 2 })
}

fn explore(da: usize, db: usize, trials: usize, seed: u64, out: Option<&Path>) -> Result<u8> {
    let cfg = CertifyConfig { search: SearchConfig { starts: trials, seed, ..SearchConfig::default() }, ..CertifyConfig::default() };
    let e = harness::explore_psic_product(da, db, seed, &cfg)?;
    let summary = format!("exploration (empirical, not a theorem check) d_A={da}, d_B={db}\n{}", certify_summary(&e.product));
    emit(out, &with_provenance(&e, seed)?, &summary)?;
    Ok(e.product.verdict.exit_code() as u8)
}
