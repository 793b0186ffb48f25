//! Certification of informational completeness (IC), pure-state informational
//! completeness (PSIC) and verifiable PSIC (VPSIC).
//!
//! * IC: `R(A)^perp = {0}`.
//! * PSIC: `R(A)^perp` contains no nonzero element of rank `<= 2`.
//! * VPSIC: every nonzero element of `R(A)^perp` has rank± `>= 2`.
//!
//! Exact verdicts are given when the complement is trivial, one-dimensional,
//! or the dimension forces the answer (qubits, qutrits). Otherwise the verdict
//! comes from randomized search and, for complements of dimension at most
//! three, the grid oracle; a "yes" from search alone is labelled empirical.

mod oracle;
mod search;
mod witness;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{eigenvalues, inertia_of_spectrum, HermitianMatrix};
use crate::povm::Povm;
use crate::span::{complement, operator_span, OperatorSubspace, SPAN_TOL};

pub use oracle::brute_force_min_rank;
pub use search::{
    min_rank_pm_search, min_rank_search, RankCertificate, RankTarget, SearchConfig, SearchMethod,
    BORDERLINE_ENERGY,
};
pub use witness::{mixed_witness_states, psic_witness_states, vpsic_witness_states, WitnessKind, WitnessPair};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Property {
    Ic,
    Psic,
    Vpsic,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Ic => "IC",
            Property::Psic => "PSIC",
            Property::Vpsic => "VPSIC",
        })
    }
}

impl FromStr for Property {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "IC" => Ok(Property::Ic),
            "PSIC" => Ok(Property::Psic),
            "VPSIC" => Ok(Property::Vpsic),
            other => Err(Error::InvalidParameter(format!("unknown property {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    Undetermined,
}

impl Verdict {
    /// Process exit code: 0 holds, 2 refuted, 3 undetermined.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Yes => 0,
            Verdict::No => 2,
            Verdict::Undetermined => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strength {
    Exact,
    Empirical,
}

#[derive(Clone, Debug)]
pub struct CertifyConfig {
    pub search: SearchConfig,
    /// Points per angle for the grid oracle on complements of dimension 2 or 3.
    pub oracle_grid_circle: usize,
    pub oracle_grid_sphere: usize,
    pub span_tol: f64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        Self { search: SearchConfig::default(), oracle_grid_circle: 720, oracle_grid_sphere: 60, span_tol: SPAN_TOL }
    }
}

impl CertifyConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { search: SearchConfig::with_seed(seed), ..Self::default() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertifyReport {
    pub property: Property,
    pub verdict: Verdict,
    pub strength: Strength,
    pub dim: usize,
    pub span_dim: usize,
    pub complement_dim: usize,
    pub certificate: Option<RankCertificate>,
    pub oracle: Option<RankCertificate>,
    /// The complement element the witness was built from.
    pub witness_element: Option<HermitianMatrix>,
    pub witness: Option<WitnessPair>,
    pub witness_statistics_distance: Option<f64>,
    pub note: String,
}

impl CertifyReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Yes
    }
}

struct Partial {
    verdict: Verdict,
    strength: Strength,
    certificate: Option<RankCertificate>,
    oracle: Option<RankCertificate>,
    element: Option<HermitianMatrix>,
    note: String,
}

impl Partial {
    fn exact(verdict: Verdict, element: Option<HermitianMatrix>, note: impl Into<String>) -> Self {
        Self { verdict, strength: Strength::Exact, certificate: None, oracle: None, element, note: note.into() }
    }
}

/// Decides `property` for `povm`.
pub fn certify_povm(povm: &Povm, property: Property, cfg: &CertifyConfig) -> Result<CertifyReport> {
    let span = operator_span(povm, cfg.span_tol);
    let comp = complement(&span);
    let d = povm.dim();
    let tol = cfg.search.tol;

    let partial = if comp.is_zero() {
        Partial::exact(Verdict::Yes, None, "complement is {0}")
    } else {
        match property {
            Property::Ic => Partial::exact(
                Verdict::No,
                Some(comp.basis()[0].clone()),
                format!("span dimension {} < {}", span.dim(), d * d),
            ),
            Property::Psic => decide_psic(&comp, cfg)?,
            Property::Vpsic => decide_vpsic(&comp, cfg)?,
        }
    };

    let witness = match (&partial.element, partial.verdict) {
        (Some(t), Verdict::No) => Some(match property {
            Property::Ic => mixed_witness_states(t, tol)?,
            Property::Psic => psic_witness_states(t, tol)?,
            Property::Vpsic => vpsic_witness_states(t, tol)?,
        }),
        _ => None,
    };
    let witness_statistics_distance = witness.as_ref().map(|w| w.statistics_distance(povm));
    Ok(CertifyReport {
        property,
        verdict: partial.verdict,
        strength: partial.strength,
        dim: d,
        span_dim: span.dim(),
        complement_dim: comp.dim(),
        certificate: partial.certificate,
        oracle: partial.oracle,
        witness_element: partial.element,
        witness,
        witness_statistics_distance,
        note: partial.note,
    })
}

fn decide_psic(comp: &OperatorSubspace, cfg: &CertifyConfig) -> Result<Partial> {
    let d = comp.ambient_dim();
    let tol = cfg.search.tol;
    if d == 2 {
        return Ok(Partial::exact(
            Verdict::No,
            Some(comp.basis()[0].clone()),
            "every nonzero traceless 2x2 matrix has rank 2",
        ));
    }
    if comp.dim() == 1 {
        let g = &comp.basis()[0];
        let rank = inertia_of_spectrum(&eigenvalues(g), tol).rank();
        return Ok(if rank >= 3 {
            Partial::exact(Verdict::Yes, None, format!("one-dimensional complement, generator rank {rank}"))
        } else {
            Partial::exact(Verdict::No, Some(g.clone()), format!("one-dimensional complement, generator rank {rank}"))
        });
    }
    if d == 3 {
        let t = singular_element_odd_dim(&comp.basis()[0], &comp.basis()[1]);
        return Ok(Partial::exact(
            Verdict::No,
            Some(t),
            "a plane of traceless 3x3 matrices always contains a singular (rank 2) element",
        ));
    }
    decide_by_search(comp, RankTarget::Rank, 2, cfg)
}

fn decide_vpsic(comp: &OperatorSubspace, cfg: &CertifyConfig) -> Result<Partial> {
    let d = comp.ambient_dim();
    let tol = cfg.search.tol;
    if d <= 3 {
        return Ok(Partial::exact(
            Verdict::No,
            Some(comp.basis()[0].clone()),
            "nonzero traceless matrices of size <= 3 have rank± 1",
        ));
    }
    if comp.dim() == 1 {
        let g = &comp.basis()[0];
        let rpm = inertia_of_spectrum(&eigenvalues(g), tol).rank_pm();
        return Ok(if rpm >= 2 {
            Partial::exact(Verdict::Yes, None, format!("one-dimensional complement, generator rank± {rpm}"))
        } else {
            Partial::exact(Verdict::No, Some(g.clone()), format!("one-dimensional complement, generator rank± {rpm}"))
        });
    }
    decide_by_search(comp, RankTarget::RankPm, 1, cfg)
}

fn decide_by_search(comp: &OperatorSubspace, target: RankTarget, bad_up_to: usize, cfg: &CertifyConfig) -> Result<Partial> {
    let search_cfg = SearchConfig { max_target: Some(bad_up_to), ..cfg.search.clone() };
    let cert = match target {
        RankTarget::Rank => min_rank_search(comp, &search_cfg)?,
        RankTarget::RankPm => min_rank_pm_search(comp, &search_cfg)?,
    };
    if cert.found_at_most(bad_up_to) {
        let element = cert.witness(comp);
        return Ok(Partial {
            verdict: Verdict::No,
            strength: Strength::Exact,
            certificate: Some(cert),
            oracle: None,
            element,
            note: "randomized search found a violating element (verified by re-evaluation)".into(),
        });
    }
    let oracle = if comp.dim() <= 3 {
        let grid = if comp.dim() == 2 { cfg.oracle_grid_circle } else { cfg.oracle_grid_sphere };
        Some(brute_force_min_rank(comp, grid, target, cfg.search.tol)?)
    } else {
        None
    };
    if let Some(o) = oracle.as_ref().filter(|o| o.found_at_most(bad_up_to)) {
        let element = o.witness(comp);
        return Ok(Partial {
            verdict: Verdict::No,
            strength: Strength::Exact,
            element,
            certificate: Some(cert),
            oracle: oracle.clone(),
            note: "grid oracle found a violating element (verified by re-evaluation)".into(),
        });
    }
    let (verdict, note) = if cert.borderline {
        (Verdict::Undetermined, format!("best tail energy {:.3e} is borderline", cert.best_objective))
    } else {
        (Verdict::Yes, format!("no violating element in {} starts", cert.trials))
    };
    Ok(Partial { verdict, strength: Strength::Empirical, certificate: Some(cert), oracle, element: None, note })
}

/// A singular element of `span{b0, b1}` for odd dimension, by bisection on the
/// determinant along the half circle (`det(-T) = -det(T)` forces a sign change).
fn singular_element_odd_dim(b0: &HermitianMatrix, b1: &HermitianMatrix) -> HermitianMatrix {
    let at = |t: f64| &b0.scale(t.cos()) + &b1.scale(t.sin());
    let det = |t: f64| eigenvalues(&at(t)).iter().product::<f64>();
    let (mut lo, mut hi) = (0.0_f64, std::f64::consts::PI);
    let mut flo = det(lo);
    if flo == 0.0 {
        return b0.clone();
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = det(mid);
        if fm == 0.0 {
            lo = mid;
            break;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-16 {
            break;
        }
    }
    let t = at(lo);
    t.normalized().unwrap_or(t)
}
