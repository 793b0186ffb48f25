//! Randomized multi-start search for low-rank (or low rank±) elements of a
//! real subspace of Hermitian matrices.
//!
//! For a target `r`, each start minimizes a tail-energy objective on the unit
//! sphere of subspace coordinates `c`, with `T(c) = sum_k c_k B_k`:
//!
//! * rank: `f_r(c) = sum_{j > r} sigma_j(T(c))^2` (singular values descending),
//!   which vanishes iff `rank T(c) <= r`;
//! * rank±: `g_r(c) = min(P_r(T), P_r(-T))` with `P_r(T) = sum_{j > r} max(lambda_j, 0)^2`
//!   (eigenvalues descending), which vanishes iff `rank±(T(c)) <= r`.
//!
//! Descent uses the analytic gradient (first-order eigenvalue perturbation),
//! projected onto the tangent space of the sphere and retracted by
//! normalization, with an adaptive step.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{eigh, inertia_of_spectrum, HermitianMatrix, DEFAULT_RANK_TOL};
use crate::span::OperatorSubspace;
use crate::states::{derive_seed, rng};

/// Below this tail energy a non-certified best candidate is reported as borderline.
pub const BORDERLINE_ENERGY: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankTarget {
    Rank,
    RankPm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMethod {
    /// Closed form (zero- or one-dimensional subspace).
    Exact,
    /// Grid enumeration of the unit sphere.
    Exhaustive,
    /// Multi-start descent.
    Randomized,
}

/// Result of a minimum-rank or minimum-rank± search.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RankCertificate {
    pub target: RankTarget,
    /// Smallest measure found; `None` for the zero subspace (no nonzero element).
    pub min_found: Option<usize>,
    /// Unit-norm coordinates of the witness in the subspace's orthonormal basis.
    pub witness_coeffs: Vec<f64>,
    pub method: SearchMethod,
    pub trials: usize,
    pub tol: f64,
    /// Largest `r` for which the search tried to reach measure `<= r`.
    pub searched_up_to: usize,
    /// Tail energy of the witness for the last objective searched.
    pub best_objective: f64,
    /// True when no element of measure `<= searched_up_to` was certified but the
    /// best tail energy fell below [`BORDERLINE_ENERGY`].
    pub borderline: bool,
}

impl RankCertificate {
    pub fn witness(&self, sub: &OperatorSubspace) -> Option<HermitianMatrix> {
        (!self.witness_coeffs.is_empty()).then(|| sub.element(&self.witness_coeffs))
    }

    /// Whether an element with measure `<= bound` was found.
    pub fn found_at_most(&self, bound: usize) -> bool {
        self.min_found.is_some_and(|m| m <= bound)
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub starts: usize,
    pub iterations: usize,
    /// Extra descent iterations spent on the best start.
    pub polish_iterations: usize,
    pub seed: u64,
    pub tol: f64,
    /// Highest `r` to search; `None` means 2 for rank and 1 for rank±.
    pub max_target: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            starts: 64,
            iterations: 200,
            polish_iterations: 2000,
            seed: 0,
            tol: DEFAULT_RANK_TOL,
            max_target: None,
        }
    }
}

impl SearchConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    fn check(&self) -> Result<()> {
        if self.starts == 0 {
            return Err(Error::InvalidParameter("at least one start is required".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidTolerance(self.tol));
        }
        Ok(())
    }
}

/// Rank or rank± of a spectrum at the given tolerance.
pub(crate) fn measure(spectrum: &[f64], target: RankTarget, tol: f64) -> usize {
    let i = inertia_of_spectrum(spectrum, tol);
    match target {
        RankTarget::Rank => i.rank(),
        RankTarget::RankPm => i.rank_pm(),
    }
}

/// Tail energy and the matrix `G` whose pairing with `B_k` gives half the gradient.
pub(crate) struct Evaluation {
    pub value: f64,
    pub spectrum: Vec<f64>,
    grad_matrix: Option<DMatrix<Complex64>>,
}

pub(crate) fn tail_energy(spectrum: &[f64], target: RankTarget, r: usize) -> f64 {
    tail_terms(spectrum, target, r).0
}

/// `(value, indices of contributing eigenvalues)`.
fn tail_terms(spectrum: &[f64], target: RankTarget, r: usize) -> (f64, Vec<usize>) {
    match target {
        RankTarget::Rank => {
            let mut idx: Vec<usize> = (0..spectrum.len()).collect();
            idx.sort_by(|&a, &b| spectrum[b].abs().total_cmp(&spectrum[a].abs()));
            let tail: Vec<usize> = idx.into_iter().skip(r).collect();
            (tail.iter().map(|&j| spectrum[j] * spectrum[j]).sum(), tail)
        }
        RankTarget::RankPm => {
            // spectrum is descending
            let pos: Vec<usize> = (0..spectrum.len()).filter(|&j| spectrum[j] > 0.0).skip(r).collect();
            let neg: Vec<usize> =
                (0..spectrum.len()).rev().filter(|&j| spectrum[j] < 0.0).skip(r).collect();
            let e = |ix: &[usize]| ix.iter().map(|&j| spectrum[j] * spectrum[j]).sum::<f64>();
            let (ep, en) = (e(&pos), e(&neg));
            if ep <= en {
                (ep, pos)
            } else {
                (en, neg)
            }
        }
    }
}

pub(crate) fn evaluate(t: &HermitianMatrix, target: RankTarget, r: usize, want_grad: bool) -> Evaluation {
    let es = eigh(t);
    let (value, tail) = tail_terms(&es.eigenvalues, target, r);
    let grad_matrix = want_grad.then(|| {
        let n = t.dim();
        let mut g = DMatrix::<Complex64>::zeros(n, n);
        for &j in &tail {
            let v = es.eigenvectors.column(j);
            g += (v * v.adjoint()) * Complex64::new(es.eigenvalues[j], 0.0);
        }
        g
    });
    Evaluation { value, spectrum: es.eigenvalues, grad_matrix }
}

struct Descent<'a> {
    sub: &'a OperatorSubspace,
    target: RankTarget,
    r: usize,
}

struct StartResult {
    coeffs: DVector<f64>,
    value: f64,
}

impl Descent<'_> {
    fn element(&self, c: &DVector<f64>) -> HermitianMatrix {
        self.sub.element(c.as_slice())
    }

    /// Euclidean gradient of the objective in subspace coordinates.
    fn gradient(&self, ev: &Evaluation) -> DVector<f64> {
        let g = ev.grad_matrix.as_ref().expect("gradient requested");
        let gm = HermitianMatrix::from_matrix_unchecked(g.clone());
        self.sub.coords().transpose() * gm.to_real_coords() * 2.0
    }

    fn run(&self, mut c: DVector<f64>, iterations: usize, tol: f64) -> StartResult {
        let mut ev = evaluate(&self.element(&c), self.target, self.r, true);
        let mut step = 0.5_f64;
        for _ in 0..iterations {
            if measure(&ev.spectrum, self.target, tol) <= self.r || ev.value < 1e-30 {
                break;
            }
            let g = self.gradient(&ev);
            let tangent = &g - &c * c.dot(&g);
            if tangent.norm() < 1e-300 {
                break;
            }
            let mut improved = false;
            while step > 1e-14 {
                let mut trial = &c - &tangent * step;
                let n = trial.norm();
                trial /= n;
                let tev = evaluate(&self.element(&trial), self.target, self.r, true);
                if tev.value < ev.value {
                    c = trial;
                    ev = tev;
                    step = (step * 1.5).min(4.0);
                    improved = true;
                    break;
                }
                step *= 0.5;
            }
            if !improved {
                break;
            }
        }
        StartResult { coeffs: c, value: ev.value }
    }
}

fn random_unit<R: Rng + ?Sized>(m: usize, rng: &mut R) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(m, |_, _| rng.sample::<f64, _>(StandardNormal));
        let n = v.norm();
        if n > 1e-8 {
            return v / n;
        }
    }
}

fn all_traceless(sub: &OperatorSubspace) -> bool {
    sub.basis().iter().all(|b| b.trace().abs() <= 1e-12 * b.norm().max(1.0))
}

/// Smallest `r` worth searching: traceless nonzero matrices have rank >= 2 and rank± >= 1.
fn first_target(sub: &OperatorSubspace, target: RankTarget) -> usize {
    let traceless = all_traceless(sub);
    match target {
        RankTarget::Rank => {
            if traceless {
                2
            } else {
                1
            }
        }
        RankTarget::RankPm => usize::from(traceless),
    }
}

fn default_cap(target: RankTarget) -> usize {
    match target {
        RankTarget::Rank => 2,
        RankTarget::RankPm => 1,
    }
}

fn empty_certificate(target: RankTarget, cfg: &SearchConfig) -> RankCertificate {
    RankCertificate {
        target,
        min_found: None,
        witness_coeffs: vec![],
        method: SearchMethod::Exact,
        trials: 0,
        tol: cfg.tol,
        searched_up_to: 0,
        best_objective: 0.0,
        borderline: false,
    }
}

/// One-dimensional subspace: the only unit elements are `+-B_0`.
fn line_certificate(sub: &OperatorSubspace, target: RankTarget, cfg: &SearchConfig) -> RankCertificate {
    let es = crate::operator::eigenvalues(&sub.basis()[0]);
    let m = measure(&es, target, cfg.tol);
    RankCertificate {
        target,
        min_found: Some(m),
        witness_coeffs: vec![1.0],
        method: SearchMethod::Exact,
        trials: 1,
        tol: cfg.tol,
        searched_up_to: m,
        best_objective: 0.0,
        borderline: false,
    }
}

fn search(sub: &OperatorSubspace, target: RankTarget, cfg: &SearchConfig) -> Result<RankCertificate> {
    cfg.check()?;
    match sub.dim() {
        0 => return Ok(empty_certificate(target, cfg)),
        1 => return Ok(line_certificate(sub, target, cfg)),
        _ => {}
    }
    let m = sub.dim();
    let cap = cfg.max_target.unwrap_or_else(|| default_cap(target));
    let first = first_target(sub, target);
    let mut last: Option<(StartResult, usize)> = None;

    for r in first..=cap.max(first) {
        let descent = Descent { sub, target, r };
        let results: Vec<StartResult> = (0..cfg.starts)
            .into_par_iter()
            .map(|k| {
                let mut g = rng(derive_seed(cfg.seed, (r as u64) << 32 | k as u64));
                descent.run(random_unit(m, &mut g), cfg.iterations, cfg.tol)
            })
            .collect();
        // Lowest objective wins; ties go to the lowest start index.
        let best = results
            .into_iter()
            .reduce(|a, b| if b.value < a.value { b } else { a })
            .expect("at least one start");
        let best = descent.run(best.coeffs, cfg.polish_iterations, cfg.tol);
        let spectrum = crate::operator::eigenvalues(&descent.element(&best.coeffs));
        let found = measure(&spectrum, target, cfg.tol);
        if found <= r {
            return Ok(certificate(target, cfg, best, found, r, false));
        }
        last = Some((best, r));
        if r >= cap {
            break;
        }
    }
    let (best, r) = last.expect("at least one target searched");
    let spectrum = crate::operator::eigenvalues(&sub.element(best.coeffs.as_slice()));
    let found = measure(&spectrum, target, cfg.tol);
    let borderline = best.value < BORDERLINE_ENERGY;
    Ok(certificate(target, cfg, best, found, r, borderline))
}

fn certificate(
    target: RankTarget,
    cfg: &SearchConfig,
    best: StartResult,
    found: usize,
    r: usize,
    borderline: bool,
) -> RankCertificate {
    let n = best.coeffs.norm();
    RankCertificate {
        target,
        min_found: Some(found),
        witness_coeffs: best.coeffs.iter().map(|x| x / n).collect(),
        method: SearchMethod::Randomized,
        trials: cfg.starts,
        tol: cfg.tol,
        searched_up_to: r,
        best_objective: best.value,
        borderline,
    }
}

/// Least rank over unit-norm elements found by randomized search.
pub fn min_rank_search(sub: &OperatorSubspace, cfg: &SearchConfig) -> Result<RankCertificate> {
    search(sub, RankTarget::Rank, cfg)
}

/// Least rank± over unit-norm elements found by randomized search.
pub fn min_rank_pm_search(sub: &OperatorSubspace, cfg: &SearchConfig) -> Result<RankCertificate> {
    search(sub, RankTarget::RankPm, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{rank_eps, rank_pm};
    use crate::span::SPAN_TOL;

    fn diag(d: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_real_diagonal(d)
    }

    fn span(d: usize, els: &[HermitianMatrix]) -> OperatorSubspace {
        OperatorSubspace::span_of(d, els, SPAN_TOL).unwrap()
    }

    #[test]
    fn line_examples() {
        let c = min_rank_search(&span(3, &[diag(&[1.0, 1.0, -2.0])]), &SearchConfig::default()).unwrap();
        assert_eq!(c.min_found, Some(3));
        let sub = span(3, &[diag(&[1.0, -1.0, 0.0])]);
        let c = min_rank_search(&sub, &SearchConfig::default()).unwrap();
        assert_eq!(c.min_found, Some(2));
        let w = c.witness(&sub).unwrap();
        let g = diag(&[1.0, -1.0, 0.0]).normalized().unwrap();
        assert!(w.max_abs_diff(&g) < 1e-12 || w.max_abs_diff(&-&g) < 1e-12);

        let c = min_rank_pm_search(&span(3, &[diag(&[1.0, 1.0, -2.0])]), &SearchConfig::default()).unwrap();
        assert_eq!(c.min_found, Some(1));
        let c = min_rank_pm_search(&span(4, &[diag(&[1.0, 1.0, -1.0, -1.0])]), &SearchConfig::default()).unwrap();
        assert_eq!(c.min_found, Some(2));
    }

    #[test]
    fn zero_subspace_has_no_element() {
        let sub = span(2, &[]);
        let c = min_rank_search(&sub, &SearchConfig::default()).unwrap();
        assert_eq!(c.min_found, None);
        assert!(c.witness(&sub).is_none());
    }

    #[test]
    fn pauli_plane_in_dim_three() {
        let sub = span(3, &[HermitianMatrix::pauli_x().pad(1), HermitianMatrix::pauli_z().pad(1)]);
        let c = min_rank_search(&sub, &SearchConfig::default()).unwrap();
        assert_eq!(c.min_found, Some(2));
        let w = c.witness(&sub).unwrap();
        assert_eq!(rank_eps(&w, 1e-8).unwrap(), 2);
        assert!((c.witness_coeffs.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn finds_hidden_rank_two_direction() {
        // Generic 3-dim traceless subspace of 4x4 that contains diag(1,-1,0,0).
        let mut r = rng(77);
        let sub = span(
            4,
            &[
                diag(&[1.0, -1.0, 0.0, 0.0]).conjugate_by(&crate::operator::random_unitary(4, &mut r)),
                {
                    let h = HermitianMatrix::random(4, &mut r);
                    &h - &HermitianMatrix::identity(4).scale(h.trace() / 4.0)
                },
                {
                    let h = HermitianMatrix::random(4, &mut r);
                    &h - &HermitianMatrix::identity(4).scale(h.trace() / 4.0)
                },
            ],
        );
        let c = min_rank_search(&sub, &SearchConfig::with_seed(3)).unwrap();
        assert_eq!(c.min_found, Some(2));
        assert_eq!(rank_eps(&c.witness(&sub).unwrap(), 1e-8).unwrap(), 2);
    }

    #[test]
    fn rank_pm_finds_single_positive_direction() {
        let sub = span(4, &[diag(&[1.0, 1.0, -1.0, -1.0]), diag(&[3.0, -1.0, -1.0, -1.0])]);
        let c = min_rank_pm_search(&sub, &SearchConfig::default()).unwrap();
        assert_eq!(c.min_found, Some(1));
        assert_eq!(rank_pm(&c.witness(&sub).unwrap(), 1e-8).unwrap(), 1);
    }

    #[test]
    fn deterministic_given_seed() {
        let mut r = rng(5);
        let els: Vec<_> = (0..3).map(|_| HermitianMatrix::random(4, &mut r)).collect();
        let sub = span(4, &els);
        let a = min_rank_search(&sub, &SearchConfig::with_seed(9)).unwrap();
        let b = min_rank_search(&sub, &SearchConfig::with_seed(9)).unwrap();
        assert_eq!(a.witness_coeffs, b.witness_coeffs);
        assert_eq!(a.min_found, b.min_found);
    }

    #[test]
    fn rejects_bad_config() {
        let sub = span(2, &[HermitianMatrix::pauli_x(), HermitianMatrix::pauli_z()]);
        assert!(min_rank_search(&sub, &SearchConfig { starts: 0, ..SearchConfig::default() }).is_err());
        assert!(min_rank_search(&sub, &SearchConfig { tol: 0.0, ..SearchConfig::default() }).is_err());
    }
}
