//! State reconstruction from exact outcome statistics.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::operator::HermitianMatrix;
use crate::povm::{Povm, StatisticsVector};
use crate::span::{operator_span, SPAN_TOL};
use crate::states::{derive_seed, fidelity_pure, fix_phase, random_pure_state, rng};

/// Real weights `alpha_x` with `sum_x alpha_x A(x) = O`, so `<O> = sum_x alpha_x p(x)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionCoefficients {
    pub alphas: Vec<f64>,
    pub residual: f64,
}

impl ExpansionCoefficients {
    pub fn expectation(&self, stats: &StatisticsVector) -> f64 {
        self.alphas.iter().zip(&stats.probabilities).map(|(a, p)| a * p).sum()
    }
}

/// Minimum-norm expansion of `observable` over the effects.
pub fn expectation_coeffs(povm: &Povm, observable: &HermitianMatrix, tol: f64) -> Result<ExpansionCoefficients> {
    if observable.dim() != povm.dim() {
        return Err(Error::DimensionMismatch(observable.dim(), povm.dim()));
    }
    let e = povm.coordinate_matrix();
    let o = observable.to_real_coords();
    let alpha = linalg::least_squares(&e, &o, SPAN_TOL);
    let residual = (&e * &alpha - &o).norm();
    if residual > tol * observable.norm().max(1.0) {
        return Err(Error::OutsideSpan(residual));
    }
    Ok(ExpansionCoefficients { alphas: alpha.iter().copied().collect(), residual })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LinearEstimate {
    pub estimate: HermitianMatrix,
    /// `|| (tr(rho_hat A(x)))_x - p ||_2`.
    pub residual: f64,
    pub span_dim: usize,
}

fn check_len(povm: &Povm, stats: &StatisticsVector) -> Result<()> {
    if stats.len() != povm.num_outcomes() {
        return Err(Error::LengthMismatch { expected: povm.num_outcomes(), got: stats.len() });
    }
    Ok(())
}

/// Least-squares estimate inside `R(A)` with unit trace enforced.
///
/// For exact statistics of `rho` this is the orthogonal projection of `rho`
/// onto `R(A)`, hence `rho` itself when the POVM is informationally complete.
pub fn linear_inversion(povm: &Povm, stats: &StatisticsVector) -> Result<LinearEstimate> {
    check_len(povm, stats)?;
    let d = povm.dim();
    let span = operator_span(povm, SPAN_TOL);
    let e = povm.coordinate_matrix();
    let p = DVector::from_column_slice(&stats.probabilities);
    let design: DMatrix<f64> = e.transpose() * span.coords();
    let beta = linalg::least_squares(&design, &p, SPAN_TOL);
    let mut estimate = span.element(beta.as_slice());
    let tr = estimate.trace();
    estimate = &estimate + &HermitianMatrix::identity(d).scale((1.0 - tr) / d as f64);
    let fitted = povm.probabilities_unchecked(&estimate);
    let residual = fitted.iter().zip(&stats.probabilities).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    Ok(LinearEstimate { estimate, residual, span_dim: span.dim() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Uniqueness {
    /// The POVM is informationally complete.
    Guaranteed,
    /// Two starts reached different states with the same residual.
    NotUnique,
    /// Every start agreeing is evidence, not proof.
    Unverified,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PureFit {
    #[serde(serialize_with = "ser_vector", deserialize_with = "de_vector")]
    pub state: DVector<Complex64>,
    /// `F(psi) = sum_x (<psi|A(x)|psi> - p_x)^2` at the returned state.
    pub residual: f64,
    pub span_dim: usize,
    pub uniqueness: Uniqueness,
    pub best_start: usize,
}

fn ser_vector<S: serde::Serializer>(v: &DVector<Complex64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    crate::json::vector_to_pairs(v).serialize(s)
}

fn de_vector<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<DVector<Complex64>, D::Error> {
    let pairs: Vec<[f64; 2]> = Vec::deserialize(d)?;
    Ok(crate::json::vector_from_pairs(&pairs))
}

/// `F(psi)` and its Euclidean gradient `4 sum_x r_x A(x) psi` on `C^d = R^{2d}`.
pub fn fit_objective(povm: &Povm, p: &[f64], psi: &DVector<Complex64>) -> (f64, DVector<Complex64>) {
    let mut f = 0.0;
    let mut g = DVector::zeros(psi.len());
    for (a, &px) in povm.effects().iter().zip(p) {
        let ap = a.as_matrix() * psi;
        let r = psi.dotc(&ap).re - px;
        f += r * r;
        g += ap * Complex64::new(4.0 * r, 0.0);
    }
    (f, g)
}

const FIT_ITERATIONS: usize = 500;
const FIT_STOP: f64 = 1e-30;

/// Residuals `r_x = <psi|A(x)|psi> - p_x` and their Jacobian in `(Re psi, Im psi)`.
fn residuals(povm: &Povm, p: &[f64], psi: &DVector<Complex64>) -> (DVector<f64>, DMatrix<f64>) {
    let d = psi.len();
    let n = povm.num_outcomes();
    let mut r = DVector::zeros(n);
    let mut jac = DMatrix::zeros(n, 2 * d);
    for (x, (a, &px)) in povm.effects().iter().zip(p).enumerate() {
        let ap = a.as_matrix() * psi;
        r[x] = psi.dotc(&ap).re - px;
        for j in 0..d {
            jac[(x, j)] = 2.0 * ap[j].re;
            jac[(x, d + j)] = 2.0 * ap[j].im;
        }
    }
    (r, jac)
}

/// Levenberg-Marquardt on `F` over `R^{2d}`. No norm constraint is needed:
/// since the effects sum to the identity, `sum_x r_x = |psi|^2 - 1`.
fn descend(povm: &Povm, p: &[f64], mut psi: DVector<Complex64>) -> (f64, DVector<Complex64>) {
    let d = psi.len();
    let (mut r, mut jac) = residuals(povm, p, &psi);
    let mut f = r.norm_squared();
    let mut lambda = 1e-3;
    for _ in 0..FIT_ITERATIONS {
        if f < FIT_STOP || lambda > 1e16 {
            break;
        }
        let jt = jac.transpose();
        let mut h = &jt * &jac;
        let g = &jt * &r;
        for k in 0..2 * d {
            h[(k, k)] += lambda;
        }
        let Some(chol) = h.cholesky() else {
            lambda *= 10.0;
            continue;
        };
        let delta = chol.solve(&(-g));
        let cand = DVector::from_fn(d, |j, _| psi[j] + Complex64::new(delta[j], delta[d + j]));
        let (rc, jc) = residuals(povm, p, &cand);
        let fc = rc.norm_squared();
        if fc < f {
            psi = cand;
            r = rc;
            jac = jc;
            f = fc;
            lambda = (lambda / 3.0).max(1e-15);
        } else {
            lambda *= 4.0;
        }
    }
    let n = psi.norm();
    if n > 0.0 {
        psi /= Complex64::new(n, 0.0);
    }
    (fit_objective(povm, p, &psi).0, psi)
}

/// Multi-start least-squares fit of a pure state to `stats`.
///
/// Starts run in parallel; the lowest residual wins, ties going to the lower
/// start index. The returned state has its largest amplitude real positive.
pub fn pure_state_fit(povm: &Povm, stats: &StatisticsVector, starts: usize, seed: u64) -> Result<PureFit> {
    check_len(povm, stats)?;
    if starts == 0 {
        return Err(Error::InvalidParameter("at least one start is required".into()));
    }
    let d = povm.dim();
    let p = &stats.probabilities;
    let runs: Vec<(f64, DVector<Complex64>)> = (0..starts)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(derive_seed(seed, i as u64));
            descend(povm, p, random_pure_state(d, &mut r))
        })
        .collect();
    let best_start = runs
        .iter()
        .enumerate()
        .fold(0, |b, (i, (f, _))| if *f < runs[b].0 { i } else { b });
    let (residual, psi) = runs[best_start].clone();
    let span_dim = operator_span(povm, SPAN_TOL).dim();
    let uniqueness = if span_dim == d * d {
        Uniqueness::Guaranteed
    } else if (d > 1 && span_dim == 1)
        || runs.iter().any(|(f, q)| *f <= residual.max(1e-20) * 10.0 && fidelity_pure(q, &psi) < 1.0 - 1e-6)
    {
        Uniqueness::NotUnique
    } else {
        Uniqueness::Unverified
    };
    Ok(PureFit { state: fix_phase(&psi), residual, span_dim, uniqueness, best_start })
}

/// `max_x |tr(rho1 A(x)) - tr(rho2 A(x))|`.
pub fn statistics_distance(povm: &Povm, rho1: &HermitianMatrix, rho2: &HermitianMatrix) -> Result<f64> {
    for r in [rho1, rho2] {
        if r.dim() != povm.dim() {
            return Err(Error::DimensionMismatch(r.dim(), povm.dim()));
        }
    }
    let a = povm.probabilities_unchecked(rho1);
    let b = povm.probabilities_unchecked(rho2);
    Ok(a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::povm::{born_probabilities, gen_qutrit_psic, gen_sic_qubit};
    use crate::states::{basis_state, pure_density, random_density};

    fn stats_of(povm: &Povm, rho: &HermitianMatrix) -> StatisticsVector {
        born_probabilities(povm, rho).unwrap()
    }

    #[test]
    fn identity_and_pauli_expansions() {
        let sic = gen_sic_qubit();
        let c = expectation_coeffs(&sic, &HermitianMatrix::identity(2), 1e-9).unwrap();
        assert!(c.residual <= 1e-9);
        let z = HermitianMatrix::pauli_z();
        let c = expectation_coeffs(&sic, &z, 1e-9).unwrap();
        let mut r = rng(3);
        for _ in 0..20 {
            let rho = random_density(2, &mut r);
            let exact = crate::operator::hs_inner(&rho, &z).unwrap();
            assert!((c.expectation(&stats_of(&sic, &rho)) - exact).abs() <= 1e-9);
        }
    }

    #[test]
    fn complement_generator_is_outside_span() {
        let p = gen_qutrit_psic([1.0, 1.0, -2.0]).unwrap();
        let s = HermitianMatrix::from_real_diagonal(&[1.0, 1.0, -2.0]);
        assert!(matches!(expectation_coeffs(&p, &s, 1e-9), Err(Error::OutsideSpan(_))));
    }

    #[test]
    fn ic_linear_inversion_recovers_state() {
        let sic = gen_sic_qubit();
        let mut r = rng(5);
        let rho = random_density(2, &mut r);
        let est = linear_inversion(&sic, &stats_of(&sic, &rho)).unwrap();
        assert!(est.estimate.max_abs_diff(&rho) <= 1e-9);
    }

    #[test]
    fn trivial_povm_gives_maximally_mixed() {
        let p = Povm::trivial(3);
        let rho = pure_density(&basis_state(3, 0));
        let est = linear_inversion(&p, &stats_of(&p, &rho)).unwrap();
        assert!(est.estimate.max_abs_diff(&HermitianMatrix::identity(3).scale(1.0 / 3.0)) <= 1e-12);
    }

    #[test]
    fn deficient_span_gives_projection() {
        let p = gen_qutrit_psic([1.0, 1.0, -2.0]).unwrap();
        let s = HermitianMatrix::from_real_diagonal(&[1.0, 1.0, -2.0]).normalized().unwrap();
        let mut r = rng(9);
        let rho = random_density(3, &mut r);
        let est = linear_inversion(&p, &stats_of(&p, &rho)).unwrap();
        let c = crate::operator::hs_inner(&rho, &s).unwrap();
        let expected = &rho - &s.scale(c);
        assert!(est.estimate.max_abs_diff(&expected) <= 1e-9);
    }

    #[test]
    fn length_mismatch() {
        let sic = gen_sic_qubit();
        let bad = StatisticsVector { probabilities: vec![0.5, 0.5] };
        assert!(matches!(linear_inversion(&sic, &bad), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn pure_fit_round_trip_on_psic_qutrit() {
        let p = gen_qutrit_psic([1.0, 2.0, -3.0]).unwrap();
        let mut r = rng(11);
        let psi = random_pure_state(3, &mut r);
        let fit = pure_state_fit(&p, &stats_of(&p, &pure_density(&psi)), 16, 0).unwrap();
        assert!(fidelity_pure(&fit.state, &psi) >= 1.0 - 1e-6);
        assert_eq!(fit.span_dim, 8);
    }

    #[test]
    fn pure_fit_of_mixed_statistics_has_residual() {
        let sic = gen_sic_qubit();
        let fit = pure_state_fit(&sic, &stats_of(&sic, &HermitianMatrix::identity(2).scale(0.5)), 8, 0).unwrap();
        // p_x = (1 + n_x.r)/4 with sum_x n_x n_x^T = (4/3) I, so every pure state
        // (|r| = 1) has residual (1/16)(4/3) = 1/12.
        assert!((fit.residual - 1.0 / 12.0).abs() < 1e-9, "{}", fit.residual);
    }

    #[test]
    fn trivial_povm_fit_is_not_unique() {
        let p = Povm::trivial(2);
        let fit = pure_state_fit(&p, &stats_of(&p, &pure_density(&basis_state(2, 0))), 4, 0).unwrap();
        assert!(fit.residual < 1e-20);
        assert_eq!(fit.uniqueness, Uniqueness::NotUnique);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let p = gen_qutrit_psic([1.0, 1.0, -2.0]).unwrap();
        let mut r = rng(2);
        let target: Vec<f64> = p.pure_probabilities(&random_pure_state(3, &mut r));
        for _ in 0..10 {
            let psi = random_pure_state(3, &mut r);
            let dir = random_pure_state(3, &mut r);
            let (_, g) = fit_objective(&p, &target, &psi);
            let analytic = dir.dotc(&g).re;
            let h = 1e-6;
            let fp = fit_objective(&p, &target, &(&psi + &dir * Complex64::new(h, 0.0))).0;
            let fm = fit_objective(&p, &target, &(&psi - &dir * Complex64::new(h, 0.0))).0;
            let numeric = (fp - fm) / (2.0 * h);
            assert!((analytic - numeric).abs() <= 1e-5 * analytic.abs().max(1e-3), "{analytic} {numeric}");
        }
    }

    #[test]
    fn witness_pair_has_zero_distance() {
        let p = gen_qutrit_psic([1.0, 1.0, -2.0]).unwrap();
        let w = crate::certify::vpsic_witness_states(&HermitianMatrix::from_real_diagonal(&[1.0, 1.0, -2.0]), 1e-8).unwrap();
        assert!(statistics_distance(&p, &w.first, &w.second).unwrap() <= 1e-9);
        let sic = gen_sic_qubit();
        let a = pure_density(&basis_state(2, 0));
        let b = pure_density(&basis_state(2, 1));
        assert!(statistics_distance(&sic, &a, &b).unwrap() >= 0.1);
    }
}
