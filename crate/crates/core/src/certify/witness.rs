//! State pairs with identical statistics, built from complement elements.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{eigh, inertia_of_spectrum, HermitianMatrix};
use crate::povm::Povm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// Two distinct pure states.
    PurePure,
    /// A pure state and a different (generally mixed) state.
    PureMixed,
    /// Two distinct states, no purity claim.
    Mixed,
}

/// Two distinct states whose difference lies in `R(A)^perp`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessPair {
    pub kind: WitnessKind,
    pub first: HermitianMatrix,
    pub second: HermitianMatrix,
    /// Amplitudes of `first` when it is pure.
    #[serde(skip)]
    pub first_vector: Option<DVector<Complex64>>,
    /// Amplitudes of `second` when it is pure.
    #[serde(skip)]
    pub second_vector: Option<DVector<Complex64>>,
}

impl WitnessPair {
    /// `max_x |tr(first A(x)) - tr(second A(x))|`.
    pub fn statistics_distance(&self, povm: &Povm) -> f64 {
        let p = povm.probabilities_unchecked(&self.first);
        let q = povm.probabilities_unchecked(&self.second);
        p.iter().zip(&q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Hilbert-Schmidt distance between the two states.
    pub fn separation(&self) -> f64 {
        (&self.first - &self.second).norm()
    }
}

fn check_traceless(t: &HermitianMatrix, tol: f64) -> Result<()> {
    let tr = t.trace();
    if tr.abs() > tol * t.norm().max(1.0) {
        return Err(Error::InvalidWitness(format!("trace {tr:.3e} is not zero")));
    }
    Ok(())
}

/// Pure pair `u u^*`, `v v^*` from `t = lambda (u u^* - v v^*)` (traceless, rank two).
pub fn psic_witness_states(t: &HermitianMatrix, tol: f64) -> Result<WitnessPair> {
    check_traceless(t, tol)?;
    let es = eigh(t);
    let inertia = inertia_of_spectrum(&es.eigenvalues, tol);
    if inertia.rank() != 2 {
        return Err(Error::InvalidWitness(format!("rank {} is not 2", inertia.rank())));
    }
    let u = es.eigenvector(0);
    let v = es.eigenvector(t.dim() - 1);
    Ok(WitnessPair {
        kind: WitnessKind::PurePure,
        first: HermitianMatrix::projector(&u),
        second: HermitianMatrix::projector(&v),
        first_vector: Some(u),
        second_vector: Some(v),
    })
}

/// Pure state `u u^*` and state `sigma = u u^* - t / lambda_1` for traceless `t` with rank± one.
///
/// `t` is oriented so that it has exactly one strictly positive eigenvalue
/// `lambda_1` with eigenvector `u`; then `t = lambda_1 u u^* - N` with `N >= 0`
/// and `tr N = lambda_1`, so `sigma = N / lambda_1` is a state.
pub fn vpsic_witness_states(t: &HermitianMatrix, tol: f64) -> Result<WitnessPair> {
    check_traceless(t, tol)?;
    let es = eigh(t);
    let inertia = inertia_of_spectrum(&es.eigenvalues, tol);
    if inertia.rank_pm() != 1 {
        return Err(Error::InvalidWitness(format!("rank± {} is not 1", inertia.rank_pm())));
    }
    let (oriented, es) = if inertia.positive == 1 { (t.clone(), es) } else { (-t, eigh(&-t)) };
    let lambda = es.eigenvalues[0];
    let u = es.eigenvector(0);
    let pure = HermitianMatrix::projector(&u);
    let sigma = &pure - &oriented.scale(1.0 / lambda);
    let sigma_pure = psd_rank_one_vector(&sigma, tol);
    let kind = if sigma_pure.is_some() { WitnessKind::PurePure } else { WitnessKind::PureMixed };
    Ok(WitnessPair { kind, first: pure, second: sigma, first_vector: Some(u), second_vector: sigma_pure })
}

/// Positive and negative parts of a traceless `t`, each normalized to trace one.
pub fn mixed_witness_states(t: &HermitianMatrix, tol: f64) -> Result<WitnessPair> {
    check_traceless(t, tol)?;
    let es = eigh(t);
    let n = t.dim();
    let mut pos = HermitianMatrix::zeros(n);
    let mut neg = HermitianMatrix::zeros(n);
    for (j, &l) in es.eigenvalues.iter().enumerate() {
        let p = HermitianMatrix::projector(&es.eigenvector(j));
        if l > 0.0 {
            pos = &pos + &p.scale(l);
        } else if l < 0.0 {
            neg = &neg + &p.scale(-l);
        }
    }
    let (tp, tn) = (pos.trace(), neg.trace());
    if tp <= tol || tn <= tol {
        return Err(Error::InvalidWitness("matrix is zero".into()));
    }
    Ok(WitnessPair {
        kind: WitnessKind::Mixed,
        first: pos.scale(1.0 / tp),
        second: neg.scale(1.0 / tn),
        first_vector: None,
        second_vector: None,
    })
}

fn psd_rank_one_vector(rho: &HermitianMatrix, tol: f64) -> Option<DVector<Complex64>> {
    let es = eigh(rho);
    let i = inertia_of_spectrum(&es.eigenvalues, tol);
    (i.rank() == 1 && i.positive == 1).then(|| es.eigenvector(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{basis_state, validate_state};

    fn diag(d: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_real_diagonal(d)
    }

    #[test]
    fn psic_pair_from_diagonal() {
        let w = psic_witness_states(&diag(&[1.0, -1.0, 0.0]), 1e-8).unwrap();
        assert!(w.first.max_abs_diff(&HermitianMatrix::projector(&basis_state(3, 0))) < 1e-14);
        assert!(w.second.max_abs_diff(&HermitianMatrix::projector(&basis_state(3, 1))) < 1e-14);
    }

    #[test]
    fn psic_pair_from_padded_pauli_x() {
        let w = psic_witness_states(&HermitianMatrix::pauli_x().pad(1), 1e-8).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = DVector::from_vec(vec![Complex64::new(h, 0.0), Complex64::new(h, 0.0), Complex64::new(0.0, 0.0)]);
        let minus = DVector::from_vec(vec![Complex64::new(h, 0.0), Complex64::new(-h, 0.0), Complex64::new(0.0, 0.0)]);
        assert!(w.first.max_abs_diff(&HermitianMatrix::projector(&plus)) < 1e-14);
        assert!(w.second.max_abs_diff(&HermitianMatrix::projector(&minus)) < 1e-14);
        let diff = &w.first - &w.second;
        assert!(diff.max_abs_diff(&HermitianMatrix::pauli_x().pad(1)) < 1e-14);
    }

    #[test]
    fn psic_rejects_bad_input() {
        assert!(psic_witness_states(&diag(&[1.0, 1.0, -2.0]), 1e-8).is_err());
        assert!(psic_witness_states(&diag(&[1.0, 0.0, 0.0]), 1e-8).is_err());
    }

    #[test]
    fn vpsic_pair_examples() {
        let w = vpsic_witness_states(&diag(&[2.0, -1.0, -1.0]), 1e-8).unwrap();
        assert!(w.first.max_abs_diff(&diag(&[1.0, 0.0, 0.0])) < 1e-14);
        assert!(w.second.max_abs_diff(&diag(&[0.0, 0.5, 0.5])) < 1e-14);
        assert_eq!(w.kind, WitnessKind::PureMixed);
        validate_state(&w.second).unwrap();

        let w = vpsic_witness_states(&diag(&[1.0, -1.0, 0.0]), 1e-8).unwrap();
        assert!(w.second.max_abs_diff(&diag(&[0.0, 1.0, 0.0])) < 1e-14);

        // Orientation: one negative eigenvalue.
        let w = vpsic_witness_states(&diag(&[-2.0, 1.0, 1.0]), 1e-8).unwrap();
        assert!(w.first.max_abs_diff(&diag(&[1.0, 0.0, 0.0])) < 1e-14);

        assert!(vpsic_witness_states(&diag(&[1.0, 1.0, -1.0, -1.0]), 1e-8).is_err());
    }

    #[test]
    fn mixed_pair_difference_is_proportional() {
        let t = diag(&[1.0, 1.0, -1.0, -1.0]);
        let w = mixed_witness_states(&t, 1e-8).unwrap();
        let d = &w.first - &w.second;
        assert!(d.max_abs_diff(&t.scale(0.5)) < 1e-14);
    }
}
