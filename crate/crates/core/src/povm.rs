//! Finite-outcome POVMs: validation, the Born map, tensor products and generators.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::operator::{eigenvalues, eigh, hs_inner_unchecked, tensor, HermitianMatrix};
use crate::states::{self, validate_state};

/// Default tolerance for completeness and positivity checks.
pub const POVM_TOL: f64 = 1e-9;

const LABEL_SEPARATOR: &str = ",";

/// A finite list of positive semidefinite effects summing to the identity.
#[derive(Clone, Debug)]
pub struct Povm {
    dim: usize,
    effects: Vec<HermitianMatrix>,
    labels: Vec<String>,
}

/// One reason a candidate POVM fails validation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    EffectDimension { index: usize, dim: usize },
    NegativeEffect { index: usize, min_eigenvalue: f64 },
    Completeness { max_deviation: f64 },
}

/// Outcome probabilities of one state under one POVM.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatisticsVector {
    pub probabilities: Vec<f64>,
}

impl StatisticsVector {
    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    /// `max_x |p(x) - q(x)|`.
    pub fn max_distance(&self, other: &Self) -> f64 {
        self.probabilities
            .iter()
            .zip(&other.probabilities)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Checks entries lie in `[-1e-9, 1 + 1e-9]` and sum to one within `1e-8`.
    pub fn check(&self) -> Result<()> {
        if let Some(p) = self.probabilities.iter().find(|p| **p < -1e-9 || **p > 1.0 + 1e-9) {
            return Err(Error::InvalidParameter(format!("probability {p} out of range")));
        }
        let s: f64 = self.probabilities.iter().sum();
        if (s - 1.0).abs() > 1e-8 {
            return Err(Error::InvalidParameter(format!("probabilities sum to {s}")));
        }
        Ok(())
    }
}

impl Povm {
    /// Structural checks only (nonempty, square effects of one dimension, label count).
    ///
    /// Use [`Povm::new`] for a fully validated POVM.
    pub fn from_parts(effects: Vec<HermitianMatrix>, labels: Vec<String>) -> Result<Self> {
        let first = effects.first().ok_or_else(|| Error::InvalidPovm("no effects".into()))?;
        let dim = first.dim();
        if labels.len() != effects.len() {
            return Err(Error::LengthMismatch { expected: effects.len(), got: labels.len() });
        }
        Ok(Self { dim, effects, labels })
    }

    /// Builds a POVM and rejects it unless [`validate`] reports nothing at [`POVM_TOL`].
    pub fn new(effects: Vec<HermitianMatrix>, labels: Vec<String>) -> Result<Self> {
        let p = Self::from_parts(effects, labels)?;
        let report = validate(&p, POVM_TOL);
        match report.first() {
            None => Ok(p),
            Some(v) => Err(Error::InvalidPovm(format!("{v:?}"))),
        }
    }

    /// Effects labelled `"0"`, `"1"`, ...
    pub fn with_index_labels(effects: Vec<HermitianMatrix>) -> Result<Self> {
        let labels = (0..effects.len()).map(|j| j.to_string()).collect();
        Self::new(effects, labels)
    }

    /// The single-outcome POVM `{I}`.
    pub fn trivial(dim: usize) -> Self {
        Self { dim, effects: vec![HermitianMatrix::identity(dim)], labels: vec!["0".into()] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_outcomes(&self) -> usize {
        self.effects.len()
    }

    pub fn effects(&self) -> &[HermitianMatrix] {
        &self.effects
    }

    pub fn effect(&self, x: usize) -> &HermitianMatrix {
        &self.effects[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `d^2 x n` matrix whose columns are the real coordinates of the effects.
    pub fn coordinate_matrix(&self) -> DMatrix<f64> {
        let cols: Vec<DVector<f64>> = self.effects.iter().map(|e| e.to_real_coords()).collect();
        linalg::stack_columns(self.dim * self.dim, &cols)
    }

    /// `<psi|A(x)|psi>` for every outcome; no state validation.
    pub fn pure_probabilities(&self, psi: &DVector<Complex64>) -> Vec<f64> {
        self.effects.iter().map(|e| states::expectation(e, psi)).collect()
    }

    /// `tr(rho A(x))` for every outcome; no state validation.
    pub fn probabilities_unchecked(&self, rho: &HermitianMatrix) -> Vec<f64> {
        self.effects.iter().map(|e| hs_inner_unchecked(rho, e)).collect()
    }
}

/// Lists every violated POVM invariant at tolerance `tol`; empty means valid.
pub fn validate(povm: &Povm, tol: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    let d = povm.dim;
    let mut sum = DMatrix::<Complex64>::zeros(d, d);
    let mut shapes_ok = true;
    for (index, e) in povm.effects.iter().enumerate() {
        if e.dim() != d {
            out.push(Violation::EffectDimension { index, dim: e.dim() });
            shapes_ok = false;
            continue;
        }
        let min = eigenvalues(e).last().copied().unwrap_or(0.0);
        if min < -tol * e.norm().max(1.0) {
            out.push(Violation::NegativeEffect { index, min_eigenvalue: min });
        }
        sum += e.as_matrix();
    }
    if shapes_ok {
        let dev = (sum - DMatrix::<Complex64>::identity(d, d))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if dev > tol {
            out.push(Violation::Completeness { max_deviation: dev });
        }
    }
    out
}

/// Born rule `rho -> (tr(rho A(x)))_x` for a validated density matrix.
pub fn born_probabilities(povm: &Povm, state: &HermitianMatrix) -> Result<StatisticsVector> {
    if state.dim() != povm.dim {
        return Err(Error::DimensionMismatch(state.dim(), povm.dim));
    }
    validate_state(state)?;
    Ok(StatisticsVector { probabilities: povm.probabilities_unchecked(state) })
}

/// `(A (x) B)(x, y) = A(x) (x) B(y)`, outcomes ordered with `y` fastest.
pub fn tensor_povm(a: &Povm, b: &Povm) -> Povm {
    let mut effects = Vec::with_capacity(a.num_outcomes() * b.num_outcomes());
    let mut labels = Vec::with_capacity(effects.capacity());
    for (ea, la) in a.effects.iter().zip(&a.labels) {
        for (eb, lb) in b.effects.iter().zip(&b.labels) {
            effects.push(tensor(ea, eb));
            labels.push(format!("{la}{LABEL_SEPARATOR}{lb}"));
        }
    }
    Povm { dim: a.dim * b.dim, effects, labels }
}

/// Left fold of [`tensor_povm`]; labels become comma-separated tuples.
pub fn tensor_povm_n(parts: &[Povm]) -> Result<Povm> {
    let (first, rest) =
        parts.split_first().ok_or_else(|| Error::InvalidParameter("empty factor list".into()))?;
    Ok(rest.iter().fold(first.clone(), |acc, p| tensor_povm(&acc, p)))
}

/// The tetrahedral qubit SIC: `A(x) = (I + n_x . sigma)/4`.
pub fn gen_sic_qubit() -> Povm {
    let r2 = std::f64::consts::SQRT_2;
    let dirs = [
        [0.0, 0.0, 1.0],
        [2.0 * r2 / 3.0, 0.0, -1.0 / 3.0],
        [-r2 / 3.0, (2.0_f64 / 3.0).sqrt(), -1.0 / 3.0],
        [-r2 / 3.0, -(2.0_f64 / 3.0).sqrt(), -1.0 / 3.0],
    ];
    let (x, y, z) = (HermitianMatrix::pauli_x(), HermitianMatrix::pauli_y(), HermitianMatrix::pauli_z());
    let effects = dirs
        .iter()
        .map(|n| {
            let bloch = &(&(&x * n[0]) + &(&y * n[1])) + &(&z * n[2]);
            (&HermitianMatrix::identity(2) + &bloch).scale(0.25)
        })
        .collect();
    Povm::with_index_labels(effects).expect("tetrahedral SIC is a valid POVM")
}

/// A POVM whose real operator span equals `span(basis)`.
///
/// The span is orthonormalized and split into the identity direction plus `m`
/// orthonormal traceless `G_i`. The effects are `(I + eps G_i)/(m+1)` and the
/// closing effect `(I - eps sum_i G_i)/(m+1)`, with `eps` small enough that every
/// effect is positive semidefinite.
pub fn gen_from_span(basis: &[HermitianMatrix]) -> Result<Povm> {
    let first = basis.first().ok_or_else(|| Error::DegenerateBasis("empty basis".into()))?;
    let d = first.dim();
    if let Some(b) = basis.iter().find(|b| b.dim() != d) {
        return Err(Error::DimensionMismatch(b.dim(), d));
    }
    if let Some(j) = basis.iter().position(|b| b.norm() < 1e-12) {
        return Err(Error::DegenerateBasis(format!("element {j} is zero")));
    }
    let cols: Vec<DVector<f64>> = basis.iter().map(|b| b.to_real_coords()).collect();
    let q = linalg::column_space(&linalg::stack_columns(d * d, &cols), 1e-10);

    let unit_identity = HermitianMatrix::identity(d).scale(1.0 / (d as f64).sqrt()).to_real_coords();
    let along = q.transpose() * &unit_identity;
    let residual = (&unit_identity - &q * along).norm();
    if residual > 1e-8 {
        return Err(Error::IdentityNotInSpan(residual));
    }

    // Traceless part of the span.
    // Its singular values are 0 or 1, so an all-noise projection means the span is R I.
    let proj = &q - &unit_identity * (unit_identity.transpose() * &q);
    if proj.norm() < 1e-8 {
        return Ok(Povm::trivial(d));
    }
    let traceless = linalg::column_space(&proj, 1e-8);
    let gens: Vec<HermitianMatrix> = traceless
        .column_iter()
        .map(|c| HermitianMatrix::from_real_coords(d, c.as_slice()).expect("d^2 coordinates"))
        .collect();
    let m = gens.len();
    if m == 0 {
        return Ok(Povm::trivial(d));
    }

    let spectral = |t: &HermitianMatrix| eigenvalues(t).iter().fold(0.0_f64, |a, l| a.max(l.abs()));
    let total = gens.iter().skip(1).fold(gens[0].clone(), |acc, g| &acc + g);
    let worst = gens.iter().map(spectral).fold(spectral(&total), f64::max);
    let eps = 0.9 / worst;

    let w = 1.0 / (m as f64 + 1.0);
    let id = HermitianMatrix::identity(d);
    let mut effects: Vec<HermitianMatrix> =
        gens.iter().map(|g| (&id + &g.scale(eps)).scale(w)).collect();
    effects.push((&id - &total.scale(eps)).scale(w));
    Povm::with_index_labels(effects)
}

/// A POVM whose operator-span complement is exactly `span(generators)`.
///
/// The generators must be traceless so that the identity stays in the span.
pub fn gen_with_complement(dim: usize, generators: &[HermitianMatrix]) -> Result<Povm> {
    let cols: Vec<DVector<f64>> = generators
        .iter()
        .map(|g| {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch(g.dim(), dim));
            }
            if g.trace().abs() > 1e-9 * g.norm().max(1.0) {
                return Err(Error::IdentityNotInSpan(g.trace().abs()));
            }
            Ok(g.to_real_coords())
        })
        .collect::<Result<_>>()?;
    let q = linalg::column_space(&linalg::stack_columns(dim * dim, &cols), 1e-10);
    let comp = linalg::orthogonal_complement(&q, dim * dim);
    let basis: Vec<HermitianMatrix> = comp
        .column_iter()
        .map(|c| HermitianMatrix::from_real_coords(dim, c.as_slice()).expect("d^2 coordinates"))
        .collect();
    gen_from_span(&basis)
}

/// Qutrit POVM with complement `R S`, `S = diag(s)` (a case-(ii) POVM when `S` is invertible).
pub fn gen_qutrit_psic(s: [f64; 3]) -> Result<Povm> {
    gen_with_complement(3, &[HermitianMatrix::from_real_diagonal(&s)])
}

/// Dimension-4 POVM with complement `span{diag(1, 1, -1, -1)}`.
pub fn gen_dim4_vpsic() -> Povm {
    gen_with_complement(4, &[HermitianMatrix::from_real_diagonal(&[1.0, 1.0, -1.0, -1.0])])
        .expect("traceless generator")
}

/// Random POVM `A(x) = W^{-1/2} M_x W^{-1/2}` with Wishart `M_x` and `W = sum_x M_x`.
pub fn gen_random(dim: usize, n_outcomes: usize, seed: u64) -> Result<Povm> {
    if dim == 0 || n_outcomes == 0 {
        return Err(Error::InvalidParameter("dim and n_outcomes must be positive".into()));
    }
    const ATTEMPTS: usize = 10;
    let mut rng = states::rng(seed);
    for _ in 0..ATTEMPTS {
        let ms: Vec<HermitianMatrix> = (0..n_outcomes)
            .map(|_| {
                let g = crate::operator::random_complex_matrix(dim, dim, &mut rng);
                HermitianMatrix::from_matrix_unchecked(&g * g.adjoint())
            })
            .collect();
        let w = ms.iter().skip(1).fold(ms[0].clone(), |acc, m| &acc + m);
        let es = eigh(&w);
        let max = es.eigenvalues[0];
        let min = *es.eigenvalues.last().expect("nonempty spectrum");
        if min.is_nan() || min <= 1e-12 * max {
            continue;
        }
        let inv_sqrt = DMatrix::from_diagonal(&DVector::from_iterator(
            dim,
            es.eigenvalues.iter().map(|l| Complex64::new(1.0 / l.sqrt(), 0.0)),
        ));
        let w_inv_sqrt = &es.eigenvectors * inv_sqrt * es.eigenvectors.adjoint();
        let effects = ms
            .iter()
            .map(|m| HermitianMatrix::from_matrix_unchecked(&w_inv_sqrt * m.as_matrix() * &w_inv_sqrt))
            .collect();
        return Povm::with_index_labels(effects);
    }
    Err(Error::SingularFrame(ATTEMPTS))
}
