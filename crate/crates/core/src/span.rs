//! Operator spans `R(A)`, their Hilbert-Schmidt complements, and the
//! bipartite complement decomposition.
//!
//! `R(A)` is the *real* linear span of the effects inside the Hermitian
//! matrices. A POVM is informationally complete exactly when `R(A)` is
//! everything, and two states are indistinguishable exactly when their
//! difference lies in `R(A)^perp`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::certify::{min_rank_search, SearchConfig};
use crate::error::{Error, Result};
use crate::linalg;
use crate::operator::{eigh, hs_inner_unchecked, rank_eps, tensor, HermitianMatrix};
use crate::povm::Povm;

/// Default relative threshold for span rank decisions.
pub const SPAN_TOL: f64 = 1e-8;

/// A real subspace of `d x d` Hermitian matrices with an orthonormal basis.
#[derive(Clone, Debug)]
pub struct OperatorSubspace {
    ambient_dim: usize,
    basis: Vec<HermitianMatrix>,
    /// `d^2 x k`, column `j` holds the real coordinates of `basis[j]`.
    coords: DMatrix<f64>,
}

impl OperatorSubspace {
    fn from_coords(ambient_dim: usize, coords: DMatrix<f64>) -> Self {
        let basis = coords
            .column_iter()
            .map(|c| HermitianMatrix::from_real_coords(ambient_dim, c.as_slice()).expect("d^2 coordinates"))
            .collect();
        Self { ambient_dim, basis, coords }
    }

    /// Wraps a basis that is already orthonormal (Gram deviation at most `1e-9`).
    pub fn from_orthonormal(ambient_dim: usize, basis: Vec<HermitianMatrix>) -> Result<Self> {
        if let Some(b) = basis.iter().find(|b| b.dim() != ambient_dim) {
            return Err(Error::DimensionMismatch(b.dim(), ambient_dim));
        }
        let cols: Vec<DVector<f64>> = basis.iter().map(|b| b.to_real_coords()).collect();
        let coords = linalg::stack_columns(ambient_dim * ambient_dim, &cols);
        let s = Self { ambient_dim, basis, coords };
        let dev = s.gram_deviation();
        if dev > 1e-9 {
            return Err(Error::NotOrthonormal(dev));
        }
        Ok(s)
    }

    /// Orthonormalized real span of arbitrary Hermitian matrices.
    pub fn span_of(ambient_dim: usize, elements: &[HermitianMatrix], tol: f64) -> Result<Self> {
        if let Some(b) = elements.iter().find(|b| b.dim() != ambient_dim) {
            return Err(Error::DimensionMismatch(b.dim(), ambient_dim));
        }
        let cols: Vec<DVector<f64>> = elements.iter().map(|b| b.to_real_coords()).collect();
        let m = linalg::stack_columns(ambient_dim * ambient_dim, &cols);
        Ok(Self::from_coords(ambient_dim, linalg::column_space(&m, tol)))
    }

    /// All Hermitian `d x d` matrices.
    pub fn full(ambient_dim: usize) -> Self {
        let n = ambient_dim * ambient_dim;
        Self::from_coords(ambient_dim, DMatrix::identity(n, n))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[HermitianMatrix] {
        &self.basis
    }

    pub fn coords(&self) -> &DMatrix<f64> {
        &self.coords
    }

    /// `sum_k c_k B_k`.
    pub fn element(&self, coeffs: &[f64]) -> HermitianMatrix {
        assert_eq!(coeffs.len(), self.dim(), "coefficient count must match subspace dimension");
        let v = &self.coords * DVector::from_column_slice(coeffs);
        HermitianMatrix::from_real_coords(self.ambient_dim, v.as_slice()).expect("d^2 coordinates")
    }

    /// Coordinates of the orthogonal projection of `t`.
    pub fn project_coeffs(&self, t: &HermitianMatrix) -> Vec<f64> {
        (self.coords.transpose() * t.to_real_coords()).iter().copied().collect()
    }

    pub fn project(&self, t: &HermitianMatrix) -> HermitianMatrix {
        if self.is_zero() {
            return HermitianMatrix::zeros(self.ambient_dim);
        }
        self.element(&self.project_coeffs(t))
    }

    /// Hilbert-Schmidt norm of `t - P(t)`.
    pub fn residual(&self, t: &HermitianMatrix) -> f64 {
        (t - &self.project(t)).norm()
    }

    pub fn contains(&self, t: &HermitianMatrix, tol: f64) -> bool {
        self.residual(t) <= tol
    }

    /// Largest deviation of the basis Gram matrix from the identity.
    pub fn gram_deviation(&self) -> f64 {
        let k = self.dim();
        if k == 0 {
            return 0.0;
        }
        let g = self.coords.transpose() * &self.coords;
        (g - DMatrix::<f64>::identity(k, k)).amax()
    }

    /// Same subspace with every basis element negated.
    pub fn negated(&self) -> Self {
        Self::from_coords(self.ambient_dim, -&self.coords)
    }

    /// `span{S (x) T : S in self, T in other}` with the tensor of the two bases.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut basis = Vec::with_capacity(self.dim() * other.dim());
        for s in &self.basis {
            for t in &other.basis {
                basis.push(tensor(s, t));
            }
        }
        let d = self.ambient_dim * other.ambient_dim;
        let cols: Vec<DVector<f64>> = basis.iter().map(|b| b.to_real_coords()).collect();
        let coords = linalg::stack_columns(d * d, &cols);
        Self { ambient_dim: d, basis, coords }
    }

    /// Largest `|<B_j | C_k>|` across the two bases.
    pub fn max_cross_inner(&self, other: &Self) -> f64 {
        if self.is_zero() || other.is_zero() {
            return 0.0;
        }
        (self.coords.transpose() * &other.coords).amax()
    }

    /// Largest residual of this basis against `other` (zero iff contained).
    pub fn max_residual_in(&self, other: &Self) -> f64 {
        self.basis.iter().map(|b| other.residual(b)).fold(0.0, f64::max)
    }

    /// Orthonormal basis of the joint span of both subspaces.
    pub fn direct_sum(&self, other: &Self, tol: f64) -> Result<Self> {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Self::span_of(self.ambient_dim, &all, tol)
    }
}

/// `R(A)`: the orthonormalized real span of the effects.
pub fn operator_span(povm: &Povm, tol: f64) -> OperatorSubspace {
    let q = linalg::column_space(&povm.coordinate_matrix(), tol);
    OperatorSubspace::from_coords(povm.dim(), q)
}

/// Orthogonal complement inside all Hermitian matrices of the same size.
pub fn complement(sub: &OperatorSubspace) -> OperatorSubspace {
    let d = sub.ambient_dim;
    OperatorSubspace::from_coords(d, linalg::orthogonal_complement(&sub.coords, d * d))
}

/// `R(A)^perp` of a POVM.
pub fn povm_complement(povm: &Povm, tol: f64) -> OperatorSubspace {
    complement(&operator_span(povm, tol))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IcReport {
    pub informationally_complete: bool,
    pub span_dim: usize,
}

pub fn is_ic(povm: &Povm, tol: f64) -> IcReport {
    let span_dim = operator_span(povm, tol).dim();
    IcReport { informationally_complete: span_dim == povm.dim() * povm.dim(), span_dim }
}

/// Whether `rho1 - rho2` lies in `R(A)^perp` (projection onto `R(A)` has norm at most `tol`).
pub fn difference_in_kernel(
    povm: &Povm,
    rho1: &HermitianMatrix,
    rho2: &HermitianMatrix,
    tol: f64,
) -> Result<bool> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch(rho1.dim(), rho2.dim()));
    }
    if rho1.dim() != povm.dim() {
        return Err(Error::DimensionMismatch(rho1.dim(), povm.dim()));
    }
    let span = operator_span(povm, SPAN_TOL);
    Ok(span.project(&(rho1 - rho2)).norm() <= tol)
}

/// Numerical evidence that the three summands exhaust `R(A (x) B)^perp`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DirectSumReport {
    /// `[dim(R(A)^perp (x) R(B)), dim(R(A) (x) R(B)^perp), dim(R(A)^perp (x) R(B)^perp)]`.
    pub summand_dims: [usize; 3],
    pub max_cross_inner: f64,
    pub max_containment_residual: f64,
    pub dim_sum: usize,
    /// `d_A^2 d_B^2 - dim R(A) dim R(B)`.
    pub expected_dim: usize,
    /// Complement dimension computed directly from the product POVM.
    pub product_complement_dim: usize,
    pub span_a: usize,
    pub span_b: usize,
    pub product_span: usize,
}

impl DirectSumReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.max_cross_inner <= tol
            && self.max_containment_residual <= tol
            && self.dim_sum == self.expected_dim
            && self.product_complement_dim == self.expected_dim
            && self.product_span == self.span_a * self.span_b
    }
}

#[derive(Clone, Debug)]
pub struct BipartiteComplement {
    pub perp_a_span_b: OperatorSubspace,
    pub span_a_perp_b: OperatorSubspace,
    pub perp_a_perp_b: OperatorSubspace,
    pub report: DirectSumReport,
}

impl BipartiteComplement {
    pub fn summands(&self) -> [&OperatorSubspace; 3] {
        [&self.perp_a_span_b, &self.span_a_perp_b, &self.perp_a_perp_b]
    }
}

/// Builds `R(A)^perp (x) R(B)`, `R(A) (x) R(B)^perp`, `R(A)^perp (x) R(B)^perp` and checks
/// they are orthogonal, lie in `R(A (x) B)^perp`, and add up to its dimension.
pub fn bipartite_complement(a: &Povm, b: &Povm, tol: f64) -> BipartiteComplement {
    let (ra, rb) = (operator_span(a, tol), operator_span(b, tol));
    let (ca, cb) = (complement(&ra), complement(&rb));
    let s1 = ca.tensor(&rb);
    let s2 = ra.tensor(&cb);
    let s3 = ca.tensor(&cb);

    let product = crate::povm::tensor_povm(a, b);
    let product_span = operator_span(&product, tol);
    let product_complement_dim = product.dim() * product.dim() - product_span.dim();

    let cross = [s1.max_cross_inner(&s2), s1.max_cross_inner(&s3), s2.max_cross_inner(&s3)]
        .into_iter()
        .fold(0.0, f64::max);
    // Containment in the complement means zero projection onto R(A (x) B).
    let leak = |s: &OperatorSubspace| {
        s.basis()
            .iter()
            .map(|t| product_span.project(t).norm())
            .fold(0.0, f64::max)
    };
    let containment = leak(&s1).max(leak(&s2)).max(leak(&s3));
    let full = product.dim() * product.dim();
    let report = DirectSumReport {
        summand_dims: [s1.dim(), s2.dim(), s3.dim()],
        max_cross_inner: cross,
        max_containment_residual: containment,
        dim_sum: s1.dim() + s2.dim() + s3.dim(),
        expected_dim: full - ra.dim() * rb.dim(),
        product_complement_dim,
        span_a: ra.dim(),
        span_b: rb.dim(),
        product_span: product_span.dim(),
    };
    BipartiteComplement { perp_a_span_b: s1, span_a_perp_b: s2, perp_a_perp_b: s3, report }
}

/// Classification of a qutrit POVM's complement.
#[derive(Clone, Debug)]
pub enum QutritClass {
    /// Case (i): `R(A)^perp = {0}`.
    InformationallyComplete,
    /// Case (ii): `R(A)^perp = R S` with `S` invertible.
    SingleFullRank {
        /// Unit-norm generator of the complement.
        generator: HermitianMatrix,
        /// Eigenvalues of `generator` (descending); they sum to zero.
        spectrum: [f64; 3],
        /// Unitary diagonalizing the generator: `generator = U diag(spectrum) U^*`.
        eigenbasis: DMatrix<num_complex::Complex64>,
    },
    /// Anything else; never pure-state informationally complete.
    Other {
        complement_dim: usize,
        /// Smallest rank found in the complement, with its unit-norm witness.
        min_rank: usize,
        witness: HermitianMatrix,
    },
}

impl QutritClass {
    pub fn is_psic(&self) -> bool {
        !matches!(self, QutritClass::Other { .. })
    }
}

pub fn qutrit_classify(a: &Povm, tol: f64) -> Result<QutritClass> {
    if a.dim() != 3 {
        return Err(Error::DimensionMismatch(a.dim(), 3));
    }
    let comp = povm_complement(a, tol);
    match comp.dim() {
        0 => Ok(QutritClass::InformationallyComplete),
        1 => {
            let s = comp.basis()[0].clone();
            let rank = rank_eps(&s, tol)?;
            if rank == 3 {
                let es = eigh(&s);
                let spectrum = [es.eigenvalues[0], es.eigenvalues[1], es.eigenvalues[2]];
                Ok(QutritClass::SingleFullRank { generator: s, spectrum, eigenbasis: es.eigenvectors })
            } else {
                Ok(QutritClass::Other { complement_dim: 1, min_rank: rank, witness: s })
            }
        }
        k => {
            let cert = min_rank_search(&comp, &SearchConfig { tol, ..SearchConfig::default() })?;
            let witness = comp.element(&cert.witness_coeffs);
            Ok(QutritClass::Other {
                complement_dim: k,
                min_rank: cert.min_found.unwrap_or(0),
                witness,
            })
        }
    }
}

/// Whether `t` is orthogonal to every effect (i.e. lies in `R(A)^perp`).
pub fn in_complement(povm: &Povm, t: &HermitianMatrix, tol: f64) -> bool {
    povm.effects().iter().all(|e| hs_inner_unchecked(e, t).abs() <= tol)
}
