//! Dense Hermitian matrix primitives.
//!
//! Everything here works on small dense matrices (dimension at most a few
//! dozen). The real vector space of `d x d` Hermitian matrices carries the
//! Hilbert-Schmidt inner product `<S|T> = tr(ST)`; [`HermitianMatrix::to_real_coords`]
//! maps it isometrically onto `R^{d^2}` so that real linear algebra can be used
//! for spans and complements.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Asymmetry below this is silently repaired at construction.
pub const HERMITIAN_REPAIR_TOL: f64 = 1e-9;

/// Default relative tolerance for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

const ORTHONORMAL_TOL: f64 = 1e-8;

/// A `d x d` complex self-adjoint matrix.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix {
    m: DMatrix<Complex64>,
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HermitianMatrix({}x{}) ", self.dim(), self.dim())?;
        fmt::Debug::fmt(&self.m, f)
    }
}

/// Eigenvalues in descending order together with matching orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    /// Column `j` is the eigenvector for `eigenvalues[j]`.
    pub eigenvectors: DMatrix<Complex64>,
}

impl EigenSystem {
    pub fn eigenvector(&self, j: usize) -> DVector<Complex64> {
        self.eigenvectors.column(j).into_owned()
    }

    /// Rebuilds `sum_j lambda_j v_j v_j^*`.
    pub fn reconstruct(&self) -> HermitianMatrix {
        let n = self.eigenvalues.len();
        let mut out = DMatrix::<Complex64>::zeros(n, n);
        for (j, &lam) in self.eigenvalues.iter().enumerate() {
            let v = self.eigenvectors.column(j);
            out += (v * v.adjoint()) * Complex64::new(lam, 0.0);
        }
        HermitianMatrix::from_matrix_unchecked(out)
    }
}

impl HermitianMatrix {
    /// Validates and symmetrizes a square complex matrix.
    ///
    /// Asymmetry up to [`HERMITIAN_REPAIR_TOL`] (relative to `max(1, max|entry|)`)
    /// is repaired by taking `(M + M^*)/2`; anything larger is rejected.
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare(m.nrows(), m.ncols()));
        }
        if m.nrows() == 0 {
            return Err(Error::InvalidParameter("matrix dimension must be at least 1".into()));
        }
        let scale = m.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
        let asym = max_asymmetry(&m);
        if asym > HERMITIAN_REPAIR_TOL * scale {
            return Err(Error::NotHermitian(asym));
        }
        Ok(Self::from_matrix_unchecked(m))
    }

    /// Symmetrizes without checking how far from Hermitian the input was.
    pub(crate) fn from_matrix_unchecked(m: DMatrix<Complex64>) -> Self {
        let sym = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        Self { m: sym }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { m: DMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { m: DMatrix::identity(dim, dim) }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = DMatrix::zeros(n, n);
        for (j, &v) in diag.iter().enumerate() {
            m[(j, j)] = Complex64::new(v, 0.0);
        }
        Self { m }
    }

    /// Builds a Hermitian matrix from row-major entries.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            let bad = rows.iter().map(Vec::len).find(|&l| l != n).unwrap_or(0);
            return Err(Error::NotSquare(n, bad));
        }
        Self::new(DMatrix::from_fn(n, n, |j, k| rows[j][k]))
    }

    pub fn pauli_x() -> Self {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        Self { m: DMatrix::from_row_slice(2, 2, &[o, l, l, o]) }
    }

    pub fn pauli_y() -> Self {
        let o = Complex64::new(0.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        Self { m: DMatrix::from_row_slice(2, 2, &[o, -i, i, o]) }
    }

    pub fn pauli_z() -> Self {
        Self::from_real_diagonal(&[1.0, -1.0])
    }

    /// The rank-one projector `psi psi^*` (the input is not normalized).
    pub fn projector(psi: &DVector<Complex64>) -> Self {
        Self::from_matrix_unchecked(psi * psi.adjoint())
    }

    /// Direct sum `self (+) zeros(extra)`.
    pub fn pad(&self, extra: usize) -> Self {
        let n = self.dim() + extra;
        let mut m = DMatrix::zeros(n, n);
        m.view_mut((0, 0), (self.dim(), self.dim())).copy_from(&self.m);
        Self { m }
    }

    /// Sample from the Gaussian unitary ensemble (unnormalized).
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let g = random_complex_matrix(dim, dim, rng);
        Self::from_matrix_unchecked(g)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.m
    }

    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        self.m[(j, k)]
    }

    pub fn trace(&self) -> f64 {
        self.m.diagonal().iter().map(|z| z.re).sum()
    }

    /// Hilbert-Schmidt norm `sqrt(tr(T^2))`.
    pub fn norm(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { m: &self.m * Complex64::new(s, 0.0) }
    }

    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale(1.0 / n))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.m - &other.m).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Unitary conjugation `U T U^*`.
    pub fn conjugate_by(&self, u: &DMatrix<Complex64>) -> Self {
        Self::from_matrix_unchecked(u * &self.m * u.adjoint())
    }

    /// Isometric coordinates in `R^{d^2}`: diagonal entries, then
    /// `sqrt(2) Re T_jk` and `sqrt(2) Im T_jk` for `j < k`.
    pub fn to_real_coords(&self) -> DVector<f64> {
        let d = self.dim();
        let mut v = DVector::zeros(d * d);
        let mut idx = 0;
        for j in 0..d {
            v[idx] = self.m[(j, j)].re;
            idx += 1;
        }
        let s = std::f64::consts::SQRT_2;
        for j in 0..d {
            for k in (j + 1)..d {
                let z = self.m[(j, k)];
                v[idx] = s * z.re;
                v[idx + 1] = s * z.im;
                idx += 2;
            }
        }
        v
    }

    /// Inverse of [`to_real_coords`](Self::to_real_coords).
    pub fn from_real_coords(dim: usize, v: &[f64]) -> Result<Self> {
        if v.len() != dim * dim {
            return Err(Error::LengthMismatch { expected: dim * dim, got: v.len() });
        }
        let mut m = DMatrix::zeros(dim, dim);
        let mut idx = 0;
        for j in 0..dim {
            m[(j, j)] = Complex64::new(v[idx], 0.0);
            idx += 1;
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for j in 0..dim {
            for k in (j + 1)..dim {
                let z = Complex64::new(h * v[idx], h * v[idx + 1]);
                m[(j, k)] = z;
                m[(k, j)] = z.conj();
                idx += 2;
            }
        }
        Ok(Self { m })
    }

    /// `(T + T^*)/2` of an arbitrary square block, i.e. the "real part".
    pub fn real_part(x: &DMatrix<Complex64>) -> Self {
        Self::from_matrix_unchecked(x.clone())
    }

    /// `(T - T^*)/(2i)`, the "imaginary part" of an arbitrary square block.
    pub fn imag_part(x: &DMatrix<Complex64>) -> Self {
        let m = (x - x.adjoint()) * Complex64::new(0.0, -0.5);
        Self::from_matrix_unchecked(m)
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: Self) -> HermitianMatrix {
        HermitianMatrix { m: &self.m + &rhs.m }
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: Self) -> HermitianMatrix {
        HermitianMatrix { m: &self.m - &rhs.m }
    }
}

impl Neg for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn neg(self) -> HermitianMatrix {
        HermitianMatrix { m: -&self.m }
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, rhs: f64) -> HermitianMatrix {
        self.scale(rhs)
    }
}

fn max_asymmetry(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for j in 0..n {
        for k in j..n {
            worst = worst.max((m[(j, k)] - m[(k, j)].conj()).norm());
        }
    }
    worst
}

pub(crate) fn random_complex_matrix<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Hilbert-Schmidt inner product `tr(S T)`.
pub fn hs_inner(s: &HermitianMatrix, t: &HermitianMatrix) -> Result<f64> {
    if s.dim() != t.dim() {
        return Err(Error::DimensionMismatch(s.dim(), t.dim()));
    }
    Ok(hs_inner_unchecked(s, t))
}

pub(crate) fn hs_inner_unchecked(s: &HermitianMatrix, t: &HermitianMatrix) -> f64 {
    // tr(ST) = sum_jk S_jk T_kj = sum_jk S_jk conj(T_jk) for Hermitian T.
    s.m.iter().zip(t.m.iter()).map(|(a, b)| (a * b.conj()).re).sum()
}

/// Eigendecomposition with eigenvalues sorted in decreasing order.
pub fn eigh(t: &HermitianMatrix) -> EigenSystem {
    let n = t.dim();
    let se = SymmetricEigen::new(t.m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[b].total_cmp(&se.eigenvalues[a]));
    let eigenvalues = order.iter().map(|&j| se.eigenvalues[j]).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |r, c| se.eigenvectors[(r, order[c])]);
    EigenSystem { eigenvalues, eigenvectors }
}

/// Eigenvalues only, in decreasing order.
pub fn eigenvalues(t: &HermitianMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = t.m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}

/// Counts of strictly positive, strictly negative and (numerically) zero eigenvalues.
///
/// An eigenvalue counts as nonzero when `|lambda| > tol * max(1, max_j |lambda_j|)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn rank(&self) -> usize {
        self.positive + self.negative
    }

    pub fn rank_pm(&self) -> usize {
        self.positive.min(self.negative)
    }
}

pub fn inertia_of_spectrum(spectrum: &[f64], tol: f64) -> Inertia {
    let scale = spectrum.iter().fold(1.0_f64, |a, l| a.max(l.abs()));
    let cut = tol * scale;
    let positive = spectrum.iter().filter(|&&l| l > cut).count();
    let negative = spectrum.iter().filter(|&&l| l < -cut).count();
    Inertia { positive, negative, zero: spectrum.len() - positive - negative }
}

pub fn inertia(t: &HermitianMatrix, tol: f64) -> Result<Inertia> {
    check_tol(tol)?;
    Ok(inertia_of_spectrum(&eigenvalues(t), tol))
}

/// Numerical rank: eigenvalues with `|lambda| > tol * max(1, max|lambda|)`.
pub fn rank_eps(t: &HermitianMatrix, tol: f64) -> Result<usize> {
    Ok(inertia(t, tol)?.rank())
}

/// `min(#positive, #negative)` eigenvalues, both counted strictly.
pub fn rank_pm(t: &HermitianMatrix, tol: f64) -> Result<usize> {
    Ok(inertia(t, tol)?.rank_pm())
}

/// Kronecker product with `(S (x) T)_{(j,m),(k,n)} = S_jk T_mn`.
pub fn tensor(s: &HermitianMatrix, t: &HermitianMatrix) -> HermitianMatrix {
    HermitianMatrix { m: s.m.kronecker(&t.m) }
}

/// Kronecker product of a list of operators, left to right.
pub fn tensor_all(parts: &[&HermitianMatrix]) -> Option<HermitianMatrix> {
    let (first, rest) = parts.split_first()?;
    Some(rest.iter().fold((*first).clone(), |acc, p| tensor(&acc, p)))
}

/// Largest deviation of `V^* V` from the identity.
pub fn gram_deviation(v: &DMatrix<Complex64>) -> f64 {
    let g = v.adjoint() * v;
    let n = g.nrows();
    let mut worst = 0.0_f64;
    for j in 0..n {
        for k in 0..n {
            let target = if j == k { 1.0 } else { 0.0 };
            worst = worst.max((g[(j, k)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Compression `V^* T V` onto the span of orthonormal columns `V`.
pub fn compress(t: &HermitianMatrix, basis: &DMatrix<Complex64>) -> Result<HermitianMatrix> {
    if basis.nrows() != t.dim() {
        return Err(Error::DimensionMismatch(basis.nrows(), t.dim()));
    }
    if basis.ncols() == 0 {
        return Err(Error::InvalidParameter("compression needs at least one column".into()));
    }
    let dev = gram_deviation(basis);
    if dev > ORTHONORMAL_TOL {
        return Err(Error::NotOrthonormal(dev));
    }
    Ok(HermitianMatrix::from_matrix_unchecked(basis.adjoint() * &t.m * basis))
}

/// Isometry whose columns are the standard basis vectors `e_j`, `j in coords`.
pub fn coordinate_isometry(dim: usize, coords: &[usize]) -> Result<DMatrix<Complex64>> {
    let mut v = DMatrix::zeros(dim, coords.len());
    for (c, &j) in coords.iter().enumerate() {
        if j >= dim {
            return Err(Error::InvalidParameter(format!("coordinate {j} out of range for dim {dim}")));
        }
        v[(j, c)] = Complex64::new(1.0, 0.0);
    }
    Ok(v)
}

/// Haar-distributed unitary via QR of a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = random_complex_matrix(dim, dim, rng);
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    // Fix the phases of R's diagonal so the distribution is Haar.
    let mut out = q;
    for j in 0..dim {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..dim {
            out[(i, j)] *= ph;
        }
    }
    out
}

/// Isometry built from the first `cols` columns of a Haar unitary.
pub fn random_isometry<R: Rng + ?Sized>(dim: usize, cols: usize, rng: &mut R) -> DMatrix<Complex64> {
    random_unitary(dim, rng).columns(0, cols).into_owned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn hs_inner_examples() {
        let i3 = HermitianMatrix::identity(3);
        assert!((hs_inner(&i3, &i3).unwrap() - 3.0).abs() < 1e-15);
        let xy = hs_inner(&HermitianMatrix::pauli_x(), &HermitianMatrix::pauli_y()).unwrap();
        assert!(xy.abs() < 1e-15);
        assert!(matches!(hs_inner(&i3, &HermitianMatrix::identity(2)), Err(Error::DimensionMismatch(3, 2))));
    }

    #[test]
    fn hs_inner_matches_double_loop() {
        let mut r = rng(11);
        let s = HermitianMatrix::random(4, &mut r);
        let t = HermitianMatrix::random(4, &mut r);
        let mut brute = Complex64::new(0.0, 0.0);
        for j in 0..4 {
            for k in 0..4 {
                brute += s.entry(j, k) * t.entry(k, j);
            }
        }
        let v = hs_inner(&s, &t).unwrap();
        assert!((v - brute.re).abs() < 1e-12);
        assert!(brute.im.abs() < 1e-12);
        assert!((v - hs_inner(&t, &s).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn real_coords_are_isometric() {
        let mut r = rng(3);
        let s = HermitianMatrix::random(5, &mut r);
        let t = HermitianMatrix::random(5, &mut r);
        let dot = s.to_real_coords().dot(&t.to_real_coords());
        assert!((dot - hs_inner(&s, &t).unwrap()).abs() < 1e-12);
        let back = HermitianMatrix::from_real_coords(5, s.to_real_coords().as_slice()).unwrap();
        assert!(back.max_abs_diff(&s) < 1e-14);
    }

    #[test]
    fn construction_repairs_or_rejects_asymmetry() {
        let mut m = DMatrix::from_element(2, 2, Complex64::new(0.0, 0.0));
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        m[(1, 0)] = Complex64::new(1.0 + 1e-11, 0.0);
        let h = HermitianMatrix::new(m.clone()).unwrap();
        assert_eq!(h.entry(0, 1), h.entry(1, 0).conj());
        m[(1, 0)] = Complex64::new(1.1, 0.0);
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn eigh_examples() {
        let e = eigh(&HermitianMatrix::from_real_diagonal(&[1.0, -2.0, 1.0]));
        for (a, b) in e.eigenvalues.iter().zip([1.0, 1.0, -2.0]) {
            assert!((a - b).abs() < 1e-14);
        }
        let e = eigh(&HermitianMatrix::pauli_x());
        assert!((e.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigh_random_is_orthonormal_and_reconstructs() {
        let mut r = rng(6);
        let t = HermitianMatrix::random(6, &mut r);
        let e = eigh(&t);
        assert!(gram_deviation(&e.eigenvectors) <= 1e-10);
        let err = (&e.reconstruct() - &t).norm();
        assert!(err <= 1e-9 * t.norm().max(1.0));
        assert!(e.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_eps(&HermitianMatrix::zeros(3), 1e-8).unwrap(), 0);
        assert_eq!(rank_eps(&HermitianMatrix::from_real_diagonal(&[1.0, 1.0, -2.0]), 1e-8).unwrap(), 3);
        assert!(matches!(rank_eps(&HermitianMatrix::zeros(2), 0.0), Err(Error::InvalidTolerance(_))));
        assert!(matches!(rank_pm(&HermitianMatrix::zeros(2), -1.0), Err(Error::InvalidTolerance(_))));
    }

    #[test]
    fn tensor_rank_is_multiplicative() {
        let mut r = rng(9);
        let g = random_complex_matrix(3, 2, &mut r);
        let m = HermitianMatrix::from_matrix_unchecked(&g * DMatrix::from_diagonal(&DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
        ])) * g.adjoint());
        let s = HermitianMatrix::from_real_diagonal(&[1.0, -1.0]);
        assert_eq!(rank_eps(&m, 1e-8).unwrap(), 2);
        assert_eq!(rank_eps(&tensor(&s, &m), 1e-8).unwrap(), 4);
    }

    #[test]
    fn rank_pm_examples() {
        let cases: [(&[f64], usize); 3] =
            [(&[1.0, 1.0, -1.0, -1.0], 2), (&[2.0, -1.0, -1.0], 1), (&[1.0, -1.0, 0.0], 1)];
        for (d, want) in cases {
            assert_eq!(rank_pm(&HermitianMatrix::from_real_diagonal(d), 1e-8).unwrap(), want);
        }
    }

    #[test]
    fn tensor_examples() {
        let i6 = tensor(&HermitianMatrix::identity(2), &HermitianMatrix::identity(3));
        assert!(i6.max_abs_diff(&HermitianMatrix::identity(6)) == 0.0);
        let k = tensor(
            &HermitianMatrix::from_real_diagonal(&[1.0, -1.0]),
            &HermitianMatrix::from_real_diagonal(&[1.0, 1.0, -2.0]),
        );
        let want = HermitianMatrix::from_real_diagonal(&[1.0, 1.0, -2.0, -1.0, -1.0, 2.0]);
        assert!(k.max_abs_diff(&want) == 0.0);

        let mut r = rng(2);
        let s = HermitianMatrix::random(2, &mut r);
        let t = HermitianMatrix::random(3, &mut r);
        assert!((tensor(&s, &t).trace() - s.trace() * t.trace()).abs() < 1e-12);
    }

    #[test]
    fn compress_examples() {
        let mut r = rng(5);
        let t = HermitianMatrix::random(8, &mut r);
        let v = coordinate_isometry(8, &[0, 1, 2, 3]).unwrap();
        let c = compress(&t, &v).unwrap();
        for j in 0..4 {
            for k in 0..4 {
                assert_eq!(c.entry(j, k), t.entry(j, k));
            }
        }

        let u = random_unitary(8, &mut r);
        let full = compress(&t, &u).unwrap();
        for (a, b) in eigenvalues(&full).iter().zip(eigenvalues(&t)) {
            assert!((a - b).abs() < 1e-10);
        }

        let mut bad = coordinate_isometry(3, &[0, 1]).unwrap();
        bad[(0, 1)] = Complex64::new(0.5, 0.0);
        assert!(matches!(
            compress(&HermitianMatrix::identity(3), &bad),
            Err(Error::NotOrthonormal(_))
        ));
    }

    #[test]
    fn compression_interlaces() {
        let mut r = rng(8);
        let t = HermitianMatrix::random(7, &mut r);
        let v = random_isometry(7, 3, &mut r);
        let lt = eigenvalues(&t);
        let lc = eigenvalues(&compress(&t, &v).unwrap());
        for j in 0..3 {
            assert!(lt[j] >= lc[j] - 1e-9);
            assert!(lc[j] >= lt[j + 7 - 3] - 1e-9);
        }
    }

    #[test]
    fn imag_and_real_parts_recombine() {
        let mut r = rng(4);
        let x = random_complex_matrix(3, 3, &mut r);
        let re = HermitianMatrix::real_part(&x);
        let im = HermitianMatrix::imag_part(&x);
        let back = re.as_matrix() + im.as_matrix() * Complex64::new(0.0, 1.0);
        assert!((back - x).iter().all(|z| z.norm() < 1e-14));
    }
}
