//! Seeded sampling of states and helpers for working with density matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::operator::{eigenvalues, random_complex_matrix, HermitianMatrix};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent sub-seed for trial `index` of a run seeded with `seed` (splitmix64).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Normalized complex Gaussian vector; entangled with probability one on composite spaces.
pub fn random_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DVector<Complex64> {
    let v = DVector::from_fn(dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}

/// Full-rank density matrix `G G^* / tr(G G^*)` with Ginibre `G`.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianMatrix {
    let g = random_complex_matrix(dim, dim, rng);
    let m = HermitianMatrix::from_matrix_unchecked(&g * g.adjoint());
    let tr = m.trace();
    m.scale(1.0 / tr)
}

/// Standard basis vector `e_j`.
pub fn basis_state(dim: usize, j: usize) -> DVector<Complex64> {
    let mut v = DVector::zeros(dim);
    v[j] = Complex64::new(1.0, 0.0);
    v
}

pub fn pure_density(psi: &DVector<Complex64>) -> HermitianMatrix {
    HermitianMatrix::projector(psi)
}

/// `|<psi|phi>|^2` for unit vectors.
pub fn fidelity_pure(psi: &DVector<Complex64>, phi: &DVector<Complex64>) -> f64 {
    psi.dotc(phi).norm_sqr()
}

/// `<psi| T |psi>`.
pub fn expectation(t: &HermitianMatrix, psi: &DVector<Complex64>) -> f64 {
    psi.dotc(&(t.as_matrix() * psi)).re
}

/// Kronecker product of state vectors.
pub fn tensor_state(a: &DVector<Complex64>, b: &DVector<Complex64>) -> DVector<Complex64> {
    a.kronecker(b)
}

/// Fix the global phase so the largest-magnitude amplitude is real and positive.
pub fn fix_phase(psi: &DVector<Complex64>) -> DVector<Complex64> {
    let (_, big) = psi
        .iter()
        .enumerate()
        .fold((0usize, Complex64::new(0.0, 0.0)), |(bi, bz), (i, z)| {
            if z.norm() > bz.norm() {
                (i, *z)
            } else {
                (bi, bz)
            }
        });
    if big.norm() == 0.0 {
        return psi.clone();
    }
    let ph = big.conj() / big.norm();
    psi * ph
}

/// Checks PSD (min eigenvalue >= -1e-9 scaled) and unit trace within 1e-8.
pub fn validate_state(rho: &HermitianMatrix) -> Result<()> {
    let tr = rho.trace();
    if (tr - 1.0).abs() > 1e-8 {
        return Err(Error::NotAState(format!("trace {tr}")));
    }
    let ev = eigenvalues(rho);
    let min = ev.last().copied().unwrap_or(0.0);
    if min < -1e-9 * rho.norm().max(1.0) {
        return Err(Error::NotAState(format!("negative eigenvalue {min:.3e}")));
    }
    Ok(())
}

/// Rows of complex numbers as nested `Vec`s (row-major).
pub fn to_rows(m: &DMatrix<Complex64>) -> Vec<Vec<Complex64>> {
    (0..m.nrows()).map(|j| (0..m.ncols()).map(|k| m[(j, k)]).collect()).collect()
}
