//! Self-tests of the matrix facts the product arguments use: Cauchy
//! interlacing for compressions, the block unitaries that rotate off-diagonal
//! blocks onto the diagonal, and linear independence of the trigonometric
//! functions appearing in the rotated block.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{CheckResult, PropositionReport};
use crate::error::{Error, Result};
use crate::operator::{coordinate_isometry, compress, eigenvalues, rank_eps, rank_pm, HermitianMatrix};
use crate::span::OperatorSubspace;
use crate::states::{derive_seed, rng, Rng64};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterlacingReport {
    pub n: usize,
    pub k: usize,
    /// Smallest slack over `lambda_j(T) - mu_j` and `mu_j - lambda_{j+n-k}(T)`.
    pub min_slack: f64,
    pub pass: bool,
    pub rank_pm_full: usize,
    pub rank_pm_block: usize,
    /// Positive and negative eigenvalue counts of `T` dominate those of the block.
    pub rank_pm_monotone: bool,
}

/// Cauchy interlacing between `T` and its compression to the coordinates `block_cols`.
pub fn check_interlacing(t: &HermitianMatrix, block_cols: &[usize], tol: f64) -> Result<InterlacingReport> {
    let n = t.dim();
    let k = block_cols.len();
    let mut seen = vec![false; n];
    for &c in block_cols {
        if c >= n || std::mem::replace(&mut seen[c], true) {
            return Err(Error::InvalidParameter(format!("bad block column {c} for dimension {n}")));
        }
    }
    if k == 0 {
        return Err(Error::InvalidParameter("empty block".into()));
    }
    let w = coordinate_isometry(n, block_cols)?;
    let block = compress(t, &w)?;
    let lam = eigenvalues(t);
    let mu = eigenvalues(&block);
    let mut min_slack = f64::INFINITY;
    for j in 0..k {
        min_slack = min_slack.min(lam[j] - mu[j]).min(mu[j] - lam[j + n - k]);
    }
    // One absolute threshold for both spectra so that the counts are comparable.
    let thr = tol * lam.iter().fold(1.0_f64, |m, l| m.max(l.abs()));
    let count = |s: &[f64]| (s.iter().filter(|&&l| l > thr).count(), s.iter().filter(|&&l| l < -thr).count());
    let (pt, nt) = count(&lam);
    let (pb, nb) = count(&mu);
    Ok(InterlacingReport {
        n,
        k,
        min_slack,
        pass: min_slack >= -tol,
        rank_pm_full: pt.min(nt),
        rank_pm_block: pb.min(nb),
        rank_pm_monotone: pt >= pb && nt >= nb,
    })
}

/// Random draws of `(T, block)` with `T` of size `d_A d_B`, `d_A, d_B` in `{2, 3}`.
///
/// A third of the draws are low-rank with mixed signs so that the rank±
/// implication is exercised near zero eigenvalues; blocks alternate between
/// a contiguous diagonal block and a random coordinate subset.
pub fn interlacing_suite(draws: usize, seed: u64) -> Result<PropositionReport> {
    let results: Vec<InterlacingReport> = (0..draws)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(derive_seed(seed, i as u64));
            let da = r.random_range(2..=3);
            let db = r.random_range(2..=3);
            let n = da * db;
            let t = if i % 3 == 2 {
                let mut acc = HermitianMatrix::zeros(n);
                for s in [1.0, 1.0, -1.0, -1.0] {
                    let v = crate::states::random_pure_state(n, &mut r);
                    acc = &acc + &HermitianMatrix::projector(&v).scale(s * r.random_range(0.5..2.0));
                }
                acc
            } else {
                HermitianMatrix::random(n, &mut r)
            };
            let cols: Vec<usize> = if i % 2 == 0 {
                let b = r.random_range(0..da);
                (b * db..(b + 1) * db).collect()
            } else {
                rand::seq::index::sample(&mut r, n, db).into_vec()
            };
            check_interlacing(&t, &cols, 1e-9)
        })
        .collect::<Result<_>>()?;
    let slack = results.iter().map(|r| r.min_slack).fold(f64::INFINITY, f64::min);
    let broken = results.iter().filter(|r| !r.pass).count();
    let non_monotone = results.iter().filter(|r| !r.rank_pm_monotone).count();

    let fixed = check_interlacing(&HermitianMatrix::from_real_diagonal(&[4.0, 3.0, 2.0, 1.0]), &[0, 1], 1e-9)?;
    let checks = vec![
        CheckResult::new("interlacing_inequalities", broken == 0, slack + 1e-9),
        CheckResult::equal("rank_pm_monotone", non_monotone, 0),
        CheckResult::new("diag_4321_first_two", fixed.pass && fixed.min_slack == 0.0, fixed.min_slack),
    ];
    Ok(PropositionReport::finish("interlacing", json!({ "draws": draws }), seed, true, checks, vec![]))
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Block matrix from a square grid of equally sized blocks.
fn blocks(grid: &[Vec<DMatrix<Complex64>>]) -> DMatrix<Complex64> {
    let k = grid.len();
    let b = grid[0][0].nrows();
    let mut m = DMatrix::zeros(k * b, k * b);
    for (i, row) in grid.iter().enumerate() {
        for (j, blk) in row.iter().enumerate() {
            m.view_mut((i * b, j * b), (b, b)).copy_from(blk);
        }
    }
    m
}

fn id(b: usize) -> DMatrix<Complex64> {
    DMatrix::identity(b, b)
}

/// The `3 x 3` block unitary with phases `alpha`, `beta` and identity blocks of size `b`.
pub fn unitary_u3(alpha: f64, beta: f64, b: usize) -> DMatrix<Complex64> {
    let (ea, eb) = (Complex64::from_polar(1.0, alpha), Complex64::from_polar(1.0, beta));
    let (s2, s3) = (2.0_f64.sqrt(), 3.0_f64.sqrt());
    let i = id(b);
    let u = blocks(&[
        vec![&i * c(s2, 0.0), &i * (ea * s2), &i * (eb * s2)],
        vec![&i * c(s3, 0.0), DMatrix::zeros(b, b), &i * (-eb * s3)],
        vec![i.clone(), &i * (-ea * 2.0), &i * eb],
    ]);
    u / c(6.0_f64.sqrt(), 0.0)
}

fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    (u * u.adjoint() - DMatrix::identity(u.nrows(), u.ncols())).iter().fold(0.0, |m, z| m.max(z.norm()))
}

fn max_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().fold(0.0, |m, z| m.max(z.norm()))
}

fn gauss(r: &mut Rng64) -> f64 {
    r.sample(rand_distr::StandardNormal)
}

/// Random real combination of the basis.
fn real_element(sub: &OperatorSubspace, r: &mut Rng64) -> DMatrix<Complex64> {
    let coeffs: Vec<f64> = (0..sub.dim()).map(|_| gauss(r)).collect();
    sub.element(&coeffs).into_matrix()
}

/// Random complex combination of the basis (not Hermitian in general).
fn complex_element(sub: &OperatorSubspace, r: &mut Rng64) -> DMatrix<Complex64> {
    let a = real_element(sub, r);
    let b = real_element(sub, r);
    a + b * c(0.0, 1.0)
}

fn re_part(x: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (x + x.adjoint()) * c(0.5, 0.0)
}

fn im_part(x: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (x - x.adjoint()) * c(0.0, -0.5)
}

fn herm(m: DMatrix<Complex64>) -> Result<HermitianMatrix> {
    HermitianMatrix::new(m)
}

fn random_traceless_subspace(d: usize, k: usize, r: &mut Rng64) -> Result<OperatorSubspace> {
    let gens: Vec<HermitianMatrix> = (0..k)
        .map(|_| {
            let h = HermitianMatrix::random(d, r);
            &h - &HermitianMatrix::identity(d).scale(h.trace() / d as f64)
        })
        .collect();
    OperatorSubspace::span_of(d, &gens, 1e-10)
}

/// The grid on which the seven trigonometric functions are sampled.
pub const TRIG_GRID: [f64; 7] = [0.0, 0.9, 1.7, 2.6, 3.5, 4.3, 5.2];

fn trig_gram_rank() -> (usize, f64) {
    let mut f = DMatrix::<f64>::zeros(TRIG_GRID.len() * TRIG_GRID.len(), 7);
    let mut row = 0;
    for &a in &TRIG_GRID {
        for &b in &TRIG_GRID {
            let vals = [1.0, a.cos(), a.sin(), b.cos(), b.sin(), (b - a).cos(), (b - a).sin()];
            for (j, v) in vals.iter().enumerate() {
                f[(row, j)] = *v;
            }
            row += 1;
        }
    }
    let gram = f.transpose() * f;
    let ev = SymmetricEigen::new(gram).eigenvalues;
    let max = ev.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let min = ev.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
    let rank = ev.iter().filter(|x| x.abs() > 1e-10 * max).count();
    (rank, min / max)
}

/// Numerical checks of the block-unitary identities and the independence step.
pub fn check_proof_unitaries(seed: u64) -> Result<PropositionReport> {
    let mut r = rng(seed);
    let mut checks = Vec::new();

    // (a) The 3x3 block unitary, and the (1,1) block of U T U^* for structured T.
    let b = 3;
    let mut unitarity: f64 = unitarity_defect(&unitary_u3(0.3, 1.1, b));
    for _ in 0..20 {
        let (al, be) = (r.random_range(0.0..2.0 * PI), r.random_range(0.0..2.0 * PI));
        unitarity = unitarity.max(unitarity_defect(&unitary_u3(al, be, b)));
    }
    checks.push(CheckResult::at_most("u3_unitary", unitarity, 1e-12));

    let comp = random_traceless_subspace(b, 2, &mut r)?;
    let mut formula: f64 = 0.0;
    let mut in_comp: f64 = 0.0;
    for _ in 0..20 {
        let mut s = [gauss(&mut r), gauss(&mut r), 0.0];
        s[2] = -s[0] - s[1];
        let l = HermitianMatrix::random(b, &mut r).into_matrix();
        let rs: Vec<DMatrix<Complex64>> = (0..3).map(|_| real_element(&comp, &mut r)).collect();
        let mut grid: Vec<Vec<DMatrix<Complex64>>> = vec![vec![DMatrix::zeros(b, b); 3]; 3];
        for (j, (row, r_j)) in grid.iter_mut().zip(&rs).enumerate() {
            row[j] = &l * c(s[j], 0.0) + r_j;
        }
        for (j, k) in [(1, 0), (2, 0), (2, 1)] {
            let x = complex_element(&comp, &mut r);
            grid[k][j] = x.adjoint();
            grid[j][k] = x;
        }
        let t = blocks(&grid);
        let (al, be) = (r.random_range(0.0..2.0 * PI), r.random_range(0.0..2.0 * PI));
        let u = unitary_u3(al, be, b);
        let rotated = &u * &t * u.adjoint();
        let t11 = rotated.view((0, 0), (b, b)).into_owned();
        let trig = |x: &DMatrix<Complex64>, ang: f64| re_part(x) * c(ang.cos(), 0.0) - im_part(x) * c(ang.sin(), 0.0);
        let expected = (&rs[0] + &rs[1] + &rs[2]) * c(1.0 / 3.0, 0.0)
            + (trig(&grid[1][0], al) + trig(&grid[2][0], be) + trig(&grid[2][1], be - al)) * c(2.0 / 3.0, 0.0);
        formula = formula.max(max_diff(&t11, &expected));
        in_comp = in_comp.max(comp.residual(&herm(t11)?));
    }
    checks.push(CheckResult::at_most("t11_formula", formula, 1e-10));
    checks.push(CheckResult::at_most("t11_in_complement", in_comp, 1e-9));

    // (b) Off-diagonal block identities, on a generic and on a rank-deficient complement.
    let b = 4;
    let generic = random_traceless_subspace(b, 2, &mut r)?;
    let deficient = OperatorSubspace::span_of(b, &[HermitianMatrix::from_real_diagonal(&[1.0, 1.0, -1.0, -1.0])], 1e-10)?;
    let v = blocks(&[vec![id(b), id(b) * c(0.0, -1.0)], vec![id(b) * c(0.0, -1.0), id(b)]]) / c(2.0_f64.sqrt(), 0.0);
    let u2 = blocks(&[vec![id(b), -id(b)], vec![id(b), id(b)]]) / c(2.0_f64.sqrt(), 0.0);
    let z = DMatrix::<Complex64>::zeros(b, b);
    let (mut v_err, mut u_err) = (0.0_f64, 0.0_f64);
    let (mut rank_eq, mut rank_dom, mut pm_dom) = (true, true, true);
    for i in 0..40 {
        let sub = if i % 4 == 3 { &deficient } else { &generic };
        let x = complex_element(sub, &mut r);
        let (re, im) = (re_part(&x), im_part(&x));
        let tt = blocks(&[vec![z.clone(), x.clone()], vec![x.adjoint(), z.clone()]]);
        let t0 = blocks(&[vec![im.clone(), re.clone()], vec![re.clone(), -&im]]);
        let tp = blocks(&[vec![re.clone(), &im * c(0.0, 1.0)], vec![&im * c(0.0, -1.0), -&re]]);
        v_err = v_err.max(max_diff(&(&v * &t0 * v.adjoint()), &tt));
        u_err = u_err.max(max_diff(&(&u2 * &tp * u2.adjoint()), &tt));
        let (tt, t0, tp, re, im) = (herm(tt)?, herm(t0)?, herm(tp)?, herm(re)?, herm(im)?);
        let tol = 1e-9;
        rank_eq &= rank_eps(&tt, tol)? == rank_eps(&t0, tol)?;
        rank_dom &= rank_eps(&t0, tol)? >= rank_eps(&re, tol)?.max(rank_eps(&im, tol)?);
        pm_dom &= rank_pm(&tt, tol)? == rank_pm(&tp, tol)?
            && rank_pm(&tp, tol)? >= rank_pm(&re, tol)?
            && rank_pm(&t0, tol)? >= rank_pm(&im, tol)?;
    }
    checks.push(CheckResult::at_most("v_conjugation_identity", v_err, 1e-12));
    checks.push(CheckResult::at_most("u_conjugation_identity", u_err, 1e-12));
    checks.push(CheckResult::new("rank_preserved_by_v", rank_eq, 0.0));
    checks.push(CheckResult::new("rank_dominates_real_and_imaginary_parts", rank_dom, 0.0));
    checks.push(CheckResult::new("rank_pm_dominates_real_and_imaginary_parts", pm_dom, 0.0));

    // (c) Independence of 1, cos a, sin a, cos b, sin b, cos(b-a), sin(b-a).
    let (rank, conditioning) = trig_gram_rank();
    checks.push(CheckResult::new("trig_gram_rank_7", rank == 7, conditioning));

    Ok(PropositionReport::finish(
        "proof-unitaries",
        json!({ "u3_block": 3, "off_diagonal_block": 4, "trig_grid": TRIG_GRID }),
        seed,
        true,
        checks,
        vec![],
    ))
}
