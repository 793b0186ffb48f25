//! Exhaustive grid oracle for subspaces of dimension at most three.
//!
//! The unit sphere of coordinates is a point pair, a circle, or a 2-sphere.
//! Every grid point is evaluated directly; in addition each discrete local
//! minimum of every tail-energy objective is refined by a derivative-free
//! local search (golden section on the circle, compass search on the sphere)
//! so that rank drops at isolated points between grid nodes are resolved.
//! The answer is only as good as the grid resolution and is meant as an
//! independent cross-check of [`super::search`].

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::operator::eigenvalues;
use crate::span::OperatorSubspace;

use super::search::{measure, tail_energy, RankCertificate, RankTarget, SearchMethod};

struct Candidate {
    coeffs: Vec<f64>,
    measure: usize,
    energy: f64,
}

fn circle_point(theta: f64) -> Vec<f64> {
    vec![theta.cos(), theta.sin()]
}

fn sphere_point(theta: f64, phi: f64) -> Vec<f64> {
    vec![theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

/// Objective indices `r` that can discriminate measures for this target.
fn objective_range(d: usize, target: RankTarget) -> std::ops::Range<usize> {
    match target {
        RankTarget::Rank => 1..d,
        RankTarget::RankPm => 0..d / 2,
    }
}

fn golden_section<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let g = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo < 1e-15 {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        x1
    } else {
        x2
    }
}

fn compass_search<F: Fn(f64, f64) -> f64>(f: F, mut x: f64, mut y: f64, mut h: f64) -> (f64, f64) {
    let mut fx = f(x, y);
    let mut evals = 0;
    while h > 1e-15 && evals < 4000 && fx > 0.0 {
        let mut moved = false;
        for (dx, dy) in [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)] {
            let v = f(x + dx, y + dy);
            evals += 1;
            if v < fx {
                x += dx;
                y += dy;
                fx = v;
                moved = true;
                break;
            }
        }
        if !moved {
            h *= 0.5;
        }
    }
    (x, y)
}

/// Grid-enumeration minimum of rank (or rank±) over the unit sphere of `sub`.
pub fn brute_force_min_rank(
    sub: &OperatorSubspace,
    grid_points_per_angle: usize,
    target: RankTarget,
    tol: f64,
) -> Result<RankCertificate> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidTolerance(tol));
    }
    if sub.dim() > 3 {
        return Err(Error::OracleDimension(sub.dim()));
    }
    if sub.dim() >= 2 && grid_points_per_angle < 4 {
        return Err(Error::InvalidParameter("grid needs at least 4 points per angle".into()));
    }
    let d = sub.ambient_dim();
    let eval = |c: &[f64]| -> Vec<f64> { eigenvalues(&sub.element(c)) };
    let mut cands: Vec<Candidate> = Vec::new();
    let mut push = |coeffs: Vec<f64>, spectrum: &[f64]| {
        let m = measure(spectrum, target, tol);
        let energy = objective_range(d, target)
            .find(|&r| r >= m)
            .map(|r| tail_energy(spectrum, target, r))
            .unwrap_or(0.0);
        cands.push(Candidate { coeffs, measure: m, energy });
    };

    let trials;
    match sub.dim() {
        0 => {
            return Ok(RankCertificate {
                target,
                min_found: None,
                witness_coeffs: vec![],
                method: SearchMethod::Exhaustive,
                trials: 0,
                tol,
                searched_up_to: 0,
                best_objective: 0.0,
                borderline: false,
            })
        }
        1 => {
            let c = vec![1.0];
            let s = eval(&c);
            push(c, &s);
            trials = 1;
        }
        2 => {
            let n = grid_points_per_angle;
            let step = 2.0 * PI / n as f64;
            let thetas: Vec<f64> = (0..n).map(|i| i as f64 * step).collect();
            let spectra: Vec<Vec<f64>> = thetas.iter().map(|&t| eval(&circle_point(t))).collect();
            for (t, s) in thetas.iter().zip(&spectra) {
                push(circle_point(*t), s);
            }
            for r in objective_range(d, target) {
                let vals: Vec<f64> = spectra.iter().map(|s| tail_energy(s, target, r)).collect();
                for i in 0..n {
                    let (prev, next) = (vals[(i + n - 1) % n], vals[(i + 1) % n]);
                    if vals[i] > 0.0 && vals[i] <= prev && vals[i] <= next {
                        let f = |t: f64| tail_energy(&eval(&circle_point(t)), target, r);
                        let t = golden_section(f, thetas[i] - step, thetas[i] + step);
                        let c = circle_point(t);
                        let s = eval(&c);
                        push(c, &s);
                    }
                }
            }
            trials = n;
        }
        _ => {
            let n = grid_points_per_angle;
            let dt = PI / (n - 1) as f64;
            let dp = 2.0 * PI / n as f64;
            let grid: Vec<(f64, f64)> = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i as f64 * dt, j as f64 * dp)))
                .collect();
            let spectra: Vec<Vec<f64>> = grid.iter().map(|&(t, p)| eval(&sphere_point(t, p))).collect();
            for (&(t, p), s) in grid.iter().zip(&spectra) {
                push(sphere_point(t, p), s);
            }
            for r in objective_range(d, target) {
                let vals: Vec<f64> = spectra.iter().map(|s| tail_energy(s, target, r)).collect();
                for i in 0..n {
                    for j in 0..n {
                        let v = vals[i * n + j];
                        let mut is_min = v > 0.0;
                        for (di, dj) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)] {
                            let ii = i as i64 + di;
                            if ii < 0 || ii >= n as i64 {
                                continue;
                            }
                            let jj = (j as i64 + dj).rem_euclid(n as i64);
                            if vals[ii as usize * n + jj as usize] < v {
                                is_min = false;
                                break;
                            }
                        }
                        if is_min {
                            let f = |t: f64, p: f64| tail_energy(&eval(&sphere_point(t, p)), target, r);
                            let (t, p) = compass_search(f, grid[i * n + j].0, grid[i * n + j].1, dt.min(dp));
                            let c = sphere_point(t, p);
                            let s = eval(&c);
                            push(c, &s);
                        }
                    }
                }
            }
            trials = n * n;
        }
    }

    // Smallest measure, then smallest residual energy, then first found.
    let best = cands
        .into_iter()
        .reduce(|a, b| {
            if (b.measure, b.energy) < (a.measure, a.energy) {
                b
            } else {
                a
            }
        })
        .expect("at least one candidate");
    let n: f64 = best.coeffs.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(RankCertificate {
        target,
        min_found: Some(best.measure),
        witness_coeffs: best.coeffs.iter().map(|x| x / n).collect(),
        method: SearchMethod::Exhaustive,
        trials,
        tol,
        searched_up_to: objective_range(d, target).end.saturating_sub(1),
        best_objective: best.energy,
        borderline: false,
    })
}
