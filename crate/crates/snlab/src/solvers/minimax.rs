//! Rank-constrained Chebyshev (max-entry) approximation by alternating
//! per-row minimax fits.
//!
//! For operators from an l_1 space into an l_inf space the operator norm is
//! the largest absolute matrix entry, so the rank-n approximation problem
//! decouples row-wise once one factor is frozen: each row is a small linear
//! Chebyshev fit over the sample columns. Alternating those fits from a
//! truncated-SVD start converges quickly at the sizes used here.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::solvers::derive_rng;
use crate::solvers::nelder_mead::nelder_mead;

/// Minimize `max_l |t_l - u * b_l|` over a scalar `u` (convex piecewise
/// linear; ternary search on a bracket of crossing points).
fn scalar_minimax(targets: &[f64], basis: &[f64]) -> (f64, f64) {
    let g = |u: f64| {
        targets
            .iter()
            .zip(basis.iter())
            .fold(0.0f64, |m, (t, b)| m.max((t - u * b).abs()))
    };
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (t, b) in targets.iter().zip(basis.iter()) {
        if b.abs() > 1e-14 {
            let r = t / b;
            lo = lo.min(r);
            hi = hi.max(r);
        }
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, g(0.0));
    }
    if hi - lo < 1e-15 {
        return (lo, g(lo));
    }
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if g(m1) <= g(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let u = 0.5 * (lo + hi);
    (u, g(u))
}

/// Minimize `max_l |t_l - u . b_l|` over `u` in R^n (convex; Nelder-Mead
/// from a least-squares start is reliable for the n <= 4 used here).
fn multi_minimax(targets: &[f64], basis: &[Vec<f64>], n: usize) -> (Vec<f64>, f64) {
    // least-squares init
    let m = targets.len();
    let b = DMatrix::from_fn(m, n, |i, j| basis[i][j]);
    let y = nalgebra::DVector::from_column_slice(targets);
    let init = b
        .clone()
        .svd(true, true)
        .solve(&y, 1e-12)
        .map(|v| v.iter().copied().collect::<Vec<f64>>())
        .unwrap_or_else(|_| vec![0.0; n]);
    let f = |u: &[f64]| {
        targets
            .iter()
            .zip(basis.iter())
            .fold(0.0f64, |mx, (t, row)| {
                let dot: f64 = u.iter().zip(row.iter()).map(|(a, b)| a * b).sum();
                mx.max((t - dot).abs())
            })
    };
    let scale = targets.iter().fold(0.0f64, |m, t| m.max(t.abs())).max(1e-3);
    let (u, v) = nelder_mead(f, &init, 0.2 * scale, 400, 1e-13);
    (u, v)
}

fn fit_row(targets: &[f64], basis: &[Vec<f64>], n: usize) -> (Vec<f64>, f64) {
    if n == 1 {
        let b: Vec<f64> = basis.iter().map(|r| r[0]).collect();
        let (u, v) = scalar_minimax(targets, &b);
        (vec![u], v)
    } else {
        multi_minimax(targets, basis, n)
    }
}

fn max_abs_residual(t: &DMatrix<f64>, u: &DMatrix<f64>, v: &DMatrix<f64>) -> f64 {
    let a = u * v.transpose();
    (t - a).iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn truncated_svd_factors(t: &DMatrix<f64>, n: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let svd = t.clone().svd(true, true);
    let uu = svd.u.as_ref().unwrap();
    let vt = svd.v_t.as_ref().unwrap();
    let k = n.min(svd.singular_values.len());
    let mut u = DMatrix::zeros(t.nrows(), n);
    let mut v = DMatrix::zeros(t.ncols(), n);
    for j in 0..k {
        let s = svd.singular_values[j].max(0.0).sqrt();
        for i in 0..t.nrows() {
            u[(i, j)] = uu[(i, j)] * s;
        }
        for i in 0..t.ncols() {
            v[(i, j)] = vt[(j, i)] * s;
        }
    }
    (u, v)
}

/// Best-effort rank-`n` max-entry approximation of `t`. Returns the
/// approximant `A = U V^T` and the achieved `max |t - A|`.
pub fn low_rank_chebyshev(
    t: &DMatrix<f64>,
    n: usize,
    restarts: usize,
    seed: u64,
) -> (DMatrix<f64>, f64) {
    let (m, d) = (t.nrows(), t.ncols());
    if n == 0 {
        let value = t.iter().fold(0.0f64, |mx, x| mx.max(x.abs()));
        return (DMatrix::zeros(m, d), value);
    }
    if n >= m.min(d) {
        return (t.clone(), 0.0);
    }
    let scale = t.iter().fold(0.0f64, |mx, x| mx.max(x.abs())).max(1e-12);
    let mut starts: Vec<(DMatrix<f64>, DMatrix<f64>)> = vec![truncated_svd_factors(t, n)];
    // Flat start: lets the column fits balance entries symmetrically, which
    // is the optimum for sign-pattern residuals the SVD start misses.
    // (V is flattened because the sweep fits U rows against V first.)
    {
        let (u0, mut v0) = truncated_svd_factors(t, n);
        let s = scale.sqrt();
        for i in 0..d {
            v0[(i, 0)] = s;
        }
        starts.push((u0, v0));
    }
    let n_random = restarts.saturating_sub(1).min(6);
    for r in 0..n_random {
        let mut rng: ChaCha8Rng = derive_rng(seed, r as u64);
        let u = DMatrix::from_fn(m, n, |_, _| rng.gen_range(-1.0..1.0) * scale.sqrt());
        let v = DMatrix::from_fn(d, n, |_, _| rng.gen_range(-1.0..1.0) * scale.sqrt());
        starts.push((u, v));
    }

    let mut best_a = DMatrix::zeros(m, d);
    let mut best_v = t.iter().fold(0.0f64, |mx, x| mx.max(x.abs())); // A = 0 fallback
    for (mut u, mut v) in starts {
        let mut prev = f64::INFINITY;
        for _ in 0..60 {
            // rows of U against frozen V
            for k in 0..m {
                let targets: Vec<f64> = (0..d).map(|l| t[(k, l)]).collect();
                let basis: Vec<Vec<f64>> =
                    (0..d).map(|l| (0..n).map(|j| v[(l, j)]).collect()).collect();
                let (row, _) = fit_row(&targets, &basis, n);
                for j in 0..n {
                    u[(k, j)] = row[j];
                }
            }
            // rows of V against frozen U
            for l in 0..d {
                let targets: Vec<f64> = (0..m).map(|k| t[(k, l)]).collect();
                let basis: Vec<Vec<f64>> =
                    (0..m).map(|k| (0..n).map(|j| u[(k, j)]).collect()).collect();
                let (row, _) = fit_row(&targets, &basis, n);
                for j in 0..n {
                    v[(l, j)] = row[j];
                }
            }
            let val = max_abs_residual(t, &u, &v);
            if prev - val < 1e-13 * (1.0 + scale) {
                prev = val;
                break;
            }
            prev = val;
        }
        if prev < best_v {
            best_v = prev;
            best_a = &u * v.transpose();
        }
    }
    (best_a, best_v)
}
