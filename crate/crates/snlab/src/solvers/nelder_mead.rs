//! Derivative-free simplex minimization with a multi-restart driver.
//!
//! The inf-type searches (rank-constrained approximants, candidate
//! subspaces, functional kernels) all reduce to minimizing a nonsmooth
//! objective over a handful of real parameters. Nelder-Mead with seeded
//! restarts is robust enough at these sizes.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::solvers::derive_rng;

const ALPHA: f64 = 1.0; // reflection
const GAMMA: f64 = 2.0; // expansion
const RHO: f64 = 0.5; // contraction
const SIGMA: f64 = 0.5; // shrink

pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    scale: f64,
    max_iter: usize,
    ftol: f64,
) -> (Vec<f64>, f64) {
    let n = x0.len();
    if n == 0 {
        let v = f(x0);
        return (x0.to_vec(), v);
    }
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        let step = if p[i].abs() > 1e-12 {
            0.1 * p[i].abs().max(scale)
        } else {
            scale.max(1e-3)
        };
        p[i] += step;
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| f(p)).collect();

    for _ in 0..max_iter {
        // order
        let mut idx: Vec<usize> = (0..=n).collect();
        idx.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        simplex = idx.iter().map(|&i| simplex[i].clone()).collect();
        values = idx.iter().map(|&i| values[i]).collect();

        if (values[n] - values[0]).abs() <= ftol * (1.0 + values[0].abs()) {
            break;
        }

        // centroid of all but worst
        let mut centroid = vec![0.0; n];
        for p in simplex.iter().take(n) {
            for (c, v) in centroid.iter_mut().zip(p.iter()) {
                *c += v / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let reflect: Vec<f64> = centroid
            .iter()
            .zip(worst.iter())
            .map(|(c, w)| c + ALPHA * (c - w))
            .collect();
        let fr = f(&reflect);
        if fr < values[0] {
            let expand: Vec<f64> = centroid
                .iter()
                .zip(worst.iter())
                .map(|(c, w)| c + GAMMA * (c - w))
                .collect();
            let fe = f(&expand);
            if fe < fr {
                simplex[n] = expand;
                values[n] = fe;
            } else {
                simplex[n] = reflect;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = reflect;
            values[n] = fr;
        } else {
            let contract: Vec<f64> = if fr < values[n] {
                centroid
                    .iter()
                    .zip(reflect.iter())
                    .map(|(c, r)| c + RHO * (r - c))
                    .collect()
            } else {
                centroid
                    .iter()
                    .zip(worst.iter())
                    .map(|(c, w)| c + RHO * (w - c))
                    .collect()
            };
            let fc = f(&contract);
            if fc < values[n].min(fr) {
                simplex[n] = contract;
                values[n] = fc;
            } else {
                // shrink toward best
                let best = simplex[0].clone();
                for i in 1..=n {
                    for (v, b) in simplex[i].iter_mut().zip(best.iter()) {
                        *v = b + SIGMA * (*v - b);
                    }
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }
    let mut best = 0;
    for i in 1..=n {
        if values[i] < values[best] {
            best = i;
        }
    }
    (simplex[best].clone(), values[best])
}

/// Runs Nelder-Mead from each provided init, then from seeded random inits,
/// `restarts` runs in total. Returns the best point found.
pub fn multistart_min<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    dim: usize,
    inits: &[Vec<f64>],
    scale: f64,
    restarts: usize,
    iters: usize,
    seed: u64,
) -> (Vec<f64>, f64, u32) {
    let mut best_x = vec![0.0; dim];
    let mut best_v = f64::INFINITY;
    let total = restarts.max(inits.len()).max(1);
    for r in 0..total {
        let mut rng: ChaCha8Rng = derive_rng(seed, r as u64);
        let x0: Vec<f64> = if r < inits.len() {
            inits[r].clone()
        } else if r % 2 == 0 && best_v.is_finite() {
            // basin exploration around the incumbent
            best_x
                .iter()
                .map(|b| b + rng.gen_range(-0.3..0.3) * scale)
                .collect()
        } else {
            (0..dim).map(|_| rng.gen_range(-1.0..1.0) * scale).collect()
        };
        let (x, v) = nelder_mead(&mut f, &x0, scale.max(1e-3), iters, 1e-12);
        if v < best_v {
            best_v = v;
            best_x = x;
        }
    }
    // polish the incumbent with shrinking simplex scales
    for shrink in [0.1, 0.01, 1e-3] {
        let (x, v) = nelder_mead(&mut f, &best_x, (scale * shrink).max(1e-7), iters, 1e-14);
        if v < best_v {
            best_v = v;
            best_x = x;
        }
    }
    (best_x, best_v, total as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_a_quadratic() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + 2.0 * (x[1] + 0.5).powi(2);
        let (x, v) = nelder_mead(f, &[0.0, 0.0], 1.0, 500, 1e-14);
        assert!(v < 1e-10);
        assert!((x[0] - 1.0).abs() < 1e-5);
        assert!((x[1] + 0.5).abs() < 1e-5);
    }

    #[test]
    fn minimizes_a_nonsmooth_max() {
        let f = |x: &[f64]| (x[0] - 2.0).abs().max((x[1] - 1.0).abs());
        let (_, v, _) = multistart_min(f, 2, &[], 3.0, 16, 300, 7);
        assert!(v < 1e-6);
    }
}
