//! Vector norms, `p -> q` operator norms, distances to subspaces, and
//! quotient/restricted operator norms.
//!
//! Exact paths (closed forms and vertex enumeration) are used whenever they
//! apply; everything else is multi-restart local ascent reporting a
//! certified lower bound tagged `Heuristic`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::{Certificate, Direction, Estimate};
use crate::exponent::Exponent;
use crate::operator::Operator;
use crate::solvers::{derive_rng, lp, normal};
use crate::space::Subspace;

/// Restart/iteration budget for the search-based paths.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Budget {
    pub restarts: usize,
    pub iters: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            restarts: 64,
            iters: 500,
        }
    }
}

impl Budget {
    /// Reduced budget for inner evaluations inside an outer search.
    pub fn inner(&self) -> Budget {
        Budget {
            restarts: (self.restarts / 8).max(4),
            iters: (self.iters / 4).max(60),
        }
    }
}

/// Largest dimension for which sup over an l_1/l_inf ball is resolved by
/// vertex enumeration (2^dim sign patterns).
pub const VERTEX_ENUM_LIMIT: usize = 16;

pub fn vector_norm(x: &DVector<f64>, p: Exponent) -> f64 {
    match p {
        Exponent::Infinity => x.iter().fold(0.0f64, |m, v| m.max(v.abs())),
        Exponent::Finite(r) if r == num::rational::Ratio::from_integer(1) => {
            x.iter().map(|v| v.abs()).sum()
        }
        Exponent::Finite(r) if r == num::rational::Ratio::from_integer(2) => {
            x.iter().map(|v| v * v).sum::<f64>().sqrt()
        }
        Exponent::Finite(_) => {
            let pf = p.as_f64();
            let s: f64 = x.iter().map(|v| v.abs().powf(pf)).sum();
            s.powf(1.0 / pf)
        }
    }
}

/// The vector of unit `l_p` norm maximizing `a . x` (Hoelder witness).
/// Returns `e_1` when `a = 0`.
pub fn norming_vector(a: &DVector<f64>, p: Exponent) -> DVector<f64> {
    let n = a.len();
    let mut e1 = DVector::zeros(n);
    if n > 0 {
        e1[0] = 1.0;
    }
    if a.iter().all(|v| *v == 0.0) {
        return e1;
    }
    match p {
        Exponent::Finite(r) if r == num::rational::Ratio::from_integer(1) => {
            let (j, _) = a
                .iter()
                .enumerate()
                .max_by(|x, y| x.1.abs().partial_cmp(&y.1.abs()).unwrap())
                .unwrap();
            let mut x = DVector::zeros(n);
            x[j] = a[j].signum();
            x
        }
        Exponent::Infinity => DVector::from_iterator(
            n,
            a.iter().map(|v| if *v >= 0.0 { 1.0 } else { -1.0 }),
        ),
        _ => {
            // x_i proportional to sign(a_i) |a_i|^(p'-1), scaled to unit p-norm
            let pc = p.conjugate().as_f64();
            let mut x = DVector::from_iterator(
                n,
                a.iter().map(|v| v.signum() * v.abs().powf(pc - 1.0)),
            );
            let nx = vector_norm(&x, p);
            if nx > 0.0 {
                x /= nx;
            } else {
                return e1;
            }
            x
        }
    }
}

/// Iterates over sign vectors with first entry fixed to +1 (the objective is
/// symmetric under global sign flip).
fn for_each_sign_vector<F: FnMut(&DVector<f64>)>(dim: usize, mut f: F) {
    let mut s = DVector::zeros(dim);
    for bits in 0u64..(1u64 << (dim - 1)) {
        s[0] = 1.0;
        for i in 1..dim {
            s[i] = if bits >> (i - 1) & 1 == 1 { -1.0 } else { 1.0 };
        }
        f(&s);
    }
}

/// Visits every k-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_combination<F: FnMut(&[usize])>(n: usize, k: usize, mut f: F) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // advance the rightmost index that still has room
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] + 1 <= n - (k - i) {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Number of k x k systems needed to enumerate the vertices of the
/// polytope cut out by `m` pairs of constraints `+-(g_i . c) <= 1`:
/// C(m, k) * 2^(k-1), saturating.
fn vertex_system_count(m: usize, k: usize) -> usize {
    if k == 0 || k > m {
        return 0;
    }
    let mut binom: usize = 1;
    for i in 0..k {
        binom = match binom.checked_mul(m - i) {
            Some(v) => v / (i + 1),
            None => return usize::MAX,
        };
    }
    binom.saturating_mul(1usize << (k - 1).min(62))
}

/// Vertices of `{c : |g_i . c| <= 1 for all i}` (up to global sign): each
/// vertex saturates k linearly independent constraints, so solve every
/// k-subset with every sign pattern and keep the feasible solutions.
fn enumerate_section_vertices(
    normals: &[DVector<f64>],
    k: usize,
    feasible: &dyn Fn(&DVector<f64>) -> bool,
) -> Vec<DVector<f64>> {
    let mut verts = Vec::new();
    for_each_combination(normals.len(), k, |idx| {
        let g = DMatrix::from_fn(k, k, |r, c| normals[idx[r]][c]);
        let lu = g.clone().lu();
        for bits in 0u64..(1u64 << (k - 1)) {
            // fix the first sign: c and -c give the same image norm
            let rhs = DVector::from_fn(k, |r, _| {
                if r > 0 && bits >> (r - 1) & 1 == 1 {
                    -1.0
                } else {
                    1.0
                }
            });
            if let Some(c) = lu.solve(&rhs) {
                if (&g * &c - &rhs).amax() <= 1e-8 && feasible(&c) {
                    verts.push(c);
                }
            }
        }
    });
    verts
}

fn random_unit_vector(dim: usize, p: Exponent, rng: &mut rand_chacha::ChaCha8Rng) -> DVector<f64> {
    let mut x = DVector::from_iterator(dim, (0..dim).map(|_| normal(rng)));
    let n = vector_norm(&x, p);
    if n > 0.0 {
        x /= n;
    } else {
        x[0] = 1.0;
    }
    x
}

/// `p -> q` operator norm of a bare matrix.
pub(crate) fn operator_norm_matrix(
    a: &DMatrix<f64>,
    p: Exponent,
    q: Exponent,
    budget: &Budget,
    seed: u64,
) -> Estimate {
    let (m, d) = (a.nrows(), a.ncols());
    if a.iter().all(|v| *v == 0.0) {
        let mut e1 = DVector::zeros(d);
        if d > 0 {
            e1[0] = 1.0;
        }
        return Estimate::exact(0.0).with_certificate(Certificate::Witness(e1));
    }
    // p = 1: max over columns
    if p.is_one() {
        let mut best = (0usize, f64::NEG_INFINITY);
        for j in 0..d {
            let v = vector_norm(&a.column(j).into_owned(), q);
            if v > best.1 {
                best = (j, v);
            }
        }
        let mut x = DVector::zeros(d);
        x[best.0] = 1.0;
        return Estimate::exact(best.1).with_certificate(Certificate::Witness(x));
    }
    // q = inf: max over rows with the conjugate norm
    if q.is_infinite() {
        let pc = p.conjugate();
        let mut best = (0usize, f64::NEG_INFINITY);
        for i in 0..m {
            let v = vector_norm(&a.row(i).transpose(), pc);
            if v > best.1 {
                best = (i, v);
            }
        }
        let x = norming_vector(&a.row(best.0).transpose(), p);
        return Estimate::exact(best.1).with_certificate(Certificate::Witness(x));
    }
    // p = q = 2: largest singular value
    if p.is_two() && q.is_two() {
        let svd = a.clone().svd(false, true);
        let value = svd.singular_values.max();
        let vt = svd.v_t.as_ref().unwrap();
        let x = vt.row(0).transpose();
        return Estimate::exact(value).with_certificate(Certificate::Witness(x));
    }
    // q = 1 with small codomain: ||A||_{p->1} = max over signs s of
    // ||A^T s||_{p'} (vertex enumeration in the dual ball)
    if q.is_one() && m <= VERTEX_ENUM_LIMIT {
        let pc = p.conjugate();
        let mut best_val = f64::NEG_INFINITY;
        let mut best_s = DVector::zeros(m);
        for_each_sign_vector(m, |s| {
            let v = vector_norm(&(a.transpose() * s), pc);
            if v > best_val {
                best_val = v;
                best_s = s.clone();
            }
        });
        let x = norming_vector(&(a.transpose() * best_s), p);
        return Estimate::exact(best_val).with_certificate(Certificate::Witness(x));
    }
    // p = inf with small domain: maximum over ball vertices
    if p.is_infinite() && d <= VERTEX_ENUM_LIMIT {
        let mut best_val = f64::NEG_INFINITY;
        let mut best_s = DVector::zeros(d);
        for_each_sign_vector(d, |s| {
            let v = vector_norm(&(a * s), q);
            if v > best_val {
                best_val = v;
                best_s = s.clone();
            }
        });
        return Estimate::exact(best_val).with_certificate(Certificate::Witness(best_s));
    }
    // heuristic: multi-restart dual ascent; every evaluation is feasible, so
    // the result is a certified lower bound
    let qc = q.conjugate();
    let mut best_val = f64::NEG_INFINITY;
    let mut best_x = DVector::zeros(d);
    let consider = |x: &DVector<f64>, best_val: &mut f64, best_x: &mut DVector<f64>| {
        let nx = vector_norm(x, p);
        if nx <= 0.0 {
            return;
        }
        let v = vector_norm(&(a * x), q) / nx;
        if v > *best_val {
            *best_val = v;
            *best_x = x / nx;
        }
    };
    for j in 0..d {
        let mut e = DVector::zeros(d);
        e[j] = 1.0;
        consider(&e, &mut best_val, &mut best_x);
    }
    for r in 0..budget.restarts {
        let mut rng = derive_rng(seed, r as u64);
        let mut x = random_unit_vector(d, p, &mut rng);
        let mut stale = 0usize;
        for _ in 0..budget.iters {
            let u = norming_vector(&(a * &x), qc);
            let z = a.transpose() * u;
            let xn = norming_vector(&z, p);
            let prev = best_val;
            consider(&xn, &mut best_val, &mut best_x);
            x = xn;
            if best_val - prev < 1e-14 {
                stale += 1;
                if stale > 4 {
                    break;
                }
            } else {
                stale = 0;
            }
        }
    }
    Estimate {
        value: best_val.max(0.0),
        direction: Direction::Heuristic,
        certificate: Some(Certificate::Witness(best_x)),
        restarts_used: budget.restarts as u32,
        seed,
    }
}

/// Operator norm of `T`: sup of `||Tx||` over the domain unit ball.
pub fn operator_norm(t: &Operator, budget: &Budget, seed: u64) -> Estimate {
    operator_norm_matrix(
        &t.matrix,
        t.domain.exponent,
        t.codomain.exponent,
        budget,
        seed,
    )
}

/// Distance (with minimizing coefficients) from `y` to the column span of
/// `basis` in the `l_q` norm.
pub(crate) fn dist_with_coeffs(
    y: &DVector<f64>,
    basis: &DMatrix<f64>,
    q: Exponent,
) -> (f64, DVector<f64>) {
    let k = basis.ncols();
    if k == 0 {
        return (vector_norm(y, q), DVector::zeros(0));
    }
    if q.is_two() {
        let c = basis
            .clone()
            .svd(true, true)
            .solve(y, 1e-12)
            .unwrap_or_else(|_| DVector::zeros(k));
        let r = y - basis * &c;
        return (vector_norm(&r, q), c);
    }
    let rows: Vec<Vec<f64>> = (0..basis.nrows())
        .map(|i| (0..k).map(|j| basis[(i, j)]).collect())
        .collect();
    let yv: Vec<f64> = y.iter().copied().collect();
    if q.is_infinite() {
        let (v, c) = lp::chebyshev_fit(&yv, &rows);
        return (v, DVector::from_vec(c));
    }
    if q.is_one() {
        let (v, c) = lp::l1_fit(&yv, &rows);
        return (v, DVector::from_vec(c));
    }
    // general finite q > 1: smooth convex descent
    let c = descent_fit(y, basis, q.as_f64());
    let r = y - basis * &c;
    (vector_norm(&r, q), c)
}

/// Gradient descent with backtracking for `min_c ||y - B c||_q^q`, `q > 1`.
fn descent_fit(y: &DVector<f64>, basis: &DMatrix<f64>, q: f64) -> DVector<f64> {
    let k = basis.ncols();
    // least-squares warm start
    let mut c = basis
        .clone()
        .svd(true, true)
        .solve(y, 1e-12)
        .unwrap_or_else(|_| DVector::zeros(k));
    let obj = |c: &DVector<f64>| -> f64 {
        let r = y - basis * c;
        r.iter().map(|v| v.abs().powf(q)).sum()
    };
    let grad = |c: &DVector<f64>| -> DVector<f64> {
        let r = y - basis * c;
        let g = DVector::from_iterator(
            r.len(),
            r.iter().map(|v| -q * v.signum() * v.abs().powf(q - 1.0)),
        );
        basis.transpose() * g
    };
    let mut f = obj(&c);
    let mut step = 1.0;
    for _ in 0..10_000 {
        let g = grad(&c);
        let gn = g.norm();
        if gn < 1e-12 * (1.0 + f) {
            break;
        }
        // backtracking line search
        let mut accepted = false;
        for _ in 0..60 {
            let cand = &c - &g * step;
            let fc = obj(&cand);
            if fc < f - 0.25 * step * gn * gn {
                c = cand;
                f = fc;
                step *= 1.5;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted || step < 1e-16 {
            break;
        }
    }
    c
}

/// Distance from `y` to the subspace `G` in the `l_q` norm.
pub fn dist_to_subspace(y: &DVector<f64>, g: &Subspace, q: Exponent) -> Result<f64> {
    if y.len() != g.ambient.dim {
        return Err(Error::SpaceMismatch(format!(
            "vector length {} vs ambient dimension {}",
            y.len(),
            g.ambient.dim
        )));
    }
    Ok(dist_with_coeffs(y, g.basis(), q).0)
}

/// Independent iterative route for the same distance (smooth descent, with
/// log-sum-exp smoothing for `q = inf`). Used as a cross-check oracle.
pub fn dist_to_subspace_iterative(y: &DVector<f64>, g: &Subspace, q: Exponent) -> Result<f64> {
    if y.len() != g.ambient.dim {
        return Err(Error::SpaceMismatch("ambient mismatch".into()));
    }
    let basis = g.basis();
    if basis.ncols() == 0 {
        return Ok(vector_norm(y, q));
    }
    match q {
        Exponent::Infinity => {
            // softmax temperature schedule approaching the max norm
            let mut c = basis
                .clone()
                .svd(true, true)
                .solve(y, 1e-12)
                .unwrap_or_else(|_| DVector::zeros(basis.ncols()));
            for mu in [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6] {
                c = smoothed_chebyshev_step(y, basis, c, mu);
            }
            let r = y - basis * &c;
            Ok(vector_norm(&r, Exponent::Infinity))
        }
        _ => {
            let c = descent_fit(y, basis, q.as_f64().max(1.0 + 1e-9));
            let r = y - basis * &c;
            Ok(vector_norm(&r, q))
        }
    }
}

fn smoothed_chebyshev_step(
    y: &DVector<f64>,
    basis: &DMatrix<f64>,
    mut c: DVector<f64>,
    mu: f64,
) -> DVector<f64> {
    // minimize mu * log sum exp(|r_i| / mu) via gradient descent
    let obj = |c: &DVector<f64>| -> f64 {
        let r = y - basis * c;
        let mx = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let s: f64 = r
            .iter()
            .flat_map(|v| [(v - mx) / mu, (-v - mx) / mu])
            .map(f64::exp)
            .sum();
        mx + mu * s.ln()
    };
    let mut f = obj(&c);
    let mut step = mu;
    for _ in 0..2_000 {
        let r = y - basis * &c;
        let mx = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let wpos: Vec<f64> = r.iter().map(|v| ((v - mx) / mu).exp()).collect();
        let wneg: Vec<f64> = r.iter().map(|v| ((-v - mx) / mu).exp()).collect();
        let z: f64 = wpos.iter().sum::<f64>() + wneg.iter().sum::<f64>();
        let gr = DVector::from_iterator(
            r.len(),
            wpos.iter().zip(wneg.iter()).map(|(p, n)| (p - n) / z),
        );
        let g = -(basis.transpose() * gr);
        let gn = g.norm();
        if gn < 1e-12 {
            break;
        }
        let mut moved = false;
        for _ in 0..50 {
            let cand = &c - &g * step;
            let fc = obj(&cand);
            if fc < f {
                c = cand;
                f = fc;
                step *= 1.4;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if !moved || step < 1e-16 {
            break;
        }
    }
    c
}

/// `sup { dist(Tx, G) : ||x||_p <= 1 }` for a subspace `G` of the codomain.
pub fn quotient_operator_norm(
    t: &Operator,
    g: &Subspace,
    budget: &Budget,
    seed: u64,
) -> Result<Estimate> {
    if g.ambient != t.codomain {
        return Err(Error::SpaceMismatch(format!(
            "subspace ambient {} vs codomain {}",
            g.ambient, t.codomain
        )));
    }
    if g.k() == 0 {
        return Ok(operator_norm(t, budget, seed));
    }
    if g.k() == t.codomain.dim {
        return Ok(Estimate::exact(0.0));
    }
    let (p, q) = (t.domain.exponent, t.codomain.exponent);
    let a = &t.matrix;
    let basis = g.basis();
    if p.is_one() {
        let mut best = (0usize, f64::NEG_INFINITY);
        for j in 0..a.ncols() {
            let v = dist_with_coeffs(&a.column(j).into_owned(), basis, q).0;
            if v > best.1 {
                best = (j, v);
            }
        }
        let mut x = DVector::zeros(a.ncols());
        x[best.0] = 1.0;
        return Ok(Estimate::exact(best.1).with_certificate(Certificate::Witness(x)));
    }
    if p.is_two() && q.is_two() {
        let qmat = g.orthonormal_basis();
        let residual = a - &qmat * (qmat.transpose() * a);
        let svd = residual.clone().svd(false, true);
        let value = svd.singular_values.max();
        let x = svd.v_t.as_ref().unwrap().row(0).transpose();
        return Ok(Estimate::exact(value).with_certificate(Certificate::Witness(x)));
    }
    if p.is_infinite() && a.ncols() <= VERTEX_ENUM_LIMIT {
        let mut best_val = f64::NEG_INFINITY;
        let mut best_s = DVector::zeros(a.ncols());
        for_each_sign_vector(a.ncols(), |s| {
            let v = dist_with_coeffs(&(a * s), basis, q).0;
            if v > best_val {
                best_val = v;
                best_s = s.clone();
            }
        });
        return Ok(Estimate::exact(best_val).with_certificate(Certificate::Witness(best_s)));
    }
    // q in {1, inf}: dualize. ||QT|| = max ||T' u||_{p'} over the polytope
    // { ||u||_{q'} <= 1, u _|_ G }, attained at a vertex since the
    // objective is convex.
    if q.is_one() || q.is_infinite() {
        let m_dim = t.codomain.dim;
        let kc = m_dim - g.k();
        let qo = g.orthonormal_basis();
        let proj = DMatrix::identity(m_dim, m_dim) - &qo * qo.transpose();
        let eig = nalgebra::SymmetricEigen::new(proj);
        let mut cols: Vec<DVector<f64>> = Vec::new();
        for (i, ev) in eig.eigenvalues.iter().enumerate() {
            if *ev > 0.5 {
                cols.push(eig.eigenvectors.column(i).into_owned());
            }
        }
        if cols.len() == kc {
            let kmat = DMatrix::from_columns(&cols);
            let normals: Vec<DVector<f64>> = if q.is_infinite() {
                let mut v = Vec::new();
                if m_dim <= VERTEX_ENUM_LIMIT {
                    for_each_sign_vector(m_dim, |s| v.push(kmat.transpose() * s));
                }
                v
            } else {
                (0..m_dim).map(|i| kmat.row(i).transpose()).collect()
            };
            if !normals.is_empty() && vertex_system_count(normals.len(), kc) <= 500_000 {
                let qc = q.conjugate();
                let verts = enumerate_section_vertices(&normals, kc, &|c| {
                    vector_norm(&(&kmat * c), qc) <= 1.0 + 1e-9
                });
                if !verts.is_empty() {
                    let pc = p.conjugate();
                    let mut best = f64::NEG_INFINITY;
                    let mut best_u = DVector::zeros(m_dim);
                    for c in &verts {
                        let u = &kmat * c;
                        let v = vector_norm(&(a.transpose() * &u), pc);
                        if v > best {
                            best = v;
                            best_u = u;
                        }
                    }
                    let mut est = Estimate::exact(best.max(0.0));
                    est.certificate =
                        Some(Certificate::Functionals(DMatrix::from_columns(&[best_u]).transpose()));
                    return Ok(est);
                }
            }
        }
    }
    // heuristic ascent on the domain sphere
    let mut best_val = f64::NEG_INFINITY;
    let mut best_x = DVector::zeros(a.ncols());
    let consider = |x: &DVector<f64>, best_val: &mut f64, best_x: &mut DVector<f64>| {
        let nx = vector_norm(x, p);
        if nx <= 0.0 {
            return;
        }
        let xs = x / nx;
        let v = dist_with_coeffs(&(a * &xs), basis, q).0;
        if v > *best_val {
            *best_val = v;
            *best_x = xs;
        }
    };
    for j in 0..a.ncols() {
        let mut e = DVector::zeros(a.ncols());
        e[j] = 1.0;
        consider(&e, &mut best_val, &mut best_x);
    }
    let qc = q.conjugate();
    for r in 0..budget.restarts {
        let mut rng = derive_rng(seed, r as u64);
        let mut x = random_unit_vector(a.ncols(), p, &mut rng);
        let mut stale = 0usize;
        for _ in 0..budget.iters {
            let (_, c) = dist_with_coeffs(&(a * &x), basis, qc.conjugate());
            let resid = a * &x - basis * c;
            let u = norming_vector(&resid, qc);
            let z = a.transpose() * u;
            let xn = norming_vector(&z, p);
            let prev = best_val;
            consider(&xn, &mut best_val, &mut best_x);
            x = xn;
            if best_val - prev < 1e-14 {
                stale += 1;
                if stale > 4 {
                    break;
                }
            } else {
                stale = 0;
            }
        }
    }
    Ok(Estimate {
        value: best_val.max(0.0),
        direction: Direction::Heuristic,
        certificate: Some(Certificate::Witness(best_x)),
        restarts_used: budget.restarts as u32,
        seed,
    })
}

/// `sup { ||Tx|| : x in M, ||x||_p <= 1 }` for a subspace `M` of the domain.
pub fn restricted_operator_norm(
    t: &Operator,
    m: &Subspace,
    budget: &Budget,
    seed: u64,
) -> Result<Estimate> {
    if m.ambient != t.domain {
        return Err(Error::SpaceMismatch(format!(
            "subspace ambient {} vs domain {}",
            m.ambient, t.domain
        )));
    }
    if m.k() == 0 {
        return Ok(Estimate::exact(0.0));
    }
    if m.k() == t.domain.dim {
        return Ok(operator_norm(t, budget, seed));
    }
    let (p, q) = (t.domain.exponent, t.codomain.exponent);
    // p = 2: an orthonormal basis makes the coefficient ball the l_2 ball
    if p.is_two() {
        let qb = m.orthonormal_basis();
        let composite = &t.matrix * &qb;
        let est = operator_norm_matrix(&composite, Exponent::two(), q, budget, seed);
        return Ok(lift_witness(est, &qb));
    }
    if p.is_one() || p.is_infinite() {
        let b_rows: Vec<Vec<f64>> = (0..m.ambient.dim)
            .map(|i| (0..m.k()).map(|j| m.basis()[(i, j)]).collect())
            .collect();
        let tb = &t.matrix * m.basis();
        let section_max = |r: &[f64]| -> f64 {
            if p.is_one() {
                lp::max_linear_over_l1_section(r, &b_rows)
            } else {
                lp::max_linear_over_linf_section(r, &b_rows)
            }
        };
        if q.is_infinite() {
            let mut best = 0.0f64;
            for i in 0..tb.nrows() {
                let row: Vec<f64> = (0..tb.ncols()).map(|j| tb[(i, j)]).collect();
                best = best.max(section_max(&row));
                best = best.max(section_max(&row.iter().map(|v| -v).collect::<Vec<_>>()));
            }
            return Ok(Estimate::exact(best));
        }
        if q.is_one() && tb.nrows() <= 12 {
            let mut best = 0.0f64;
            for_each_sign_vector(tb.nrows(), |s| {
                let r: Vec<f64> = (0..tb.ncols())
                    .map(|j| (0..tb.nrows()).map(|i| s[i] * tb[(i, j)]).sum())
                    .collect();
                best = best.max(section_max(&r));
            });
            return Ok(Estimate::exact(best));
        }
        // any other q: the section of the unit ball is a polytope, and a
        // convex function attains its max over it at a vertex
        let k = m.k();
        let normals: Vec<DVector<f64>> = if p.is_infinite() {
            (0..m.ambient.dim)
                .map(|i| m.basis().row(i).transpose())
                .collect()
        } else {
            let mut v = Vec::new();
            if m.ambient.dim <= VERTEX_ENUM_LIMIT {
                for_each_sign_vector(m.ambient.dim, |s| {
                    v.push(m.basis().transpose() * s);
                });
            }
            v
        };
        if !normals.is_empty() && vertex_system_count(normals.len(), k) <= 500_000 {
            let basis = m.basis();
            let verts = enumerate_section_vertices(&normals, k, &|c| {
                vector_norm(&(basis * c), p) <= 1.0 + 1e-9
            });
            if !verts.is_empty() {
                let mut best = f64::NEG_INFINITY;
                let mut best_c = verts[0].clone();
                for c in &verts {
                    let v = vector_norm(&(&tb * c), q);
                    if v > best {
                        best = v;
                        best_c = c.clone();
                    }
                }
                let mut est = Estimate::exact(best.max(0.0));
                est.certificate = Some(Certificate::Witness(basis * best_c));
                return Ok(est);
            }
        }
    }
    // heuristic: normalized ascent on coefficients
    let basis = m.basis();
    let tb = &t.matrix * basis;
    let mut best_val = f64::NEG_INFINITY;
    let mut best_x = DVector::zeros(t.domain.dim);
    let consider = |c: &DVector<f64>, best_val: &mut f64, best_x: &mut DVector<f64>| {
        let x = basis * c;
        let nx = vector_norm(&x, p);
        if nx <= 0.0 {
            return;
        }
        let v = vector_norm(&(&t.matrix * &x), q) / nx;
        if v > *best_val {
            *best_val = v;
            *best_x = x / nx;
        }
    };
    let qc = q.conjugate();
    for r in 0..budget.restarts.max(1) {
        let mut rng = derive_rng(seed, r as u64);
        let mut c = DVector::from_iterator(m.k(), (0..m.k()).map(|_| normal(&mut rng)));
        let mut stale = 0usize;
        for _ in 0..budget.iters {
            let x = basis * &c;
            let nx = vector_norm(&x, p);
            if nx <= 0.0 {
                break;
            }
            let u = norming_vector(&(&tb * &c), qc);
            let g = tb.transpose() * u;
            // ascent step along the gradient of the numerator
            let gn = g.norm().max(1e-15);
            c += &g * (0.25 * c.norm().max(1.0) / gn);
            let cn = c.norm().max(1e-15);
            c /= cn;
            let prev = best_val;
            consider(&c, &mut best_val, &mut best_x);
            if best_val - prev < 1e-14 {
                stale += 1;
                if stale > 6 {
                    break;
                }
            } else {
                stale = 0;
            }
        }
    }
    Ok(Estimate {
        value: best_val.max(0.0),
        direction: Direction::Heuristic,
        certificate: Some(Certificate::Witness(best_x)),
        restarts_used: budget.restarts as u32,
        seed,
    })
}

fn lift_witness(est: Estimate, basis: &DMatrix<f64>) -> Estimate {
    let certificate = match est.certificate {
        Some(Certificate::Witness(c)) => Some(Certificate::Witness(basis * c)),
        other => other,
    };
    Estimate {
        certificate,
        ..est
    }
}
