//! Symmetrized approximation numbers over finite nets.
//!
//! The dual-ball and ball index sets are replaced by finite nets: the signed
//! dual basis plus quasi-uniform random points, with the achieved norming
//! resolution eta measured and propagated into every tolerance. The
//! symmetrized number tau_n is computed from the two-sided composite
//! `J_Y T Q_X : l_1^M -> l_inf^M`, whose operator norm (largest matrix
//! entry) is evaluated exactly, so only the inf over finite-rank
//! approximants remains a search.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimate::Estimate;
use crate::exponent::Exponent;
use crate::norms::{vector_norm, Budget};
use crate::operator::Operator;
use crate::snumbers::{approx_number, DualityReport, DualityRow};
use crate::solvers::{derive_rng, normal};
use crate::space::Space;

/// Number of random reference directions used when measuring the achieved
/// norming resolution of a net.
const ETA_REFERENCE_SAMPLES: usize = 512;

/// Achieved norming resolution of a net, measured two ways: against the
/// basis vectors alone (the invariant the construction guarantees) and
/// against a dense random reference grid (the honest resolution that feeds
/// tolerances).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct NetResolution {
    pub eta_basis: f64,
    pub eta: f64,
}

/// Finite stand-in for the dual unit ball: M functionals of dual norm <= 1
/// on `space`, stored as columns.
#[derive(Clone, Debug)]
pub struct FunctionalNet {
    pub space: Space,
    pub functionals: DMatrix<f64>,
    pub resolution: NetResolution,
}

/// Finite stand-in for the unit ball: M vectors of norm <= 1 in `space`,
/// stored as columns.
#[derive(Clone, Debug)]
pub struct VectorNet {
    pub space: Space,
    pub vectors: DMatrix<f64>,
    pub resolution: NetResolution,
}

fn unit_in(v: DVector<f64>, p: Exponent) -> DVector<f64> {
    let n = vector_norm(&v, p);
    if n > 0.0 {
        v / n
    } else {
        let mut e = DVector::zeros(v.len());
        e[0] = 1.0;
        e
    }
}

/// Columns: +-basis (normalized in `norm_exp`) followed by `m - 2*dim`
/// seeded random points of the `norm_exp` unit sphere.
fn net_columns(dim: usize, norm_exp: Exponent, m: usize, seed: u64) -> DMatrix<f64> {
    let mut cols = DMatrix::zeros(dim, m);
    for i in 0..dim {
        let mut e = DVector::zeros(dim);
        e[i] = 1.0;
        let e = unit_in(e, norm_exp);
        cols.set_column(2 * i, &e);
        cols.set_column(2 * i + 1, &(-&e));
    }
    for k in (2 * dim)..m {
        let mut rng = derive_rng(seed, k as u64);
        let v = DVector::from_iterator(dim, (0..dim).map(|_| normal(&mut rng)));
        cols.set_column(k, &unit_in(v, norm_exp));
    }
    cols
}

/// Norming resolution of `columns` (each of unit `dual_exp` norm) against
/// unit vectors of `primal_exp`: eta such that every reference direction x
/// has some column f with <x, f> >= 1 - eta.
fn measure_resolution(
    columns: &DMatrix<f64>,
    primal_exp: Exponent,
    seed: u64,
) -> NetResolution {
    let dim = columns.nrows();
    let shortfall = |x: &DVector<f64>| -> f64 {
        let mut best = f64::NEG_INFINITY;
        for k in 0..columns.ncols() {
            best = best.max(columns.column(k).dot(x));
        }
        1.0 - best
    };
    let mut eta_basis = 0.0f64;
    for i in 0..dim {
        let mut e = DVector::zeros(dim);
        e[i] = 1.0;
        eta_basis = eta_basis.max(shortfall(&unit_in(e, primal_exp)));
    }
    let mut eta = eta_basis;
    let mut rng = derive_rng(seed ^ 0x5eed_0e7a, 0);
    for _ in 0..ETA_REFERENCE_SAMPLES {
        let v = DVector::from_iterator(dim, (0..dim).map(|_| normal(&mut rng)));
        eta = eta.max(shortfall(&unit_in(v, primal_exp)));
    }
    NetResolution {
        eta_basis: eta_basis.max(0.0),
        eta: eta.max(0.0),
    }
}

/// Builds a functional net on `space`: signed dual basis plus random
/// dual-sphere points, deterministic in `seed`.
pub fn build_functional_net(space: Space, m: usize, seed: u64) -> Result<FunctionalNet> {
    if m < 2 * space.dim {
        return Err(Error::NetTooSmall {
            needed: 2 * space.dim,
            got: m,
        });
    }
    let dual_exp = space.exponent.conjugate();
    let functionals = net_columns(space.dim, dual_exp, m, seed);
    let resolution = measure_resolution(&functionals, space.exponent, seed);
    Ok(FunctionalNet {
        space,
        functionals,
        resolution,
    })
}

/// Builds a vector net on `space`: signed basis plus random sphere points.
pub fn build_vector_net(space: Space, m: usize, seed: u64) -> Result<VectorNet> {
    if m < 2 * space.dim {
        return Err(Error::NetTooSmall {
            needed: 2 * space.dim,
            got: m,
        });
    }
    let vectors = net_columns(space.dim, space.exponent, m, seed);
    // a vector net norms the dual: reference directions live in the dual ball
    let resolution = measure_resolution(&vectors, space.exponent.conjugate(), seed);
    Ok(VectorNet {
        space,
        vectors,
        resolution,
    })
}

/// The composite `J_Y T : domain -> l_inf^M` with rows `<T., f_k>`.
pub fn embed_j(t: &Operator, net: &FunctionalNet) -> Result<Operator> {
    if net.space != t.codomain {
        return Err(Error::SpaceMismatch(format!(
            "net space {} vs codomain {}",
            net.space, t.codomain
        )));
    }
    let m = net.functionals.ncols();
    let matrix = net.functionals.transpose() * &t.matrix;
    Operator::new(matrix, t.domain, Space::new(m, Exponent::infinity())?)
}

/// The composite `T Q_X : l_1^M -> codomain` with columns `T v_k`.
pub fn lift_q(t: &Operator, net: &VectorNet) -> Result<Operator> {
    if net.space != t.domain {
        return Err(Error::SpaceMismatch(format!(
            "net space {} vs domain {}",
            net.space, t.domain
        )));
    }
    let m = net.vectors.ncols();
    let matrix = &t.matrix * &net.vectors;
    Operator::new(matrix, Space::new(m, Exponent::one())?, t.codomain)
}

/// A symmetrized approximation number together with the net resolutions
/// that bound its discretization error.
#[derive(Clone, Debug, Serialize)]
pub struct TauEstimate {
    pub estimate: Estimate,
    pub functional_net: NetResolution,
    pub vector_net: NetResolution,
    pub m: usize,
}

/// `tau_n(T)` realized as the approximation number of the two-sided
/// composite `J_Y T Q_X : l_1^M -> l_inf^M` over independently seeded nets.
pub fn symmetrized_approx_number(
    t: &Operator,
    n: usize,
    m: usize,
    budget: &Budget,
    seed: u64,
) -> Result<TauEstimate> {
    let needed = 2 * t.domain.dim.max(t.codomain.dim);
    if m < needed {
        return Err(Error::NetTooSmall { needed, got: m });
    }
    let fnet = build_functional_net(t.codomain, m, seed ^ 0xf0)?;
    let vnet = build_vector_net(t.domain, m, seed ^ 0x0f)?;
    let embedded = embed_j(t, &fnet)?;
    let composite = lift_q(&embedded, &vnet)?;
    let estimate = approx_number(&composite, n, budget, seed);
    Ok(TauEstimate {
        estimate,
        functional_net: fnet.resolution,
        vector_net: vnet.resolution,
        m,
    })
}

/// Checks `tau_n(T) = tau_n(T*)` with independently built nets. The
/// comparison tolerance callers should use scales as `2*eta*||T|| + slack`.
pub fn tau_duality_gap(
    t: &Operator,
    n_max: usize,
    m: usize,
    budget: &Budget,
    seed: u64,
) -> Result<(DualityReport, NetResolution)> {
    let adj = t.adjoint();
    let dual_seed = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(3);
    let mut rows = Vec::with_capacity(n_max + 1);
    let mut worst = NetResolution {
        eta_basis: 0.0,
        eta: 0.0,
    };
    let mut running_primal = f64::INFINITY;
    let mut running_dual = f64::INFINITY;
    for n in 0..=n_max {
        let a = symmetrized_approx_number(t, n, m, budget, seed.wrapping_add(n as u64))?;
        let b = symmetrized_approx_number(&adj, n, m, budget, dual_seed.wrapping_add(n as u64))?;
        for r in [
            a.functional_net,
            a.vector_net,
            b.functional_net,
            b.vector_net,
        ] {
            worst.eta_basis = worst.eta_basis.max(r.eta_basis);
            worst.eta = worst.eta.max(r.eta);
        }
        // upper-bound searches: apply the non-increasing repair per side
        running_primal = running_primal.min(a.estimate.value);
        running_dual = running_dual.min(b.estimate.value);
        let gap = (running_primal - running_dual).abs()
            / 1.0f64.max(running_primal.abs()).max(running_dual.abs());
        rows.push(DualityRow {
            n,
            primal: running_primal,
            dual: running_dual,
            gap,
            primal_direction: a.estimate.direction,
            dual_direction: b.estimate.direction,
        });
    }
    let max_gap = rows.iter().fold(0.0f64, |mx, r| mx.max(r.gap));
    let exact = false;
    Ok((
        DualityReport {
            relation: "tau_duality".into(),
            rows,
            max_gap,
            exact,
        },
        worst,
    ))
}
