//! Named verification suites behind `verify <suite>`: each one anchors a
//! duality theorem or axiom family and runs it over a seeded corpus.

use std::str::FromStr;

use rayon::prelude::*;

use crate::config::SchemeSpec;
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::norms::{operator_norm, Budget};
use crate::operator::Operator;
use crate::report::{CaseOutcome, SuiteOutcome};
use crate::schemes::{
    check_scheme_axioms, gen_kolmogorov_op, q_compactness_profile, scheme_duality_gap,
    ProfileVerdict, Scheme,
};
use crate::snumbers::{approx_number, duality_gap, kolmogorov_number, SNumberKind};
use crate::space::Space;
use crate::symmetrized::tau_duality_gap;
use crate::zoo::{make_random, make_truncation_family, OperatorSpec, WeightSeq};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Properties,
    Hutton,
    KolmogorovDual,
    GelfandDual,
    TauDual,
    SchemeAxioms,
    SchemeDual,
    Profile,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Properties => "properties",
            Suite::Hutton => "hutton",
            Suite::KolmogorovDual => "kolmogorov-dual",
            Suite::GelfandDual => "gelfand-dual",
            Suite::TauDual => "tau-dual",
            Suite::SchemeAxioms => "scheme-axioms",
            Suite::SchemeDual => "scheme-dual",
            Suite::Profile => "profile",
        }
    }

    pub fn all() -> [Suite; 8] {
        [
            Suite::Properties,
            Suite::Hutton,
            Suite::KolmogorovDual,
            Suite::GelfandDual,
            Suite::TauDual,
            Suite::SchemeAxioms,
            Suite::SchemeDual,
            Suite::Profile,
        ]
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::all()
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown suite '{s}'")))
    }
}

fn l2(dim: usize) -> Space {
    Space::new(dim, Exponent::two()).unwrap()
}

fn random_l2(dim: usize, seed: u64) -> Operator {
    make_random(dim, dim, Exponent::two(), Exponent::two(), seed, 1.0).unwrap()
}

fn case(name: String, pass: bool, detail: String) -> CaseOutcome {
    CaseOutcome { name, pass, detail }
}

fn outcome(suite: Suite, cases: Vec<CaseOutcome>) -> SuiteOutcome {
    let pass = cases.iter().all(|c| c.pass);
    SuiteOutcome {
        suite: suite.name().to_string(),
        cases,
        pass,
    }
}

const EXACT_TOL: f64 = 1e-9;
const HEURISTIC_TOL: f64 = 5e-3;

/// Approximation-number properties (1)-(5) on random Euclidean pairs:
/// norm anchor, monotonicity, subadditivity across index splits,
/// homogeneity, and the Lipschitz bound in the operator.
fn run_properties(seed: u64, budget: &Budget, trials: usize) -> SuiteOutcome {
    let n_max = 3usize;
    let cases: Vec<CaseOutcome> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let dim = 2 + (k % 3);
            let s_op = random_l2(dim, seed.wrapping_add(2 * k as u64));
            let t_op = random_l2(dim, seed.wrapping_add(2 * k as u64 + 1));
            let alpha = |op: &Operator| -> Vec<f64> {
                (0..=n_max)
                    .map(|n| approx_number(op, n, budget, seed).value)
                    .collect()
            };
            let a_s = alpha(&s_op);
            let a_t = alpha(&t_op);
            let norm_t = operator_norm(&t_op, budget, seed).value;
            let mut fails = Vec::new();
            if (a_t[0] - norm_t).abs() > EXACT_TOL {
                fails.push(format!("alpha_0 != norm: {} vs {norm_t}", a_t[0]));
            }
            for n in 0..n_max {
                if a_t[n] < a_t[n + 1] - EXACT_TOL {
                    fails.push(format!("not monotone at n={n}"));
                }
            }
            let sum_op = Operator::new(
                &s_op.matrix + &t_op.matrix,
                s_op.domain,
                s_op.codomain,
            )
            .unwrap();
            let a_sum = alpha(&sum_op);
            for n in 0..=n_max {
                for k_idx in 0..=n {
                    let j = n - k_idx;
                    if a_sum[n] > a_s[k_idx] + a_t[j] + EXACT_TOL {
                        fails.push(format!("subadditivity fails at n={n} split {k_idx}+{j}"));
                    }
                }
            }
            for lambda in [-2.0f64, 0.5] {
                let scaled = t_op.scaled(lambda);
                let a_sc = alpha(&scaled);
                for n in 0..=n_max {
                    if (a_sc[n] - lambda.abs() * a_t[n]).abs() > EXACT_TOL {
                        fails.push(format!("homogeneity fails at n={n}, lambda={lambda}"));
                    }
                }
            }
            let diff = Operator::new(
                &s_op.matrix - &t_op.matrix,
                s_op.domain,
                s_op.codomain,
            )
            .unwrap();
            let dist = operator_norm(&diff, budget, seed).value;
            for n in 0..=n_max {
                if (a_s[n] - a_t[n]).abs() > dist + EXACT_TOL {
                    fails.push(format!("lipschitz fails at n={n}"));
                }
            }
            case(
                format!("pair_{k}_dim{dim}"),
                fails.is_empty(),
                if fails.is_empty() {
                    "ok".into()
                } else {
                    fails.join("; ")
                },
            )
        })
        .collect();
    outcome(Suite::Properties, cases)
}

/// alpha_n(T) = alpha_n(T*): exact on the Euclidean corpus, heuristic on a
/// small {1,2,inf}^2 grid.
fn run_hutton(seed: u64, budget: &Budget) -> Result<SuiteOutcome> {
    let mut cases: Vec<CaseOutcome> = (0..50usize)
        .into_par_iter()
        .map(|k| {
            let dim = 2 + (k % 4);
            let t = random_l2(dim, seed.wrapping_add(k as u64));
            let reports = duality_gap(&t, SNumberKind::Alpha, 3, budget, seed.wrapping_add(k as u64))?;
            let gap = reports[0].max_gap;
            Ok(case(
                format!("euclidean_{k}"),
                gap <= EXACT_TOL,
                format!("max relative gap {gap:.3e}"),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let grid = [Exponent::one(), Exponent::two(), Exponent::infinity()];
    let mut grid_cases: Vec<CaseOutcome> = Vec::new();
    for (pi, p) in grid.iter().enumerate() {
        for (qi, q) in grid.iter().enumerate() {
            let trials: Vec<CaseOutcome> = (0..3usize)
                .into_par_iter()
                .map(|k| {
                    let s = seed.wrapping_add((100 * pi + 10 * qi + k) as u64);
                    let t = make_random(3, 3, *p, *q, s, 1.0)?;
                    let reports = duality_gap(&t, SNumberKind::Alpha, 1, budget, s)?;
                    let gap = reports[0].max_gap;
                    Ok(case(
                        format!("grid_p{p}_q{q}_{k}"),
                        gap <= HEURISTIC_TOL,
                        format!("max relative gap {gap:.3e}"),
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            grid_cases.extend(trials);
        }
    }
    cases.extend(grid_cases);
    Ok(outcome(Suite::Hutton, cases))
}

fn run_pair_duality(suite: Suite, kind: SNumberKind, seed: u64, budget: &Budget) -> Result<SuiteOutcome> {
    // exact Euclidean corpus
    let mut cases: Vec<CaseOutcome> = (0..20usize)
        .into_par_iter()
        .map(|k| {
            let dim = 2 + (k % 3);
            let t = random_l2(dim, seed.wrapping_add(k as u64));
            let reports = duality_gap(&t, kind, 2, budget, seed.wrapping_add(k as u64))?;
            let worst = reports.iter().fold(0.0f64, |m, r| m.max(r.max_gap));
            Ok(case(
                format!("euclidean_{k}"),
                worst <= EXACT_TOL,
                format!("max relative gap {worst:.3e}"),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    // heuristic corpus on l_1 -> l_inf
    let extremal: Vec<CaseOutcome> = (0..5usize)
        .into_par_iter()
        .map(|k| {
            let s = seed.wrapping_add(500 + k as u64);
            let t = make_random(3, 3, Exponent::one(), Exponent::infinity(), s, 1.0)?;
            let reports = duality_gap(&t, kind, 2, budget, s)?;
            let worst = reports.iter().fold(0.0f64, |m, r| m.max(r.max_gap));
            Ok(case(
                format!("l1_linf_{k}"),
                worst <= HEURISTIC_TOL,
                format!("max relative gap {worst:.3e}"),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    cases.extend(extremal);
    Ok(outcome(suite, cases))
}

fn run_tau(seed: u64, budget: &Budget) -> Result<SuiteOutcome> {
    let cases: Vec<CaseOutcome> = (0..10usize)
        .into_par_iter()
        .map(|k| {
            let s = seed.wrapping_add(k as u64);
            let t = random_l2(2, s);
            let norm = operator_norm(&t, budget, s).value;
            let (report, res) = tau_duality_gap(&t, 1, 32, budget, s)?;
            let tol = 2.0 * res.eta * norm.max(1.0) + HEURISTIC_TOL;
            Ok(case(
                format!("tau_{k}"),
                report.max_gap <= tol,
                format!("gap {:.3e} tol {tol:.3e} eta {:.3e}", report.max_gap, res.eta),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(outcome(Suite::TauDual, cases))
}

fn run_scheme_axioms(seed: u64) -> SuiteOutcome {
    let mut cases = Vec::new();
    for scheme in [Scheme::subspace(l2(3)), Scheme::coordinate(l2(3))] {
        let report = check_scheme_axioms(&scheme, 3, 200, seed);
        cases.push(case(
            format!("{}_axioms", scheme.kind_name()),
            report.pass,
            if report.pass {
                "GA1-GA3 hold".into()
            } else {
                format!("{:?}", report.checks)
            },
        ));
    }
    // deliberately broken scheme: the checker must catch it
    let full: std::collections::BTreeSet<usize> = (0..3).collect();
    let broken = Scheme::custom(l2(3), vec![vec![full.clone()], vec![full]], None);
    let report = check_scheme_axioms(&broken, 1, 200, seed);
    cases.push(case(
        "broken_scheme_detected".into(),
        !report.pass,
        "level 0 = full space must fail GA1".into(),
    ));
    outcome(Suite::SchemeAxioms, cases)
}

fn run_scheme_dual(seed: u64, budget: &Budget) -> Result<SuiteOutcome> {
    let mut cases = Vec::new();
    // coordinate scheme on diagonals: enumeration is exact on both sides
    let diag_cases: Vec<CaseOutcome> = (0..5usize)
        .into_par_iter()
        .map(|k| {
            let dim = 2 + (k % 3);
            let mut rng = crate::solvers::derive_rng(seed, 900 + k as u64);
            let weights: Vec<f64> = (0..dim)
                .map(|_| crate::solvers::normal(&mut rng).abs() + 0.1)
                .collect();
            let t = crate::zoo::make_diagonal(&WeightSeq::List(weights), dim, Exponent::two())?;
            let scheme = Scheme::coordinate(t.codomain);
            let report = scheme_duality_gap(&t, &scheme, 3.min(dim), budget, seed)?;
            Ok(case(
                format!("coordinate_diag_{k}"),
                report.max_gap == 0.0 && report.exact,
                format!("max gap {:.3e}", report.max_gap),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    cases.extend(diag_cases);
    let subspace_cases: Vec<CaseOutcome> = (0..10usize)
        .into_par_iter()
        .map(|k| {
            let t = random_l2(3, seed.wrapping_add(300 + k as u64));
            let scheme = Scheme::subspace(t.codomain);
            let report = scheme_duality_gap(&t, &scheme, 2, budget, seed.wrapping_add(k as u64))?;
            Ok(case(
                format!("subspace_euclidean_{k}"),
                report.max_gap <= EXACT_TOL,
                format!("max gap {:.3e}", report.max_gap),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    cases.extend(subspace_cases);
    Ok(outcome(Suite::SchemeDual, cases))
}

fn run_profile(seed: u64, budget: &Budget) -> Result<SuiteOutcome> {
    let mut cases = Vec::new();
    let sizes = [4usize, 5, 6, 7];
    let harmonic = make_truncation_family(
        &OperatorSpec::Diagonal {
            weights: WeightSeq::Harmonic,
            n: 0,
            p: Exponent::two(),
        },
        &sizes,
    )?;
    let hp = q_compactness_profile(&harmonic, &Scheme::subspace, 3, budget, seed)?;
    cases.push(case(
        "harmonic_diagonal_decaying".into(),
        hp.verdict == ProfileVerdict::Decaying,
        format!("verdict {:?}, limits {:?}", hp.verdict, hp.limits),
    ));
    let identity = make_truncation_family(
        &OperatorSpec::Diagonal {
            weights: WeightSeq::Const(1.0),
            n: 0,
            p: Exponent::two(),
        },
        &sizes,
    )?;
    let ip = q_compactness_profile(&identity, &Scheme::subspace, 3, budget, seed)?;
    let limits_one = ip
        .limits
        .iter()
        .all(|l| l.map(|v| (v - 1.0).abs() <= 1e-3).unwrap_or(false));
    cases.push(case(
        "identity_non_decaying_limits_one".into(),
        ip.verdict == ProfileVerdict::NonDecaying && limits_one,
        format!("verdict {:?}, limits {:?}", ip.verdict, ip.limits),
    ));
    let shift = make_truncation_family(
        &OperatorSpec::BackwardShift {
            weights: WeightSeq::Const(1.0),
            n: 0,
            p: Exponent::two(),
        },
        &sizes,
    )?;
    let sp = q_compactness_profile(&shift, &Scheme::subspace, 2, budget, seed)?;
    let shift_limits_one = sp
        .limits
        .iter()
        .all(|l| l.map(|v| (v - 1.0).abs() <= 1e-3).unwrap_or(false));
    cases.push(case(
        "unit_shift_non_decaying_limits_one".into(),
        sp.verdict == ProfileVerdict::NonDecaying && shift_limits_one,
        format!("verdict {:?}, limits {:?}", sp.verdict, sp.limits),
    ));
    // adjoint consistency: gamma limits agree for the adjoint family
    let mut adjoint_ok = true;
    let mut detail = String::new();
    for &size in &sizes {
        let t = identity.generator(size)?;
        let adj = t.adjoint();
        for n in 0..=2usize {
            let a = gen_kolmogorov_op(&t, &Scheme::subspace(t.codomain), n, budget, seed)?;
            let b = gen_kolmogorov_op(&adj, &Scheme::subspace(adj.codomain), n, budget, seed)?;
            if (a.value - b.value).abs() > 1e-3 {
                adjoint_ok = false;
                detail = format!("N={size}, n={n}: {} vs {}", a.value, b.value);
            }
        }
    }
    cases.push(case(
        "adjoint_family_limits_agree".into(),
        adjoint_ok,
        if adjoint_ok { "ok".into() } else { detail },
    ));
    Ok(outcome(Suite::Profile, cases))
}

/// Runs one named suite with its default corpus.
pub fn run_suite(suite: Suite, seed: u64, budget: &Budget) -> Result<SuiteOutcome> {
    match suite {
        Suite::Properties => Ok(run_properties(seed, budget, 500)),
        Suite::Hutton => run_hutton(seed, budget),
        Suite::KolmogorovDual => run_pair_duality(suite, SNumberKind::Delta, seed, budget),
        Suite::GelfandDual => run_pair_duality(suite, SNumberKind::Gelfand, seed, budget),
        Suite::TauDual => run_tau(seed, budget),
        Suite::SchemeAxioms => Ok(run_scheme_axioms(seed)),
        Suite::SchemeDual => run_scheme_dual(seed, budget),
        Suite::Profile => run_profile(seed, budget),
    }
}

/// Builds a scheme for suite-independent use from an optional spec,
/// defaulting to the subspace scheme.
pub fn scheme_or_default(spec: Option<&SchemeSpec>, space: Space) -> Scheme {
    match spec {
        Some(s) => s.build(space),
        None => Scheme::subspace(space),
    }
}

/// Classical/generalized cross-check helper used by tests: the subspace
/// scheme delta against the classical Kolmogorov number.
pub fn subspace_scheme_gap(t: &Operator, n: usize, budget: &Budget, seed: u64) -> Result<f64> {
    let scheme = Scheme::subspace(t.codomain);
    let a = gen_kolmogorov_op(t, &scheme, n, budget, seed)?;
    let b = kolmogorov_number(t, n, budget, seed.wrapping_add(1))?;
    Ok((a.value - b.value).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::all() {
            assert_eq!(Suite::from_str(s.name()).unwrap(), s);
        }
        assert!(Suite::from_str("nope").is_err());
    }

    #[test]
    fn scheme_axioms_suite_passes() {
        let o = run_scheme_axioms(0);
        assert!(o.pass, "{:?}", o.cases);
    }

    #[test]
    fn properties_suite_small_corpus() {
        let o = run_properties(1, &Budget::default(), 25);
        assert!(o.pass, "{:?}", o.cases.iter().filter(|c| !c.pass).collect::<Vec<_>>());
    }

    #[test]
    fn tau_suite_passes() {
        let o = run_tau(5, &Budget::default()).unwrap();
        assert!(o.pass, "{:?}", o.cases);
    }
}
