//! Generalized approximation schemes: axiom checks, generalized Kolmogorov
//! numbers for sets and operators, scheme-relative approximation numbers,
//! and the scheme duality alpha_n(T, Q) = alpha_n(T*, Q*).
//!
//!     cargo run --example schemes_tour

use std::collections::BTreeSet;

use nalgebra::dvector;
use snlab::exponent::Exponent;
use snlab::norms::Budget;
use snlab::schemes::{
    check_scheme_axioms, gen_kolmogorov_op, gen_kolmogorov_set, scheme_approx_number,
    scheme_duality_gap, Scheme,
};
use snlab::zoo::{make_diagonal, WeightSeq};
use snlab::Space;

fn main() {
    let budget = Budget::default();
    let space = Space::new(3, Exponent::two()).unwrap();

    for scheme in [Scheme::subspace(space), Scheme::coordinate(space)] {
        let report = check_scheme_axioms(&scheme, 3, 200, 0);
        println!("{} scheme axioms: pass = {}", report.scheme, report.pass);
    }

    // a deliberately broken scheme: level 0 declared as the full space
    let full: BTreeSet<usize> = (0..3).collect();
    let broken = Scheme::custom(space, vec![vec![full.clone()], vec![full]], None);
    let report = check_scheme_axioms(&broken, 1, 200, 0);
    println!("broken scheme detected: pass = {} (expected false)", report.pass);
    for check in &report.checks {
        if !check.passed {
            println!("  {} counterexample: {}", check.axiom, check.counterexamples[0]);
        }
    }

    // generalized Kolmogorov number of a set: {e_1, e_2}, coordinate level 1
    let two = Space::new(2, Exponent::two()).unwrap();
    let d = vec![dvector![1.0, 0.0], dvector![0.0, 1.0]];
    let e = gen_kolmogorov_set(
        &d,
        &Scheme::coordinate(two),
        1,
        Exponent::two(),
        &budget,
        0,
    )
    .unwrap();
    println!("\ndelta_1({{e1,e2}}; coordinate) = {} (best single coordinate)", e.value);

    // operator version and the Eq-(4.2)-style monotone chain
    let t = make_diagonal(&WeightSeq::List(vec![3.0, 2.0, 1.0]), 3, Exponent::two()).unwrap();
    println!("\ndiag(3,2,1), subspace scheme:");
    for n in 0..=3 {
        let e = gen_kolmogorov_op(&t, &Scheme::subspace(space), n, &budget, 1).unwrap();
        println!("  delta_{n}(T;Q) = {:.8}", e.value);
    }

    println!("\ndiag(3,2,1), coordinate scheme (row-support enumeration):");
    for n in 0..=3 {
        let e = scheme_approx_number(&t, &Scheme::coordinate(space), n, &budget, 1).unwrap();
        println!("  alpha_{n}(T,Q) = {:.8}", e.value);
    }

    let dual = scheme_duality_gap(&t, &Scheme::coordinate(space), 3, &budget, 1).unwrap();
    println!(
        "\ncoordinate-scheme duality on the diagonal: max gap = {} (exact = {})",
        dual.max_gap, dual.exact
    );
}
