//! Approximation, Kolmogorov, and Gelfand numbers side by side, checked
//! against the independent singular-value oracle at p = q = 2.
//!
//!     cargo run --example snumber_table

use snlab::exponent::Exponent;
use snlab::norms::Budget;
use snlab::snumbers::{snumber_sequence, svd_oracle, SNumberKind};
use snlab::zoo::{make_diagonal, make_random, WeightSeq};

fn main() {
    let budget = Budget::default();

    let t = make_diagonal(&WeightSeq::List(vec![3.0, 2.0, 1.0, 0.5]), 4, Exponent::two()).unwrap();
    println!("diag(3,2,1,0.5) on l_2^4:");
    print_table(&t, &budget);

    let t = make_random(4, 4, Exponent::two(), Exponent::two(), 42, 1.0).unwrap();
    println!("\nrandom Gaussian 4x4 (seed 42) on l_2^4:");
    print_table(&t, &budget);

    let oracle = svd_oracle(&t);
    println!("\nsingular-value oracle: {:?}", &oracle[..4]);
}

fn print_table(t: &snlab::Operator, budget: &Budget) {
    let n_max = t.domain.dim.min(4);
    let alpha = snumber_sequence(t, SNumberKind::Alpha, n_max, budget, 1).unwrap();
    let delta = snumber_sequence(t, SNumberKind::Delta, n_max, budget, 2).unwrap();
    let c = snumber_sequence(t, SNumberKind::Gelfand, n_max, budget, 3).unwrap();
    println!("{:>3} {:>12} {:>12} {:>12}", "n", "alpha_n", "delta_n", "c_n");
    for n in 0..=n_max {
        println!(
            "{:>3} {:>12.8} {:>12.8} {:>12.8}",
            n, alpha.estimates[n].value, delta.estimates[n].value, c.estimates[n].value
        );
    }
}
