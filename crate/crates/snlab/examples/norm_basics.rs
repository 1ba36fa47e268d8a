//! Vector and operator norms across the exponent grid, with the
//! bound-direction tag showing which paths are exact.
//!
//!     cargo run --example norm_basics

use nalgebra::{dmatrix, dvector};
use snlab::{operator_norm, vector_norm, Budget, Exponent, Operator, Space};

fn main() {
    let x = dvector![3.0, -4.0, 1.0];
    for p in [
        Exponent::one(),
        Exponent::rational(3, 2).unwrap(),
        Exponent::two(),
        Exponent::infinity(),
    ] {
        println!("||x||_{p} = {:.6}", vector_norm(&x, p));
    }
    println!();

    let m = dmatrix![1.0, -0.5, 2.0; 0.0, 1.5, -1.0; 0.5, 0.5, 0.5];
    let budget = Budget::default();
    println!("{:>6} {:>6} {:>12} {:>10}", "p", "q", "norm", "path");
    for p in [Exponent::one(), Exponent::two(), Exponent::infinity()] {
        for q in [Exponent::one(), Exponent::two(), Exponent::infinity()] {
            let t = Operator::new(
                m.clone(),
                Space::new(3, p).unwrap(),
                Space::new(3, q).unwrap(),
            )
            .unwrap();
            let e = operator_norm(&t, &budget, 7);
            println!(
                "{:>6} {:>6} {:>12.8} {:>10}",
                p.to_string(),
                q.to_string(),
                e.value,
                if e.is_exact() { "exact" } else { "heuristic" }
            );
        }
    }

    // every pair on the {1,2,inf} grid resolves exactly at small dims:
    // column/row formulas, the SVD, or sign-vector enumeration
    let p43 = Exponent::rational(4, 3).unwrap();
    let t = Operator::new(
        m,
        Space::new(3, p43).unwrap(),
        Space::new(3, p43).unwrap(),
    )
    .unwrap();
    let e = operator_norm(&t, &budget, 7);
    println!(
        "\n4/3 -> 4/3 norm (multi-restart ascent, certified lower bound): {:.8}",
        e.value
    );
}
