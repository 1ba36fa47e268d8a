//! Type-l^p diagnostic: l_r means of the approximation-number sequence
//! stratify operators by how fast their alpha sequence decays.
//!
//!     cargo run --example type_lp

use snlab::exponent::Exponent;
use snlab::norms::Budget;
use snlab::snumbers::type_lp_diagnostic;
use snlab::zoo::{make_diagonal, WeightSeq};

fn main() {
    let budget = Budget::default();
    let rs = [1.0, 2.0, 4.0];

    for (label, weights) in [
        ("geometric 2^-n", WeightSeq::Geometric(0.5)),
        ("harmonic 1/n", WeightSeq::Harmonic),
        ("constant 1", WeightSeq::Const(1.0)),
    ] {
        let t = make_diagonal(&weights, 8, Exponent::two()).unwrap();
        let diag = type_lp_diagnostic(&t, 7, &rs, &budget, 0).unwrap();
        println!("{label}:");
        let alphas: Vec<String> = diag.alphas.iter().map(|a| format!("{a:.4}")).collect();
        println!("  alpha = [{}]", alphas.join(", "));
        for (r, norm) in diag.r_values.iter().zip(diag.lr_norms.iter()) {
            println!("  l_{r} mean = {norm:.6}");
        }
        println!();
    }
}
