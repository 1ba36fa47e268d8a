//! The natural injection I : l_1^N -> l_inf^N: unit norm for every N, and
//! the rank-1 all-entries-1/2 approximant certifying alpha_1 <= 1/2.
//! (At infinite dimension, with c_0 in place of l_inf, the injection's own
//! approximation numbers are all 1 while the adjoint's are 1/2; only the
//! two finite-dimensionally visible halves are reproduced here.)
//!
//!     cargo run --example injection_certificate

use nalgebra::DMatrix;
use snlab::norms::{operator_norm, Budget};
use snlab::snumbers::approx_number;
use snlab::zoo::make_injection_l1_linf;
use snlab::Operator;

fn main() {
    let budget = Budget::default();
    println!("{:>3} {:>8} {:>12} {:>14}", "N", "norm", "alpha_1", "cert residual");
    for n in 2..=8 {
        let t = make_injection_l1_linf(n).unwrap();
        let norm = operator_norm(&t, &budget, 0);
        let a1 = approx_number(&t, 1, &budget, 3);

        // re-verify the explicit certificate by exact 1 -> inf evaluation
        let half = DMatrix::from_element(n, n, 0.5);
        let residual = Operator::new(&t.matrix - half, t.domain, t.codomain).unwrap();
        let cert = operator_norm(&residual, &budget, 0);

        println!(
            "{:>3} {:>8.4} {:>12.8} {:>14.8}",
            n, norm.value, a1.value, cert.value
        );
        assert!(norm.is_exact() && norm.value == 1.0);
        assert!(cert.is_exact() && cert.value == 0.5);
        assert!(a1.value <= 0.5 + 1e-9);
    }
    println!("\nall norms exactly 1; all certificates exactly 1/2");
}
