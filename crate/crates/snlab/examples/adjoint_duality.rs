//! Numerical duality checks: alpha_n(T) = alpha_n(T*), delta_n(T*) =
//! delta_n(T), c_n(T*) = c_n(T), and the cross relation delta_n(T*) = c_n(T),
//! on both the exact Euclidean corpus and an l_1 -> l_inf instance.
//!
//!     cargo run --example adjoint_duality

use snlab::exponent::Exponent;
use snlab::norms::Budget;
use snlab::snumbers::{duality_gap, SNumberKind};
use snlab::zoo::make_random;

fn main() {
    let budget = Budget::default();

    let t = make_random(3, 3, Exponent::two(), Exponent::two(), 7, 1.0).unwrap();
    println!("Euclidean 3x3 (exact singular-value paths):");
    for kind in [SNumberKind::Alpha, SNumberKind::Delta, SNumberKind::Gelfand] {
        for report in duality_gap(&t, kind, 2, &budget, 7).unwrap() {
            println!("  {:<16} max relative gap {:.3e}", report.relation, report.max_gap);
        }
    }

    let t = make_random(3, 3, Exponent::one(), Exponent::infinity(), 11, 1.0).unwrap();
    println!("\nl_1^3 -> l_inf^3 (search-based, independent seeds per side):");
    for kind in [SNumberKind::Alpha, SNumberKind::Delta, SNumberKind::Gelfand] {
        for report in duality_gap(&t, kind, 2, &budget, 11).unwrap() {
            println!("  {:<16} max relative gap {:.3e}", report.relation, report.max_gap);
            for row in &report.rows {
                println!(
                    "    n={} primal {:.6} dual {:.6}",
                    row.n, row.primal, row.dual
                );
            }
        }
    }
}
