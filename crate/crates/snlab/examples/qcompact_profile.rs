//! Q-compactness profiles over truncation families: the compact diagonal
//! 1/n model decays, while identity and unit-shift sections stabilize at 1
//! for every n (the finite trace of a non-compact limit).
//!
//!     cargo run --example qcompact_profile

use snlab::exponent::Exponent;
use snlab::norms::Budget;
use snlab::schemes::{q_compactness_profile, Scheme};
use snlab::zoo::{make_truncation_family, OperatorSpec, WeightSeq};

fn main() {
    let budget = Budget::default();
    let sizes = [4usize, 5, 6, 7];

    let families = [
        (
            "diagonal 1/n",
            OperatorSpec::Diagonal {
                weights: WeightSeq::Harmonic,
                n: 0,
                p: Exponent::two(),
            },
        ),
        (
            "identity",
            OperatorSpec::Diagonal {
                weights: WeightSeq::Const(1.0),
                n: 0,
                p: Exponent::two(),
            },
        ),
        (
            "unit backward shift",
            OperatorSpec::BackwardShift {
                weights: WeightSeq::Const(1.0),
                n: 0,
                p: Exponent::two(),
            },
        ),
    ];

    for (label, spec) in families {
        let fam = make_truncation_family(&spec, &sizes).unwrap();
        let report = q_compactness_profile(&fam, &Scheme::subspace, 3, &budget, 0).unwrap();
        println!("{label}:");
        println!("  sizes N = {:?}", report.truncation_sizes);
        for (n, row) in report.deltas.iter().enumerate() {
            let formatted: Vec<String> = row.iter().map(|v| format!("{v:.4}")).collect();
            println!(
                "  delta_{n}: [{}]  limit = {:?}",
                formatted.join(", "),
                report.limits[n]
            );
        }
        println!(
            "  verdict: {:?}, gamma estimate: {:?}\n",
            report.verdict, report.gamma_estimate
        );
    }
}
