//! Symmetrized approximation numbers over finite nets: measured norming
//! resolution eta, net refinement M = 16 -> 128, and the duality
//! tau_n(T) = tau_n(T*) with eta-scaled tolerance.
//!
//!     cargo run --example tau_symmetrized

use snlab::exponent::Exponent;
use snlab::norms::{operator_norm, Budget};
use snlab::symmetrized::{build_functional_net, symmetrized_approx_number, tau_duality_gap};
use snlab::zoo::make_random;
use snlab::Space;

fn main() {
    let budget = Budget::default();
    let space = Space::new(2, Exponent::two()).unwrap();

    println!("net resolution on the Euclidean sphere (dim 2):");
    for m in [4usize, 16, 64, 256] {
        let net = build_functional_net(space, m, 0).unwrap();
        println!(
            "  M = {:>3}: eta_basis = {:.4}, eta(grid) = {:.4}",
            m, net.resolution.eta_basis, net.resolution.eta
        );
    }

    let t = make_random(2, 2, Exponent::two(), Exponent::two(), 9, 1.0).unwrap();
    let norm = operator_norm(&t, &budget, 9).value;
    println!("\nrandom 2x2, ||T|| = {norm:.6}; tau_1 under net refinement:");
    for m in [16usize, 32, 64, 128] {
        let tau = symmetrized_approx_number(&t, 1, m, &budget, 9).unwrap();
        let eta = tau.functional_net.eta.max(tau.vector_net.eta);
        println!(
            "  M = {:>3}: tau_1 = {:.6} (eta = {:.4}, slack 2*eta*||T|| = {:.4})",
            m,
            tau.estimate.value,
            eta,
            2.0 * eta * norm
        );
    }

    let (report, res) = tau_duality_gap(&t, 1, 64, &budget, 9).unwrap();
    let tol = 2.0 * res.eta * norm + 5e-3;
    println!(
        "\ntau duality: max gap = {:.4e}, eta-scaled tolerance = {:.4e}, pass = {}",
        report.max_gap,
        tol,
        report.max_gap <= tol
    );
}
