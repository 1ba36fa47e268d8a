//! Search engines behind the norm and s-number estimators.

pub mod lp;
pub mod minimax;
pub mod nelder_mead;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic per-restart generator derived from a caller seed.
pub fn derive_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15u64.wrapping_mul(index.wrapping_add(1)))
}

/// Standard normal sample via Box-Muller.
pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    use rand::Rng;
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
