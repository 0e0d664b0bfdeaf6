//! Seed derivation and sampling helpers.
//!
//! All stochastic code in the crate draws from explicitly passed
//! [`ChaCha8Rng`] streams so that runs are reproducible across platforms
//! and independent of evaluation order or thread count.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// splitmix64 finalizer, used to mix seed components.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from a master seed and a stream label.
pub fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    let mut acc = mix64(master);
    for &p in parts {
        acc = mix64(acc ^ p);
    }
    acc
}

/// Fresh deterministic stream for a derived seed.
pub fn stream(master: u64, parts: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, parts))
}

/// Standard normal sample via Box-Muller (pair generated, second discarded,
/// keeping the stream position independent of call interleaving).
pub fn normal(rng: &mut impl Rng, mean: f64, std_dev: f64) -> f64 {
    let u1: f64 = loop {
        let u: f64 = rng.gen();
        if u > 0.0 {
            break u;
        }
    };
    let u2: f64 = rng.gen();
    let z = (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
    mean + std_dev * z
}
