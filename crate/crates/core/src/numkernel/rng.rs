//! Deterministic random streams.
//!
//! Every iterative routine that needs randomness (start vectors, restart
//! points, instance generators) draws from a ChaCha stream derived from one
//! fixed crate-wide constant, so identical inputs give bit-identical runs.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Base constant all internal streams are derived from.
pub const BASE_SEED: u64 = 0x9E37_79B9;

/// Derives an independent named stream.  `tag` should be a stable per-call-site
/// label; `salt` distinguishes repeated uses inside one routine.
pub fn stream(tag: &str, salt: u64) -> ChaCha8Rng {
    let mut h = BASE_SEED;
    for b in tag.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100_0000_01B3);
    }
    h ^= salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    ChaCha8Rng::seed_from_u64(h)
}

/// Derives a stream from a user-provided seed (CLI entry points).
pub fn user_stream(seed: u64, tag: &str) -> ChaCha8Rng {
    let mut h = seed ^ BASE_SEED.rotate_left(17);
    for b in tag.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100_0000_01B3);
    }
    ChaCha8Rng::seed_from_u64(h)
}

/// Standard complex gaussian (unit variance per component).
pub fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    // Box-Muller; two uniforms per component pair.
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    let r = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (2.0 * std::f64::consts::PI * u2).sin_cos();
    Complex64::new(r * c, r * s)
}

/// A deterministic unit start vector for power-type iterations: entries spread
/// over phases so it is unlikely to be orthogonal to any fixed subspace.
pub fn start_vector(n: usize) -> Vec<Complex64> {
    let mut rng = stream("power-start", n as u64);
    let mut v: Vec<Complex64> = (0..n).map(|_| gaussian(&mut rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    v
}
