//! Seeded point sampling and Veronese independence.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::linalg;
use crate::algebra::{monomial_vector, PrimeField};
use crate::error::Result;

/// Name recorded in reports for the generator used everywhere in this module.
pub const GENERATOR: &str = "ChaCha8Rng (rand_chacha 0.3), seed_from_u64 + set_stream(trial)";

/// The generator for trial `stream` under `seed`. Streams are independent, so
/// trials can run in any order.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn random_point(rng: &mut impl Rng, n: usize, p: u32) -> Vec<u32> {
    (0..n).map(|_| rng.gen_range(0..p)).collect()
}

/// `s` i.i.d. uniform vectors of `F_p^n`, drawn from stream 0 of `seed`.
pub fn sample_points(n: usize, p: u32, s: usize, seed: u64) -> Vec<Vec<u32>> {
    sample_points_from(&mut trial_rng(seed, 0), n, p, s)
}

pub fn sample_points_from(rng: &mut impl Rng, n: usize, p: u32, s: usize) -> Vec<Vec<u32>> {
    (0..s).map(|_| random_point(rng, n, p)).collect()
}

/// Whether `φ_d(x_1),…,φ_d(x_s)` are linearly independent, decided on monomial
/// coordinates (requires `p > d`).
pub fn veronese_independent(field: PrimeField, points: &[Vec<u32>], d: usize) -> Result<bool> {
    let rows = points
        .iter()
        .map(|x| monomial_vector(field, x, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(linalg::rank(field, &rows) == points.len())
}

/// Index of `x ∈ F_p^n` with `x_1` most significant.
pub fn encode_point(x: &[u32], p: u32) -> usize {
    x.iter().fold(0usize, |acc, &v| acc * p as usize + v as usize)
}

pub fn decode_point(mut idx: usize, n: usize, p: u32) -> Vec<u32> {
    let mut x = vec![0u32; n];
    for slot in x.iter_mut().rev() {
        *slot = (idx % p as usize) as u32;
        idx /= p as usize;
    }
    x
}
