//! Drawing from exact distributions.
//!
//! A draw compares `K` uniform bits against the `K`-bit binary expansion of
//! the target probability, so outcome `i` is chosen with probability within
//! `2^-K` of its exact value. `K` defaults to 128.

use num_bigint::{BigInt, BigUint};
use rand::Rng;

use super::BinaryDistribution;
use crate::exact::ExactReal;

pub const DEFAULT_SAMPLING_BITS: u32 = 128;

fn uniform_bits<R: Rng + ?Sized>(rng: &mut R, bits: u32) -> BigInt {
    let words = bits.div_ceil(32) as usize;
    let digits: Vec<u32> = (0..words).map(|_| rng.random::<u32>()).collect();
    let raw = BigUint::new(digits);
    let excess = words as u32 * 32 - bits;
    BigInt::from(raw >> excess)
}

pub fn sample_outcome<R: Rng + ?Sized>(d: &BinaryDistribution, rng: &mut R) -> bool {
    sample_outcome_with_precision(d, rng, DEFAULT_SAMPLING_BITS)
}

/// Returns `true` (outcome 1) with probability `⌊p1·2^bits⌋ / 2^bits`.
pub fn sample_outcome_with_precision<R: Rng + ?Sized>(d: &BinaryDistribution, rng: &mut R, bits: u32) -> bool {
    let threshold = d.p1().floor_scaled(bits);
    uniform_bits(rng, bits) < threshold
}

/// Picks an index with probability `probs[i]` (up to `2^-bits`). The
/// probabilities must be non-negative and sum to 1.
pub fn sample_index<R: Rng + ?Sized>(probs: &[ExactReal], rng: &mut R, bits: u32) -> usize {
    assert!(!probs.is_empty(), "empty distribution");
    let u = uniform_bits(rng, bits);
    let mut cumulative = ExactReal::zero();
    for (i, p) in probs.iter().enumerate() {
        cumulative = &cumulative + p;
        if u < cumulative.floor_scaled(bits) {
            return i;
        }
    }
    probs.len() - 1
}
