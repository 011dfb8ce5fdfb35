//! Exact arithmetic: amplitudes in Z[ω, 1/√2] and reals in Q(√2).

mod amplitude;
mod real;

pub(crate) use amplitude::norm_sqr_parts;
#[cfg(test)]
pub(crate) use amplitude::rotate;
pub use amplitude::{omega_phase_between, ExactAmplitude};
pub use real::{parse_rational, ExactProbability, ExactReal};
