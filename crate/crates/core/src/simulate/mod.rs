//! Exact simulation of pure, DQC1 and IQP output distributions, sampling,
//! and the multiplicative-error criterion.

mod error_check;
pub mod float;
mod iqp;
mod kernel;
mod sampling;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::BitString;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::exact::{ExactAmplitude, ExactProbability, ExactReal};
use kernel::AnyKernel;

pub use error_check::{check_multiplicative_error, Epsilon, MultiplicativeErrorReport};
pub use iqp::{
    iqp_marginal_distribution, iqp_marginal_distribution_with_bound, iqp_postselected_amplitudes, DEFAULT_IQP_BOUND,
};
pub use sampling::{sample_index, sample_outcome, sample_outcome_with_precision, DEFAULT_SAMPLING_BITS};

/// Largest qubit count accepted by [`dqc1_distribution`].
pub const DEFAULT_DQC1_BOUND: usize = 20;

/// An exact pure state `Σ_i a_i |i⟩`; qubit 0 is the most significant bit
/// of the index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statevector {
    n_qubits: usize,
    half_exp: u32,
    numerators: Vec<[BigInt; 4]>,
}

impl Statevector {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    pub fn amplitude(&self, index: usize) -> ExactAmplitude {
        ExactAmplitude::new(self.numerators[index].clone(), self.half_exp)
    }

    pub fn amplitudes(&self) -> Vec<ExactAmplitude> {
        (0..self.len()).map(|i| self.amplitude(i)).collect()
    }

    /// `Σ |a_i|²` over indices accepted by `pred`.
    pub fn weight_where(&self, pred: impl Fn(usize) -> bool) -> ExactReal {
        self.numerators
            .iter()
            .enumerate()
            .filter(|(i, _)| pred(*i))
            .map(|(_, c)| ExactAmplitude::new(c.clone(), self.half_exp).norm_sqr())
            .sum()
    }

    pub fn norm_sqr(&self) -> ExactReal {
        self.weight_where(|_| true)
    }
}

/// A distribution over one output bit with `p0 + p1 = 1` exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinaryDistribution {
    p0: ExactProbability,
    p1: ExactProbability,
}

impl BinaryDistribution {
    pub fn from_p1(p1: ExactProbability) -> Result<Self> {
        if !p1.is_probability() {
            return Err(Error::MalformedDistribution(format!("p1 = {p1} is outside [0, 1]")));
        }
        Ok(BinaryDistribution { p0: p1.complement(), p1 })
    }

    pub fn new(p0: ExactProbability, p1: ExactProbability) -> Result<Self> {
        if &p0 + &p1 != ExactReal::one() {
            return Err(Error::MalformedDistribution(format!("p0 + p1 = {} != 1", &p0 + &p1)));
        }
        BinaryDistribution::from_p1(p1)
    }

    /// Point mass on `bit`.
    pub fn certain(bit: bool) -> Self {
        BinaryDistribution::from_p1(if bit { ExactReal::one() } else { ExactReal::zero() }).expect("0 or 1")
    }

    pub fn p0(&self) -> &ExactProbability {
        &self.p0
    }

    pub fn p1(&self) -> &ExactProbability {
        &self.p1
    }

    pub fn p(&self, bit: bool) -> &ExactProbability {
        if bit {
            &self.p1
        } else {
            &self.p0
        }
    }
}

fn msb(n: usize) -> usize {
    1 << (n - 1)
}

/// Runs `c` on the basis state `input` (first character = qubit 0).
pub fn run_statevector(c: &Circuit, input: &BitString) -> Result<Statevector> {
    if input.len() != c.n_qubits() {
        return Err(Error::LengthMismatch { expected: c.n_qubits(), got: input.len() });
    }
    let (n_qubits, half_exp, numerators) = AnyKernel::run(c, input.to_index() as usize).into_parts();
    Ok(Statevector { n_qubits, half_exp, numerators })
}

/// Probability that qubit 0 reads 1 after `c` acts on `|0^n⟩`.
pub fn acceptance_probability(c: &Circuit) -> ExactProbability {
    let top = msb(c.n_qubits());
    AnyKernel::run(c, 0).weight_where(|i| i & top != 0)
}

/// The DQC1 output distribution with the default enumeration bound.
pub fn dqc1_distribution(c: &Circuit) -> Result<BinaryDistribution> {
    dqc1_distribution_with_bound(c, DEFAULT_DQC1_BOUND)
}

/// The DQC1 output distribution: qubit 0 starts in `|0⟩`, the rest are
/// maximally mixed, and qubit 0 is measured.
///
/// Computed by averaging the pure-state acceptance over all `2^(n-1)`
/// basis inputs `|0⟩|y⟩`; the inputs run in parallel and are combined by
/// exact summation.
pub fn dqc1_distribution_with_bound(c: &Circuit, bound: usize) -> Result<BinaryDistribution> {
    let n = c.n_qubits();
    if n > bound {
        return Err(Error::BoundExceeded { what: "exact DQC1 enumeration", required: n, bound });
    }
    let top = msb(n);
    let total: ExactReal = (0..top)
        .into_par_iter()
        .map(|y| AnyKernel::run(c, y).weight_where(|i| i & top != 0))
        .reduce(ExactReal::zero, |a, b| &a + &b);
    BinaryDistribution::from_p1(total.div_pow2(n as u32 - 1))
}
