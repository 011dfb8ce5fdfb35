//! Circuit compilers that keep the zero/nonzero status of the acceptance
//! probability, and their exact verification.
//!
//! * DQC1: `p̃ = 4·p_W(1)·(1 - p_W(1)) / 2^{n+2}` with `p_W(1) = p_V(1)/2`.
//! * IQP with postselection: `p^{IQP,s+1}(1) = p_V(1) / 2^s`, and the state
//!   postselected on `1^s` is `|1^s⟩ ⊗ V|0^n⟩` up to an eighth root of unity.

mod dqc1;
mod iqp;

use serde::Serialize;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::exact::{omega_phase_between, ExactProbability, ExactReal};
use crate::simulate::{
    acceptance_probability, dqc1_distribution_with_bound, iqp_marginal_distribution_with_bound,
    iqp_postselected_amplitudes, run_statevector, DEFAULT_DQC1_BOUND, DEFAULT_IQP_BOUND,
};
use crate::BitString;

pub use dqc1::{build_dqc1_reduction, build_w, Dqc1Reduction};
pub use iqp::{build_iqp_reduction, IqpReduction};

/// Size limits for exact verification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyBounds {
    /// Largest source circuit accepted.
    pub source_n: usize,
    /// Largest DQC1 circuit whose mixed inputs are enumerated.
    pub dqc1_qubits: usize,
    /// Largest compiled IQP circuit evaluated.
    pub iqp_qubits: usize,
}

impl Default for VerifyBounds {
    fn default() -> Self {
        VerifyBounds { source_n: 12, dqc1_qubits: DEFAULT_DQC1_BOUND, iqp_qubits: DEFAULT_IQP_BOUND }
    }
}

/// Both sides of both identities, computed exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    pub n: usize,
    #[serde(rename = "pV1")]
    pub p_v1: ExactProbability,
    #[serde(rename = "pW1")]
    pub p_w1: ExactProbability,
    pub ptilde_expected: ExactProbability,
    pub ptilde_actual: ExactProbability,
    pub dqc1_ok: bool,
    pub dqc1_qubits: usize,
    pub s: usize,
    pub iqp_qubits: usize,
    pub iqp_expected: ExactProbability,
    pub iqp_actual: ExactProbability,
    pub iqp_ok: bool,
    pub state_identity_ok: bool,
    /// `k` with postselected state `= ω^k · |1^s⟩ ⊗ V|0^n⟩`, when one exists.
    pub global_phase: Option<u8>,
}

impl ReductionReport {
    pub fn ok(&self) -> bool {
        self.dqc1_ok && self.iqp_ok && self.state_identity_ok
    }

    /// `p_V(1) = 0 ⟺ p̃ = 0 ⟺ p^{IQP} = 0`.
    pub fn zero_preserved(&self) -> bool {
        let z = self.p_v1.is_zero();
        self.ptilde_actual.is_zero() == z && self.iqp_actual.is_zero() == z
    }
}

pub fn verify_reductions(v: &Circuit) -> Result<ReductionReport> {
    verify_reductions_with_bounds(v, &VerifyBounds::default())
}

pub fn verify_reductions_with_bounds(v: &Circuit, bounds: &VerifyBounds) -> Result<ReductionReport> {
    let n = v.n_qubits();
    if n > bounds.source_n {
        return Err(Error::BoundExceeded { what: "reduction verification", required: n, bound: bounds.source_n });
    }
    let p_v1 = acceptance_probability(v);

    let dqc1 = build_dqc1_reduction(v);
    let p_w1 = acceptance_probability(&dqc1.w_circuit);
    let ptilde_expected = (ExactReal::integer(4) * &p_w1 * p_w1.complement()).div_pow2(n as u32 + 2);
    let ptilde_actual = dqc1_distribution_with_bound(&dqc1.dqc1_circuit, bounds.dqc1_qubits)?.p1().clone();
    let dqc1_ok = ptilde_actual == ptilde_expected && p_w1 == p_v1.div_pow2(1);

    let iqp = build_iqp_reduction(v);
    let s = iqp.s;
    let iqp_expected = p_v1.div_pow2(s as u32);
    let iqp_actual =
        iqp_marginal_distribution_with_bound(&iqp.iqp, iqp.postselect_count, bounds.iqp_qubits)?.p1().clone();
    let iqp_ok = iqp_actual == iqp_expected;

    let postselected: Vec<_> =
        iqp_postselected_amplitudes(&iqp.iqp, s)?.into_iter().map(|a| a.mul_sqrt2_pow(s as u32)).collect();
    let target = run_statevector(v, &BitString::zeros(n))?.amplitudes();
    let global_phase = omega_phase_between(&postselected, &target);

    Ok(ReductionReport {
        n,
        p_v1,
        p_w1,
        ptilde_expected,
        ptilde_actual,
        dqc1_ok,
        dqc1_qubits: dqc1.dqc1_circuit.n_qubits(),
        s,
        iqp_qubits: iqp.iqp.n_qubits(),
        iqp_expected,
        iqp_actual,
        iqp_ok,
        state_identity_ok: global_phase.is_some(),
        global_phase,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{random_circuit, Gate, RandomCircuitConfig};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hadamard_report() {
        let r = verify_reductions(&Circuit::new(1, vec![Gate::h(0)]).unwrap()).unwrap();
        assert!(r.ok());
        assert_eq!(r.ptilde_actual, ExactReal::ratio(3, 32));
        assert_eq!(r.iqp_actual, ExactReal::ratio(1, 4));
        assert_eq!(r.s, 1);
    }

    #[test]
    fn empty_circuit_is_zero_everywhere() {
        let r = verify_reductions(&Circuit::empty(1)).unwrap();
        assert!(r.ok());
        assert!(r.p_v1.is_zero() && r.ptilde_actual.is_zero() && r.iqp_actual.is_zero());
    }

    #[test]
    fn fifty_random_three_qubit_circuits() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for i in 0..50 {
            let v = random_circuit(&RandomCircuitConfig { n_qubits: 3, n_gates: 5 }, &mut rng);
            let r = verify_reductions(&v).unwrap();
            assert!(r.ok() && r.zero_preserved(), "circuit {i}:\n{v}\n{r:?}");
        }
    }

    #[test]
    fn yes_instances_give_strict_w_probability() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..30 {
            let v = random_circuit(&RandomCircuitConfig { n_qubits: 2, n_gates: 4 }, &mut rng);
            let r = verify_reductions(&v).unwrap();
            if r.p_v1.is_positive() {
                assert!(r.p_w1.is_positive() && r.p_w1 < ExactReal::one());
            }
        }
    }

    #[test]
    fn report_json_keys() {
        let r = verify_reductions(&Circuit::new(1, vec![Gate::x(0)]).unwrap()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in [
            "n",
            "pV1",
            "pW1",
            "ptilde_expected",
            "ptilde_actual",
            "dqc1_ok",
            "s",
            "iqp_expected",
            "iqp_actual",
            "iqp_ok",
            "state_identity_ok",
            "global_phase",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["ptilde_actual"], "(1, 0, 3)");
    }

    #[test]
    fn bound_is_enforced() {
        let bounds = VerifyBounds { source_n: 1, ..VerifyBounds::default() };
        assert!(matches!(
            verify_reductions_with_bounds(&Circuit::empty(2), &bounds),
            Err(Error::BoundExceeded { required: 2, bound: 1, .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn identities_hold(seed in any::<u64>(), n in 1usize..=3, gates in 0usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let v = random_circuit(&RandomCircuitConfig { n_qubits: n, n_gates: gates }, &mut rng);
            let r = verify_reductions(&v).unwrap();
            prop_assert!(r.ok());
            prop_assert!(r.zero_preserved());
        }
    }
}
