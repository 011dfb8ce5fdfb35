use rand::seq::SliceRandom;
use rand::Rng;

use super::{Circuit, Gate, GateKind};

#[derive(Clone, Copy, Debug)]
pub struct RandomCircuitConfig {
    pub n_qubits: usize,
    pub n_gates: usize,
}

/// Uniform over the gate kinds that fit in `n_qubits`, then uniform over
/// distinct targets.
pub fn random_circuit<R: Rng + ?Sized>(cfg: &RandomCircuitConfig, rng: &mut R) -> Circuit {
    assert!(cfg.n_qubits > 0);
    let kinds: Vec<GateKind> = [
        GateKind::H,
        GateKind::X,
        GateKind::Z,
        GateKind::S,
        GateKind::T,
        GateKind::Cnot,
        GateKind::Cz,
        GateKind::Ccz,
        GateKind::Toffoli,
        GateKind::PhaseZ(0),
    ]
    .into_iter()
    .filter(|k| k.arity() <= cfg.n_qubits)
    .collect();

    let mut qubits: Vec<usize> = (0..cfg.n_qubits).collect();
    let gates = (0..cfg.n_gates)
        .map(|_| {
            let mut kind = kinds[rng.random_range(0..kinds.len())];
            if let GateKind::PhaseZ(_) = kind {
                kind = GateKind::PhaseZ(rng.random_range(0..8u8));
            }
            qubits.shuffle(rng);
            Gate::new(kind, qubits[..kind.arity()].to_vec()).expect("distinct targets")
        })
        .collect();
    Circuit::new(cfg.n_qubits, gates).expect("targets in range")
}
