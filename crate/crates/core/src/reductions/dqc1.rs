use serde::Serialize;

use crate::circuit::{mcx, Circuit, Gate};

/// `W` on `n + 2` qubits with `p_W(1) = p_V(1) / 2`.
///
/// Layout: qubit 0 is the output `w`, qubit 1 a coin `h`, and qubits
/// `2..n+2` carry `v`. The coin is put in superposition, `v` runs on its
/// register, and a Toffoli copies `(v-output AND h)` onto `w`.
pub fn build_w(v: &Circuit) -> Circuit {
    let n = v.n_qubits();
    let mut w = Circuit::empty(n + 2);
    let push = |w: &mut Circuit, g: Gate| w.push(g).expect("targets lie inside W");
    push(&mut w, Gate::h(1));
    for g in v.gates() {
        push(&mut w, g.remapped(|q| q + 2));
    }
    push(&mut w, Gate::toffoli(2, 1, 0));
    w
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dqc1Reduction {
    pub source_n: usize,
    pub w_circuit: Circuit,
    /// Qubit 0 clean, qubits `1..n+3` hold `W`, qubit `n+3` is a borrowed
    /// wire for the multi-controlled X; every wire but qubit 0 is mixed.
    pub dqc1_circuit: Circuit,
}

/// Compiles `v` into a DQC1 circuit whose clean qubit reads 1 with
/// probability `4·p_W(1)·(1 - p_W(1)) / 2^{n+2}`.
///
/// The clean qubit is flipped exactly when the `W` register is `0^{n+2}`.
/// Between the two flips, `W · CZ(clean, w) · W†` maps `|1⟩|0…0⟩` to a
/// state whose `|0…0⟩` amplitude is `1 - 2·p_W(1)`, and leaves the
/// register untouched whenever the clean qubit is 0.
pub fn build_dqc1_reduction(v: &Circuit) -> Dqc1Reduction {
    let n = v.n_qubits();
    let w_circuit = build_w(v);
    let width = n + 2;
    let total = width + 2;
    let borrowed = total - 1;
    let register: Vec<usize> = (1..=width).collect();
    let flip = mcx::zero_controlled_x(&register, 0, Some(borrowed)).expect("a borrowed wire is supplied");

    let embedded = w_circuit.embedded(total, |q| q + 1).expect("register fits");
    let mut gates = flip.clone();
    gates.extend(embedded.gates().iter().cloned());
    gates.push(Gate::cz(0, 1));
    gates.extend(embedded.inverse().gates().iter().cloned());
    gates.extend(flip);
    let dqc1_circuit = Circuit::new(total, gates).expect("all targets lie inside the DQC1 circuit");
    Dqc1Reduction { source_n: n, w_circuit, dqc1_circuit }
}
