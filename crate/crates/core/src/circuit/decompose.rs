use super::{Circuit, Gate, GateKind};

/// Rewrites `c` over H and Z-diagonal gates only:
/// `X ↦ H·Z·H`, `CNOT ↦ H_t·CZ·H_t`, `Toffoli ↦ H_t·CCZ·H_t`.
pub fn decompose_to_h_diagonal(c: &Circuit) -> Circuit {
    let mut gates = Vec::with_capacity(c.len());
    for g in c.gates() {
        let t = g.targets();
        match g.kind() {
            GateKind::X => gates.extend([Gate::h(t[0]), Gate::z(t[0]), Gate::h(t[0])]),
            GateKind::Cnot => gates.extend([Gate::h(t[1]), Gate::cz(t[0], t[1]), Gate::h(t[1])]),
            GateKind::Toffoli => gates.extend([Gate::h(t[2]), Gate::ccz(t[0], t[1], t[2]), Gate::h(t[2])]),
            _ => gates.push(g.clone()),
        }
    }
    Circuit::new(c.n_qubits(), gates).expect("same qubits as the source")
}
