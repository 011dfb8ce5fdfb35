//! Circuit representation over the fixed gate set
//! {H, X, Z, S, T, CNOT, CZ, CCZ, Toffoli, PZ(k)}.
//!
//! Qubit 0 is the measured qubit (the clean qubit in DQC1 terms) everywhere
//! in this crate. `PZ(k)` is `exp(i·kπ/4·Z) = diag(ω^k, ω^-k)`.

mod decompose;
mod iqp;
pub mod mcx;
mod random;
mod text;

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub use decompose::decompose_to_h_diagonal;
pub use iqp::{is_iqp_form, IqpForm};
pub use random::{random_circuit, RandomCircuitConfig};
pub use text::{parse_circuit, serialize_circuit};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    X,
    Z,
    S,
    T,
    Cnot,
    Cz,
    Ccz,
    Toffoli,
    /// `exp(i·kπ/4·Z)`, `k` in `0..8`.
    PhaseZ(u8),
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::H | GateKind::X | GateKind::Z | GateKind::S | GateKind::T | GateKind::PhaseZ(_) => 1,
            GateKind::Cnot | GateKind::Cz => 2,
            GateKind::Ccz | GateKind::Toffoli => 3,
        }
    }

    /// Diagonal in the computational basis.
    pub fn is_diagonal(self) -> bool {
        matches!(self, GateKind::Z | GateKind::S | GateKind::T | GateKind::Cz | GateKind::Ccz | GateKind::PhaseZ(_))
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Z => "Z",
            GateKind::S => "S",
            GateKind::T => "T",
            GateKind::Cnot => "CNOT",
            GateKind::Cz => "CZ",
            GateKind::Ccz => "CCZ",
            GateKind::Toffoli => "Toffoli",
            GateKind::PhaseZ(_) => "PZ",
        }
    }
}

/// A gate with its target qubits. For CNOT and Toffoli the last target is
/// the one flipped; the others are controls.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gate {
    kind: GateKind,
    targets: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, targets: Vec<usize>) -> Result<Self> {
        if let GateKind::PhaseZ(k) = kind {
            if k >= 8 {
                return Err(Error::InvalidCircuit(format!("PZ exponent {k} outside 0..8")));
            }
        }
        if targets.len() != kind.arity() {
            return Err(Error::InvalidCircuit(format!(
                "{} takes {} qubit(s), got {}",
                kind.name(),
                kind.arity(),
                targets.len()
            )));
        }
        for (i, t) in targets.iter().enumerate() {
            if targets[..i].contains(t) {
                return Err(Error::InvalidCircuit(format!("duplicate target index {t} in {}", kind.name())));
            }
        }
        Ok(Gate { kind, targets })
    }

    pub fn h(q: usize) -> Self {
        Gate { kind: GateKind::H, targets: vec![q] }
    }
    pub fn x(q: usize) -> Self {
        Gate { kind: GateKind::X, targets: vec![q] }
    }
    pub fn z(q: usize) -> Self {
        Gate { kind: GateKind::Z, targets: vec![q] }
    }
    pub fn s(q: usize) -> Self {
        Gate { kind: GateKind::S, targets: vec![q] }
    }
    pub fn t(q: usize) -> Self {
        Gate { kind: GateKind::T, targets: vec![q] }
    }
    pub fn phase_z(k: u8, q: usize) -> Self {
        Gate::new(GateKind::PhaseZ(k), vec![q]).expect("valid PZ")
    }
    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::new(GateKind::Cnot, vec![control, target]).expect("distinct CNOT qubits")
    }
    pub fn cz(a: usize, b: usize) -> Self {
        Gate::new(GateKind::Cz, vec![a, b]).expect("distinct CZ qubits")
    }
    pub fn ccz(a: usize, b: usize, c: usize) -> Self {
        Gate::new(GateKind::Ccz, vec![a, b, c]).expect("distinct CCZ qubits")
    }
    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Self {
        Gate::new(GateKind::Toffoli, vec![c1, c2, target]).expect("distinct Toffoli qubits")
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    /// The same gate with every qubit index sent through `map`.
    pub fn remapped(&self, map: impl Fn(usize) -> usize) -> Gate {
        Gate { kind: self.kind, targets: self.targets.iter().map(|&q| map(q)).collect() }
    }

    /// Gates whose product (in order) is this gate's inverse.
    pub fn inverse(&self) -> Vec<Gate> {
        let q = || self.targets[0];
        match self.kind {
            // S† = Z·S, T† = Z·S·T; all diagonal so order is irrelevant.
            GateKind::S => vec![Gate::s(q()), Gate::z(q())],
            GateKind::T => vec![Gate::t(q()), Gate::s(q()), Gate::z(q())],
            GateKind::PhaseZ(k) => vec![Gate::phase_z((8 - k) % 8, q())],
            _ => vec![self.clone()],
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        if let GateKind::PhaseZ(k) = self.kind {
            write!(f, " {k}")?;
        }
        for t in &self.targets {
            write!(f, " {t}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidCircuit("a circuit needs at least one qubit".into()));
        }
        for g in &gates {
            if let Some(&q) = g.targets.iter().find(|&&q| q >= n_qubits) {
                return Err(Error::InvalidCircuit(format!("{g}: qubit {q} out of range for {n_qubits} qubits")));
            }
        }
        Ok(Circuit { n_qubits, gates })
    }

    pub fn empty(n_qubits: usize) -> Self {
        Circuit::new(n_qubits, Vec::new()).expect("positive qubit count")
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if let Some(&q) = gate.targets.iter().find(|&&q| q >= self.n_qubits) {
            return Err(Error::InvalidCircuit(format!("{gate}: qubit {q} out of range for {} qubits", self.n_qubits)));
        }
        self.gates.push(gate);
        Ok(())
    }

    /// The inverse circuit.
    pub fn inverse(&self) -> Circuit {
        let gates = self.gates.iter().rev().flat_map(Gate::inverse).collect();
        Circuit { n_qubits: self.n_qubits, gates }
    }

    /// Embeds this circuit into `n_qubits` wires, qubit `i` going to `map(i)`.
    pub fn embedded(&self, n_qubits: usize, map: impl Fn(usize) -> usize) -> Result<Circuit> {
        Circuit::new(n_qubits, self.gates.iter().map(|g| g.remapped(&map)).collect())
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_circuit(self))
    }
}

impl Serialize for Circuit {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&serialize_circuit(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_validation() {
        assert!(Gate::new(GateKind::Cz, vec![0, 0]).is_err());
        assert!(Gate::new(GateKind::H, vec![0, 1]).is_err());
        assert!(Gate::new(GateKind::PhaseZ(8), vec![0]).is_err());
        assert!(Gate::new(GateKind::Toffoli, vec![2, 0, 1]).is_ok());
    }

    #[test]
    fn circuit_validation() {
        assert!(Circuit::new(0, vec![]).is_err());
        assert!(Circuit::new(2, vec![Gate::cnot(0, 2)]).is_err());
        let mut c = Circuit::empty(1);
        assert!(c.push(Gate::x(1)).is_err());
        assert!(c.push(Gate::x(0)).is_ok());
    }

    #[test]
    fn inverse_reverses_and_conjugates_phases() {
        let c = Circuit::new(2, vec![Gate::h(0), Gate::phase_z(3, 1), Gate::cnot(0, 1)]).unwrap();
        let inv = c.inverse();
        assert_eq!(inv.gates()[0], Gate::cnot(0, 1));
        assert_eq!(inv.gates()[1], Gate::phase_z(5, 1));
        assert_eq!(inv.gates()[2], Gate::h(0));
    }
}
