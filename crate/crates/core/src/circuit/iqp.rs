use super::{Circuit, Gate};
use crate::error::{Error, Result};

/// An IQP circuit `H^⊗n · U · H^⊗n` with `U` given as its diagonal gates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IqpForm {
    n_qubits: usize,
    diagonal_gates: Vec<Gate>,
}

impl IqpForm {
    pub fn new(n_qubits: usize, diagonal_gates: Vec<Gate>) -> Result<Self> {
        if let Some(g) = diagonal_gates.iter().find(|g| !g.kind().is_diagonal()) {
            return Err(Error::InvalidCircuit(format!("{g} is not Z-diagonal")));
        }
        // validates qubit ranges
        Circuit::new(n_qubits, diagonal_gates.clone())?;
        Ok(IqpForm { n_qubits, diagonal_gates })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn diagonal_gates(&self) -> &[Gate] {
        &self.diagonal_gates
    }

    /// The explicit circuit `H^⊗n · U · H^⊗n`.
    pub fn to_circuit(&self) -> Circuit {
        let n = self.n_qubits;
        let gates = (0..n).map(Gate::h).chain(self.diagonal_gates.iter().cloned()).chain((0..n).map(Gate::h)).collect();
        Circuit::new(n, gates).expect("validated on construction")
    }
}

/// Recognizes the literal layout "one H per qubit, diagonal gates, one H per
/// qubit". The H layers may list qubits in any order.
pub fn is_iqp_form(c: &Circuit) -> Option<IqpForm> {
    let n = c.n_qubits();
    let gates = c.gates();
    if gates.len() < 2 * n {
        return None;
    }
    let is_h_layer = |layer: &[Gate]| {
        let mut seen = vec![false; n];
        layer.iter().all(|g| g.kind() == super::GateKind::H && !std::mem::replace(&mut seen[g.targets()[0]], true))
    };
    let (first, rest) = gates.split_at(n);
    let (middle, last) = rest.split_at(rest.len() - n);
    if !is_h_layer(first) || !is_h_layer(last) || !middle.iter().all(|g| g.kind().is_diagonal()) {
        return None;
    }
    Some(IqpForm { n_qubits: n, diagonal_gates: middle.to_vec() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circ(n: usize, gates: Vec<Gate>) -> Circuit {
        Circuit::new(n, gates).unwrap()
    }

    #[test]
    fn recognizes_iqp_layouts() {
        let f = is_iqp_form(&circ(1, vec![Gate::h(0), Gate::z(0), Gate::h(0)])).unwrap();
        assert_eq!(f.diagonal_gates(), &[Gate::z(0)]);
        let f = is_iqp_form(&circ(2, vec![Gate::h(0), Gate::h(1), Gate::cz(0, 1), Gate::h(0), Gate::h(1)])).unwrap();
        assert_eq!(f.diagonal_gates(), &[Gate::cz(0, 1)]);
        let f = is_iqp_form(&circ(1, vec![Gate::h(0), Gate::h(0)])).unwrap();
        assert!(f.diagonal_gates().is_empty());
    }

    #[test]
    fn rejects_non_iqp() {
        assert!(is_iqp_form(&circ(1, vec![Gate::h(0), Gate::x(0), Gate::h(0)])).is_none());
        assert!(is_iqp_form(&circ(2, vec![Gate::h(0), Gate::h(0), Gate::h(0), Gate::h(1)])).is_none());
        assert!(is_iqp_form(&circ(1, vec![])).is_none());
        assert!(is_iqp_form(&circ(2, vec![Gate::h(0), Gate::h(1), Gate::h(0)])).is_none());
    }

    #[test]
    fn round_trip_through_circuit() {
        let f = IqpForm::new(2, vec![Gate::cz(0, 1), Gate::t(1)]).unwrap();
        assert_eq!(is_iqp_form(&f.to_circuit()), Some(f));
        assert!(IqpForm::new(1, vec![Gate::h(0)]).is_err());
    }
}
