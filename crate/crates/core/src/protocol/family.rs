use crate::bits::BitString;
use crate::circuit::{Circuit, Gate};
use crate::error::Result;

/// A uniformly generated circuit family `x ↦ V_x`.
pub trait CircuitFamily: Send + Sync {
    fn name(&self) -> String;
    fn circuit(&self, x: &BitString) -> Result<Circuit>;
}

/// Two-qubit circuits: bit `i` of `x` appends the `i mod 8`-th gate of a
/// fixed cycle. Different parameters give a spread of DQC1 distributions,
/// including `(1, 0)` for `x = 0…0` and `(0, 1)` for `x = 10…0`.
#[derive(Clone, Copy, Debug, Default)]
pub struct GateCycleFamily;

impl GateCycleFamily {
    fn cycle() -> [Gate; 8] {
        [Gate::x(0), Gate::h(0), Gate::t(0), Gate::h(0), Gate::cnot(1, 0), Gate::cz(0, 1), Gate::s(0), Gate::h(0)]
    }
}

impl CircuitFamily for GateCycleFamily {
    fn name(&self) -> String {
        "gates".into()
    }

    fn circuit(&self, x: &BitString) -> Result<Circuit> {
        let cycle = Self::cycle();
        let gates = x.bits().iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| cycle[i % 8].clone()).collect();
        Circuit::new(2, gates)
    }
}

/// One qubit with an `X` per set bit, so `p1` is the parity of `x`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ParityFamily;

impl CircuitFamily for ParityFamily {
    fn name(&self) -> String {
        "parity".into()
    }

    fn circuit(&self, x: &BitString) -> Result<Circuit> {
        Circuit::new(1, vec![Gate::x(0); x.count_ones()])
    }
}

/// Every parameter names the same circuit.
#[derive(Clone, Debug)]
pub struct FixedFamily {
    pub circuit: Circuit,
}

impl CircuitFamily for FixedFamily {
    fn name(&self) -> String {
        "fixed".into()
    }

    fn circuit(&self, _x: &BitString) -> Result<Circuit> {
        Ok(self.circuit.clone())
    }
}
