use serde::Serialize;

use crate::circuit::{decompose_to_h_diagonal, Circuit, Gate, GateKind, IqpForm};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IqpReduction {
    pub source_n: usize,
    /// Wires `0..s` are the gadget wires postselected on 1; wire `s + j`
    /// carries the final state of source qubit `j`.
    #[serde(serialize_with = "serialize_form")]
    pub iqp: IqpForm,
    pub s: usize,
    pub postselect_count: usize,
}

fn serialize_form<S: serde::Serializer>(f: &IqpForm, serializer: S) -> Result<S::Ok, S::Error> {
    f.to_circuit().serialize(serializer)
}

struct Compiler {
    gates: Vec<Gate>,
    wires: usize,
    current: Vec<usize>,
    consumed: Vec<usize>,
}

impl Compiler {
    /// Replaces a Hadamard on logical qubit `q` by a fresh wire `b`:
    /// `CZ(a, b)`, then `Z(a)` so that wire `a` is postselected on 1 after
    /// the final H layer, leaving `H|ψ⟩/√2` on `b`.
    fn gadget(&mut self, q: usize) {
        let a = self.current[q];
        let b = self.wires;
        self.wires += 1;
        self.gates.push(Gate::cz(a, b));
        self.gates.push(Gate::z(a));
        self.consumed.push(a);
        self.current[q] = b;
    }
}

/// Compiles `v` into an IQP circuit whose postselected output satisfies
/// `(⟨1^s| ⊗ I) W |0^{n+s}⟩ = 2^{-s/2} · V|0^n⟩` up to a phase `ω^k`, so
/// that `p^{IQP,s+1}(1) = p_V(1) / 2^s`.
///
/// After decomposing into H and diagonal gates, a qubit's first Hadamard is
/// absorbed into the initial H layer and its last one into the final layer;
/// every other Hadamard becomes a gadget. A qubit whose gate list does not
/// start (or end) with a Hadamard gets one extra gadget there, since
/// `H·H = I` lets the layer and the gadget cancel.
pub fn build_iqp_reduction(v: &Circuit) -> IqpReduction {
    let n = v.n_qubits();
    let d = decompose_to_h_diagonal(v);
    let gates = d.gates();

    let touching = |q: usize| gates.iter().enumerate().filter(move |(_, g)| g.targets().contains(&q)).map(|(i, _)| i);
    let first: Vec<Option<usize>> = (0..n).map(|q| touching(q).next()).collect();
    let last: Vec<Option<usize>> = (0..n).map(|q| touching(q).next_back()).collect();
    let is_h = |i: usize| gates[i].kind() == GateKind::H;
    let absorb_start: Vec<bool> = first.iter().map(|f| f.is_some_and(is_h)).collect();
    let absorb_end: Vec<bool> = (0..n)
        .map(|q| match (first[q], last[q]) {
            (Some(f), Some(l)) => is_h(l) && !(l == f && absorb_start[q]),
            _ => false,
        })
        .collect();

    let mut c = Compiler { gates: Vec::new(), wires: n, current: (0..n).collect(), consumed: Vec::new() };
    for q in 0..n {
        if first[q].is_some() && !absorb_start[q] {
            c.gadget(q);
        }
    }
    for (i, g) in gates.iter().enumerate() {
        if g.kind() == GateKind::H {
            let q = g.targets()[0];
            let absorbed = (first[q] == Some(i) && absorb_start[q]) || (last[q] == Some(i) && absorb_end[q]);
            if !absorbed {
                c.gadget(q);
            }
        } else {
            c.gates.push(g.remapped(|q| c.current[q]));
        }
    }
    for q in 0..n {
        if last[q].is_some() && !absorb_end[q] {
            c.gadget(q);
        }
    }

    let s = c.consumed.len();
    let mut position = vec![0usize; c.wires];
    for (i, &w) in c.consumed.iter().enumerate() {
        position[w] = i;
    }
    for (j, &w) in c.current.iter().enumerate() {
        position[w] = s + j;
    }
    let diagonal = c.gates.iter().map(|g| g.remapped(|w| position[w])).collect();
    let iqp = IqpForm::new(s + n, diagonal).expect("compiled gates are diagonal and in range");
    IqpReduction { source_n: n, iqp, s, postselect_count: s + 1 }
}
