//! Line-oriented circuit text format.
//!
//! ```text
//! # comment
//! 3
//! H 0
//! CNOT 0 1
//! PZ 5 2
//! ```
//!
//! The first non-blank, non-comment line is the qubit count. Every other
//! line is a gate name followed by decimal qubit indices; `PZ` takes its
//! exponent `k` before the qubit.

use super::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};

fn kind_from_name(name: &str) -> Option<GateKind> {
    Some(match name {
        "H" => GateKind::H,
        "X" => GateKind::X,
        "Z" => GateKind::Z,
        "S" => GateKind::S,
        "T" => GateKind::T,
        "CNOT" => GateKind::Cnot,
        "CZ" => GateKind::Cz,
        "CCZ" => GateKind::Ccz,
        "Toffoli" => GateKind::Toffoli,
        "PZ" => GateKind::PhaseZ(0),
        _ => return None,
    })
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let err = |line: usize, message: String| Error::Parse { line, message };
    let parse_int = |line: usize, tok: &str| -> Result<usize> {
        tok.parse::<usize>().map_err(|_| err(line, format!("expected a non-negative integer, found {tok:?}")))
    };

    let mut n_qubits: Option<usize> = None;
    let mut gates = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let head = tokens.next().expect("non-empty line");
        let Some(n) = n_qubits else {
            if let Some(extra) = tokens.next() {
                return Err(err(line_no, format!("unexpected token {extra:?} after qubit count")));
            }
            let n = parse_int(line_no, head)?;
            if n == 0 {
                return Err(err(line_no, "qubit count must be positive".into()));
            }
            n_qubits = Some(n);
            continue;
        };

        let mut kind = kind_from_name(head).ok_or_else(|| err(line_no, format!("unknown gate {head:?}")))?;
        let mut args: Vec<usize> = tokens.map(|t| parse_int(line_no, t)).collect::<Result<_>>()?;
        if let GateKind::PhaseZ(_) = kind {
            if args.is_empty() {
                return Err(err(line_no, "PZ needs an exponent k and a qubit".into()));
            }
            let k = args.remove(0);
            if k >= 8 {
                return Err(err(line_no, format!("PZ exponent {k} outside 0..8")));
            }
            kind = GateKind::PhaseZ(k as u8);
        }
        if args.len() != kind.arity() {
            return Err(err(line_no, format!("{} takes {} qubit(s), got {}", kind.name(), kind.arity(), args.len())));
        }
        if let Some(&q) = args.iter().find(|&&q| q >= n) {
            return Err(err(line_no, format!("qubit index {q} out of range for {n} qubits")));
        }
        let gate = Gate::new(kind, args).map_err(|e| match e {
            Error::InvalidCircuit(m) => err(line_no, m),
            other => other,
        })?;
        gates.push(gate);
    }
    let n = n_qubits.ok_or_else(|| err(1, "missing qubit count".into()))?;
    Circuit::new(n, gates)
}

/// Canonical text: qubit count, then one gate per line, no trailing newline.
pub fn serialize_circuit(c: &Circuit) -> String {
    let mut out = c.n_qubits().to_string();
    for g in c.gates() {
        out.push('\n');
        out.push_str(&g.to_string());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{random_circuit, RandomCircuitConfig};
    use proptest::prelude::*;
    use rand::SeedableRng;

    #[test]
    fn parses_basic_circuit() {
        let c = parse_circuit("2\nH 0\nCNOT 0 1").unwrap();
        assert_eq!(c, Circuit::new(2, vec![Gate::h(0), Gate::cnot(0, 1)]).unwrap());
    }

    #[test]
    fn parses_empty_circuit() {
        assert_eq!(parse_circuit("1\n").unwrap(), Circuit::empty(1));
    }

    #[test]
    fn comments_blank_lines_and_phase() {
        let c = parse_circuit("# header\n\n3  # qubits\nPZ 5 2\n  CCZ 0 1 2 # tail\n").unwrap();
        assert_eq!(c.gates(), &[Gate::phase_z(5, 2), Gate::ccz(0, 1, 2)]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("1\nCZ 0 0", 2, "duplicate"),
            ("2\nH 0\nFOO 1", 3, "unknown gate"),
            ("2\nCNOT 0", 2, "takes 2"),
            ("2\nH 2", 2, "out of range"),
            ("2\nH x", 2, "integer"),
            ("1\nPZ 9 0", 2, "exponent"),
            ("two", 1, "integer"),
            ("", 1, "missing"),
        ];
        for (text, line, needle) in cases {
            match parse_circuit(text) {
                Err(Error::Parse { line: l, message }) => {
                    assert_eq!(l, line, "{text:?}");
                    assert!(message.contains(needle), "{text:?}: {message}");
                }
                other => panic!("{text:?}: expected parse error, got {other:?}"),
            }
        }
    }

    #[test]
    fn serializes_canonically() {
        assert_eq!(serialize_circuit(&Circuit::new(1, vec![Gate::h(0)]).unwrap()), "1\nH 0");
        assert_eq!(serialize_circuit(&Circuit::new(3, vec![Gate::ccz(0, 1, 2)]).unwrap()), "3\nCCZ 0 1 2");
    }

    #[test]
    fn round_trip_over_seeded_random_circuits() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for i in 0..100 {
            let cfg = RandomCircuitConfig { n_qubits: 1 + i % 5, n_gates: i % 12 };
            let c = random_circuit(&cfg, &mut rng);
            assert_eq!(parse_circuit(&serialize_circuit(&c)).unwrap(), c);
        }
    }

    proptest! {
        #[test]
        fn round_trip_identity(seed in any::<u64>(), n in 1usize..6, len in 0usize..20) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let c = random_circuit(&RandomCircuitConfig { n_qubits: n, n_gates: len }, &mut rng);
            prop_assert_eq!(parse_circuit(&serialize_circuit(&c)).unwrap(), c);
        }
    }
}
