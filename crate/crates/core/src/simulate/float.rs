//! Double-precision simulation, used only as an independent cross-check of
//! the exact engine.
//!
//! The DQC1 oracle evolves the full density matrix `ρ ↦ V ρ V†`, storing
//! `ρ` as a vector on `2n` qubits (row qubits first, then column qubits) so
//! that `V ρ V†` is `V` on the rows and the conjugate `V̄` on the columns.

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate, GateKind};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn omega(k: i32) -> Complex64 {
    Complex64::from_polar(1.0, f64::from(k.rem_euclid(8)) * std::f64::consts::FRAC_PI_4)
}

/// Applies `g` (or its complex conjugate) to the qubits `offset..offset+n`
/// of a state on `total` qubits, qubit 0 being the most significant bit.
fn apply(state: &mut [Complex64], total: usize, offset: usize, g: &Gate, conjugate: bool) {
    let mask = |q: usize| 1usize << (total - 1 - offset - q);
    let t: Vec<usize> = g.targets().iter().map(|&q| mask(q)).collect();
    let sign = if conjugate { -1 } else { 1 };
    let phase_where = |state: &mut [Complex64], k: i32, sel: &dyn Fn(usize) -> bool| {
        let w = omega(sign * k);
        for (i, a) in state.iter_mut().enumerate() {
            if sel(i) {
                *a *= w;
            }
        }
    };
    let swap_where = |state: &mut [Complex64], flip: usize, sel: &dyn Fn(usize) -> bool| {
        for i in 0..state.len() {
            if i & flip == 0 && sel(i) {
                state.swap(i, i | flip);
            }
        }
    };
    match g.kind() {
        GateKind::H => {
            for i in 0..state.len() {
                if i & t[0] == 0 {
                    let (a, b) = (state[i], state[i | t[0]]);
                    state[i] = (a + b) * FRAC_1_SQRT_2;
                    state[i | t[0]] = (a - b) * FRAC_1_SQRT_2;
                }
            }
        }
        GateKind::X => swap_where(state, t[0], &|_| true),
        GateKind::Cnot => swap_where(state, t[1], &|i| i & t[0] != 0),
        GateKind::Toffoli => swap_where(state, t[2], &|i| i & t[0] != 0 && i & t[1] != 0),
        GateKind::Z => phase_where(state, 4, &|i| i & t[0] != 0),
        GateKind::S => phase_where(state, 2, &|i| i & t[0] != 0),
        GateKind::T => phase_where(state, 1, &|i| i & t[0] != 0),
        GateKind::Cz => {
            let m = t[0] | t[1];
            phase_where(state, 4, &|i| i & m == m)
        }
        GateKind::Ccz => {
            let m = t[0] | t[1] | t[2];
            phase_where(state, 4, &|i| i & m == m)
        }
        GateKind::PhaseZ(k) => {
            let k = i32::from(k);
            phase_where(state, k, &|i| i & t[0] == 0);
            phase_where(state, -k, &|i| i & t[0] != 0);
        }
    }
}

/// The state `c|0^n⟩` in double precision.
pub fn statevector(c: &Circuit) -> Vec<Complex64> {
    let n = c.n_qubits();
    let mut state = vec![Complex64::new(0.0, 0.0); 1 << n];
    state[0] = Complex64::new(1.0, 0.0);
    for g in c.gates() {
        apply(&mut state, n, 0, g, false);
    }
    state
}

/// Probability that qubit 0 reads 1 after `c` acts on `|0^n⟩`.
pub fn acceptance_probability(c: &Circuit) -> f64 {
    let n = c.n_qubits();
    let top = 1usize << (n - 1);
    statevector(c).iter().enumerate().filter(|(i, _)| i & top != 0).map(|(_, a)| a.norm_sqr()).sum()
}

/// DQC1 probability of reading 1 on qubit 0, by density-matrix evolution.
pub fn dqc1_p1(c: &Circuit) -> f64 {
    let n = c.n_qubits();
    let dim = 1usize << n;
    let top = dim >> 1;
    let mut rho = vec![Complex64::new(0.0, 0.0); dim * dim];
    let weight = 1.0 / top as f64;
    for r in 0..top {
        rho[r * dim + r] = Complex64::new(weight, 0.0);
    }
    for g in c.gates() {
        apply(&mut rho, 2 * n, 0, g, false);
        apply(&mut rho, 2 * n, n, g, true);
    }
    (top..dim).map(|r| rho[r * dim + r].re).sum()
}
