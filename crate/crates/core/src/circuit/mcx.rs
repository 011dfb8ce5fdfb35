//! Multi-controlled X expanded into Toffoli ladders over borrowed wires.
//!
//! Borrowed ("dirty") wires may hold any state, including a maximally mixed
//! one, and are returned unchanged. That matters for DQC1 circuits, where
//! every wire except qubit 0 starts mixed and no clean ancilla exists.

use super::Gate;
use crate::error::{Error, Result};

/// `X` on `target` when every control is 1, using `dirty.len() >= m - 2`
/// borrowed wires (`m` controls); `4(m-2)` Toffolis for `m >= 3`.
fn ladder(controls: &[usize], target: usize, dirty: &[usize]) -> Vec<Gate> {
    let m = controls.len();
    match m {
        0 => return vec![Gate::x(target)],
        1 => return vec![Gate::cnot(controls[0], target)],
        2 => return vec![Gate::toffoli(controls[0], controls[1], target)],
        _ => {}
    }
    assert!(dirty.len() >= m - 2, "ladder needs {} borrowed wires, got {}", m - 2, dirty.len());
    let a = &dirty[..m - 2];
    // i = m-1 down to 2: Toffoli(c[i], a[i-2] -> t or a[i-1])
    let chain: Vec<Gate> = (2..m)
        .rev()
        .map(|i| {
            let out = if i == m - 1 { target } else { a[i - 1] };
            Gate::toffoli(controls[i], a[i - 2], out)
        })
        .collect();
    let base = Gate::toffoli(controls[0], controls[1], a[0]);

    let mut gates = Vec::with_capacity(4 * (m - 2));
    gates.extend(chain.iter().cloned());
    gates.push(base.clone());
    gates.extend(chain.iter().rev().cloned());
    // second pass restores the borrowed wires
    gates.extend(chain[1..].iter().cloned());
    gates.push(base);
    gates.extend(chain[1..].iter().rev().cloned());
    gates
}

/// `X` on `target` when every control is 1.
///
/// Three or more controls need one extra wire, `ancilla`, which is borrowed
/// and restored. The controls are split in two halves that each borrow the
/// other half as ladder scratch.
pub fn multi_controlled_x(controls: &[usize], target: usize, ancilla: Option<usize>) -> Result<Vec<Gate>> {
    let m = controls.len();
    if m <= 2 {
        return Ok(ladder(controls, target, &[]));
    }
    let anc = ancilla.ok_or_else(|| Error::InvalidCircuit(format!("{m}-controlled X needs a borrowed ancilla")))?;
    let m1 = m.div_ceil(2);
    let (left, right) = controls.split_at(m1);

    let mut scratch1: Vec<usize> = right.to_vec();
    scratch1.push(target);
    let sub1 = ladder(left, anc, &scratch1);

    let mut controls2 = right.to_vec();
    controls2.push(anc);
    let sub2 = ladder(&controls2, target, left);

    Ok([sub1.clone(), sub2.clone(), sub1, sub2].concat())
}

/// `X` on `target` when every control is 0: the positive-control version
/// conjugated by `X` on each control.
pub fn zero_controlled_x(controls: &[usize], target: usize, ancilla: Option<usize>) -> Result<Vec<Gate>> {
    let flips: Vec<Gate> = controls.iter().map(|&q| Gate::x(q)).collect();
    let core = multi_controlled_x(controls, target, ancilla)?;
    Ok([flips.clone(), core, flips].concat())
}
