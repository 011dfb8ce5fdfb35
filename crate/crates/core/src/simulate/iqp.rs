//! Exact IQP amplitudes from the phase polynomial of the diagonal part.
//!
//! For `V = H^⊗N · U · H^⊗N` with `U|x⟩ = ω^{k(x)}|x⟩`,
//!
//! ```text
//! ⟨z|V|0^N⟩ = 2^-N · Σ_x (-1)^{z·x} ω^{k(x)}
//! ```
//!
//! and `k(x)` is a cubic polynomial over Z_8. Inputs are walked in Gray
//! code order, so each step flips one variable and updates `k` by the few
//! terms touching it. For an outcome `z = 1^m t` the prefix sum
//! `g(y) = Σ_{x_pre} (-1)^{|x_pre|} ω^{k(x_pre, y)}` is collected per
//! suffix `y`; the marginal probability then follows from Parseval,
//! `Σ_t |amp(1^m t)|² = Σ_y |g(y)|² / 2^{N+m}`, without storing `g`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use super::BinaryDistribution;
use crate::circuit::{GateKind, IqpForm};
use crate::error::{Error, Result};
use crate::exact::{ExactAmplitude, ExactReal};

/// Largest IQP width accepted by [`iqp_marginal_distribution`].
pub const DEFAULT_IQP_BOUND: usize = 30;

/// `k(x) = constant + Σ_terms coef · Π_{q ∈ term} x_q  (mod 8)`.
pub(crate) struct PhasePolynomial {
    n: usize,
    constant: u8,
    /// For each variable, the terms containing it as (coef, mask of the
    /// other variables in the term). Bit q of a mask is variable q.
    by_var: Vec<Vec<(u8, u64)>>,
}

impl PhasePolynomial {
    pub(crate) fn from_iqp(f: &IqpForm) -> Self {
        let mut constant = 0u8;
        let mut terms: BTreeMap<u64, u8> = BTreeMap::new();
        let mut add = |mask: u64, coef: u8| {
            let e = terms.entry(mask).or_insert(0);
            *e = (*e + coef) % 8;
        };
        for g in f.diagonal_gates() {
            let t = g.targets();
            let mask: u64 = t.iter().map(|&q| 1u64 << q).sum();
            match g.kind() {
                GateKind::Z | GateKind::Cz | GateKind::Ccz => add(mask, 4),
                GateKind::S => add(mask, 2),
                GateKind::T => add(mask, 1),
                GateKind::PhaseZ(k) => {
                    // diag(ω^k, ω^-k) = ω^{k - 2k·x}
                    constant = (constant + k) % 8;
                    add(mask, (16 - 2 * k) % 8);
                }
                other => unreachable!("IqpForm holds only diagonal gates, found {other:?}"),
            }
        }
        let n = f.n_qubits();
        let mut by_var = vec![Vec::new(); n];
        for (&mask, &coef) in terms.iter().filter(|(_, &c)| c != 0) {
            for (q, bucket) in by_var.iter_mut().enumerate() {
                if mask >> q & 1 == 1 {
                    bucket.push((coef, mask & !(1 << q)));
                }
            }
        }
        PhasePolynomial { n, constant, by_var }
    }

    #[cfg(test)]
    pub(crate) fn eval(&self, x: u64) -> u8 {
        // each term is counted once, via its lowest variable
        let mut k = self.constant as u32;
        for (q, terms) in self.by_var.iter().enumerate() {
            if x >> q & 1 == 0 {
                continue;
            }
            for &(coef, others) in terms {
                let lowest_other = if others == 0 { usize::MAX } else { others.trailing_zeros() as usize };
                if lowest_other > q && x & others == others {
                    k += coef as u32;
                }
            }
        }
        (k % 8) as u8
    }

    /// Visits every suffix assignment of variables `m..n` once, passing the
    /// suffix (as a variable mask) and the eight signed counts
    /// `c[j] = Σ_{x_pre : k(x) = j} (-1)^{|x_pre|}`.
    fn for_each_suffix(&self, m: usize, mut visit: impl FnMut(u64, &[i64; 8])) {
        let n = self.n;
        let block = 1u64 << m;
        let mut x: u64 = 0;
        let mut k = self.constant;
        let mut parity = false;
        let mut counts = [0i64; 8];
        for step in 0..(1u64 << n) {
            if step > 0 {
                let q = step.trailing_zeros() as usize;
                let rising = x >> q & 1 == 0;
                x ^= 1 << q;
                let mut delta = 0u32;
                for &(coef, others) in &self.by_var[q] {
                    if x & others == others {
                        delta += coef as u32;
                    }
                }
                let delta = (delta % 8) as u8;
                k = if rising { (k + delta) % 8 } else { (k + 8 - delta) % 8 };
                if q < m {
                    parity = !parity;
                }
            }
            counts[k as usize] += if parity { -1 } else { 1 };
            if (step + 1) % block == 0 {
                visit(x >> m, &counts);
                counts = [0; 8];
            }
        }
    }
}

fn to_zomega(counts: &[i64; 8]) -> [i64; 4] {
    [counts[0] - counts[4], counts[1] - counts[5], counts[2] - counts[6], counts[3] - counts[7]]
}

fn check(f: &IqpForm, m: usize, min_m: usize, bound: usize) -> Result<()> {
    let n = f.n_qubits();
    if m < min_m || m > n {
        return Err(Error::InvalidInput(format!("postselection size m = {m} outside {min_m}..={n}")));
    }
    if n > bound {
        return Err(Error::BoundExceeded { what: "exact IQP evaluation", required: n, bound });
    }
    Ok(())
}

pub fn iqp_marginal_distribution(f: &IqpForm, m: usize) -> Result<BinaryDistribution> {
    iqp_marginal_distribution_with_bound(f, m, DEFAULT_IQP_BOUND)
}

/// Distribution of "the first `m` qubits all read 1" for `H^⊗n U H^⊗n|0^n⟩`.
pub fn iqp_marginal_distribution_with_bound(f: &IqpForm, m: usize, bound: usize) -> Result<BinaryDistribution> {
    check(f, m, 1, bound)?;
    let poly = PhasePolynomial::from_iqp(f);
    let (mut u, mut v) = (BigInt::from(0), BigInt::from(0));
    let (mut su, mut sv) = (0i128, 0i128);
    poly.for_each_suffix(m, |_, counts| {
        let [c0, c1, c2, c3] = to_zomega(counts).map(i128::from);
        su += c0 * c0 + c1 * c1 + c2 * c2 + c3 * c3;
        sv += c0 * c1 - c0 * c3 + c1 * c2 + c2 * c3;
        // flush well before i128 could overflow
        if su.abs() > 1 << 100 || sv.abs() > 1 << 100 {
            u += su;
            v += sv;
            su = 0;
            sv = 0;
        }
    });
    u += su;
    v += sv;
    let n = f.n_qubits();
    let p1 = ExactReal::new(u, v, BigInt::one() << (n + m));
    BinaryDistribution::from_p1(p1)
}

/// Amplitudes `⟨1^m t|V|0^n⟩` for every `t ∈ {0,1}^{n-m}`, indexed with
/// qubit `m` as the most significant bit of `t`. With `m = 0` this is the
/// whole output state.
pub fn iqp_postselected_amplitudes(f: &IqpForm, m: usize) -> Result<Vec<ExactAmplitude>> {
    check(f, m, 0, DEFAULT_IQP_BOUND)?;
    let n = f.n_qubits();
    let rest = n - m;
    let poly = PhasePolynomial::from_iqp(f);
    let mut g = vec![[0i64; 4]; 1 << rest];
    poly.for_each_suffix(m, |suffix_mask, counts| {
        // variable m+j sits at bit (rest-1-j) of the output index
        let idx = (0..rest).filter(|j| suffix_mask >> j & 1 == 1).map(|j| 1usize << (rest - 1 - j)).sum::<usize>();
        g[idx] = to_zomega(counts);
    });
    // Walsh-Hadamard transform over the suffix
    let mut h = 1;
    while h < g.len() {
        for i in 0..g.len() {
            if i & h == 0 {
                let (a, b) = (g[i], g[i | h]);
                for c in 0..4 {
                    g[i][c] = a[c] + b[c];
                    g[i | h][c] = a[c] - b[c];
                }
            }
        }
        h <<= 1;
    }
    Ok(g.into_iter().map(|c| ExactAmplitude::from_i64(c, 2 * n as u32)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{random_circuit, Gate, RandomCircuitConfig};
    use crate::simulate::run_statevector;
    use crate::BitString;
    use rand::{Rng, SeedableRng};

    fn form(n: usize, gates: Vec<Gate>) -> IqpForm {
        IqpForm::new(n, gates).unwrap()
    }

    #[test]
    fn marginal_examples() {
        // H Z H = X
        let d = iqp_marginal_distribution(&form(1, vec![Gate::z(0)]), 1).unwrap();
        assert_eq!(d, BinaryDistribution::certain(true));
        let d = iqp_marginal_distribution(&form(1, vec![]), 1).unwrap();
        assert_eq!(d, BinaryDistribution::certain(false));
        let d = iqp_marginal_distribution(&form(2, vec![Gate::cz(0, 1)]), 2).unwrap();
        assert_eq!(d.p1(), &ExactReal::ratio(1, 4));
    }

    #[test]
    fn m_out_of_range() {
        assert!(iqp_marginal_distribution(&form(2, vec![]), 0).is_err());
        assert!(iqp_marginal_distribution(&form(2, vec![]), 3).is_err());
    }

    fn random_diagonal_form(rng: &mut impl Rng, n: usize) -> IqpForm {
        let c = random_circuit(&RandomCircuitConfig { n_qubits: n, n_gates: 12 }, rng);
        let diag = c.gates().iter().filter(|g| g.kind().is_diagonal()).cloned().collect();
        form(n, diag)
    }

    #[test]
    fn gray_code_phase_tracking_matches_direct_evaluation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let f = random_diagonal_form(&mut rng, 5);
            let poly = PhasePolynomial::from_iqp(&f);
            // brute force: ω^{k(x)} from exact diagonal action on |x⟩
            for x in 0..32u64 {
                let mut amp = ExactAmplitude::one();
                for g in f.diagonal_gates() {
                    let bit = |q: usize| x >> q & 1 == 1;
                    let t = g.targets();
                    let k = match g.kind() {
                        GateKind::Z if bit(t[0]) => 4,
                        GateKind::S if bit(t[0]) => 2,
                        GateKind::T if bit(t[0]) => 1,
                        GateKind::Cz if t.iter().all(|&q| bit(q)) => 4,
                        GateKind::Ccz if t.iter().all(|&q| bit(q)) => 4,
                        GateKind::PhaseZ(k) => {
                            if bit(t[0]) {
                                (8 - k) % 8
                            } else {
                                k
                            }
                        }
                        _ => 0,
                    };
                    amp = amp.mul_omega(k);
                }
                assert_eq!(amp, ExactAmplitude::omega_pow(poly.eval(x)));
            }
        }
    }

    #[test]
    fn agrees_with_statevector_engine() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for trial in 0..30 {
            let n = 1 + trial % 5;
            let f = random_diagonal_form(&mut rng, n);
            let sv = run_statevector(&f.to_circuit(), &BitString::zeros(n)).unwrap();
            for m in 0..=n {
                let ones = ((1usize << m) - 1) << (n - m);
                if m > 0 {
                    let expected = sv.weight_where(|i| i & ones == ones);
                    let got = iqp_marginal_distribution(&f, m).unwrap();
                    assert_eq!(got.p1(), &expected, "n={n} m={m}");
                }
                let amps = iqp_postselected_amplitudes(&f, m).unwrap();
                for (t, a) in amps.iter().enumerate() {
                    assert_eq!(*a, sv.amplitude(ones | t), "n={n} m={m} t={t}");
                }
            }
        }
    }
}
