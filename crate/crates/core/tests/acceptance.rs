//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status
//! if any criterion fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use blindlab_core::circuit::{random_circuit, Circuit, Gate, GateKind, RandomCircuitConfig};
use blindlab_core::exact::{ExactAmplitude, ExactReal};
use blindlab_core::extract::{all_demo, extract_decide, extract_run_once, make_advice, ResponseMode, TruthTable};
use blindlab_core::protocol::{
    audit_scheme, check_blindness_all, check_correctness, family_from_spec, scheme_from_spec, server_from_spec,
    AuditOptions, CircuitFamily,
};
use blindlab_core::reductions::{build_dqc1_reduction, build_iqp_reduction, verify_reductions};
use blindlab_core::simulate::{
    dqc1_distribution, float, iqp_marginal_distribution, iqp_postselected_amplitudes, sample_outcome,
    BinaryDistribution, Epsilon,
};
use blindlab_core::BitString;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Dense exact simulation, written independently of the library kernels.
fn oracle_state(c: &Circuit) -> Vec<ExactAmplitude> {
    let n = c.n_qubits();
    let mut psi = vec![ExactAmplitude::zero(); 1 << n];
    psi[0] = ExactAmplitude::one();
    let bit = |i: usize, q: usize| (i >> (n - 1 - q)) & 1 == 1;
    for g in c.gates() {
        let t = g.targets();
        let mut next = psi.clone();
        for (i, amp) in next.iter_mut().enumerate() {
            let flip = |q: usize| i ^ (1 << (n - 1 - q));
            *amp = match g.kind() {
                GateKind::H => {
                    let (lo, hi) = if bit(i, t[0]) { (flip(t[0]), i) } else { (i, flip(t[0])) };
                    let other = if bit(i, t[0]) { -&psi[hi] } else { psi[hi].clone() };
                    (&psi[lo] + &other).div_sqrt2_pow(1)
                }
                GateKind::X => psi[flip(t[0])].clone(),
                GateKind::Cnot if bit(i, t[0]) => psi[flip(t[1])].clone(),
                GateKind::Toffoli if bit(i, t[0]) && bit(i, t[1]) => psi[flip(t[2])].clone(),
                GateKind::Cnot | GateKind::Toffoli => psi[i].clone(),
                GateKind::Z | GateKind::Cz | GateKind::Ccz if t.iter().all(|&q| bit(i, q)) => psi[i].mul_omega(4),
                GateKind::S if bit(i, t[0]) => psi[i].mul_omega(2),
                GateKind::T if bit(i, t[0]) => psi[i].mul_omega(1),
                GateKind::PhaseZ(k) => psi[i].mul_omega(if bit(i, t[0]) { (8 - k) % 8 } else { k }),
                _ => psi[i].clone(),
            };
        }
        psi = next;
    }
    psi
}

fn oracle_acceptance(c: &Circuit) -> ExactReal {
    let state = oracle_state(c);
    let top = state.len() / 2;
    state[top..].iter().map(ExactAmplitude::norm_sqr).sum()
}

/// Random circuits with `n ≤ 4`. Every other one starts with a random layer
/// of H or X so that yes-instances are common; diagonal gates alone leave
/// `|0^n⟩` unchanged.
fn corpus() -> Vec<Circuit> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..200)
        .map(|i| {
            let n_qubits = rng.random_range(1..=4);
            let n_gates = rng.random_range(2..=10);
            let body = random_circuit(&RandomCircuitConfig { n_qubits, n_gates }, &mut rng);
            if i % 2 == 1 {
                return body;
            }
            let mut gates: Vec<Gate> = (0..n_qubits)
                .filter_map(|q| match rng.random_range(0..3) {
                    0 => Some(Gate::h(q)),
                    1 => Some(Gate::x(q)),
                    _ => None,
                })
                .collect();
            gates.extend(body.gates().iter().cloned());
            Circuit::new(n_qubits, gates).unwrap()
        })
        .collect()
}

/// Circuits with `p_V(1) = 0`: `R·R†`, or gates that never move qubit 0
/// out of `|0⟩` (anything on qubits ≥ 1 plus diagonal gates on qubit 0).
fn adversarial_zero() -> Vec<Circuit> {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut out = Vec::new();
    for i in 0..50 {
        let n = rng.random_range(2..=4);
        if i % 2 == 0 {
            let r = random_circuit(&RandomCircuitConfig { n_qubits: n, n_gates: rng.random_range(1..=3) }, &mut rng);
            let gates = [r.gates(), r.inverse().gates()].concat();
            out.push(Circuit::new(n, gates).unwrap());
        } else {
            let rest = random_circuit(&RandomCircuitConfig { n_qubits: n - 1, n_gates: 4 }, &mut rng);
            let mut gates: Vec<Gate> = rest.gates().iter().map(|g| g.remapped(|q| q + 1)).collect();
            let partner = rng.random_range(1..n);
            gates.insert(rng.random_range(0..=gates.len()), Gate::cz(0, partner));
            gates.insert(rng.random_range(0..=gates.len()), Gate::phase_z(rng.random_range(0..8), 0));
            gates.push(Gate::t(0));
            out.push(Circuit::new(n, gates).unwrap());
        }
    }
    out
}

fn criterion_1(corpus: &[Circuit]) -> Outcome {
    let kinds: std::collections::HashSet<&str> =
        corpus.iter().flat_map(|c| c.gates()).map(|g| g.kind().name()).collect();
    ensure(kinds.len() == 10, || format!("corpus covers only {kinds:?}"))?;
    for (i, v) in corpus.iter().enumerate() {
        let n = v.n_qubits() as u32;
        let p_v = oracle_acceptance(v);
        let p_w = p_v.div_pow2(1);
        let expected = (ExactReal::integer(4) * &p_w * p_w.complement()).div_pow2(n + 2);
        let r = build_dqc1_reduction(v);
        ensure(oracle_acceptance(&r.w_circuit) == p_w, || format!("circuit {i}: p_W != p_V/2\n{v}"))?;
        let actual = dqc1_distribution(&r.dqc1_circuit).map_err(|e| e.to_string())?;
        ensure(*actual.p1() == expected, || format!("circuit {i}: p̃ = {} expected {expected}\n{v}", actual.p1()))?;
    }
    Ok(format!("{} circuits, exact equality", corpus.len()))
}

fn criterion_2(corpus: &[Circuit]) -> Outcome {
    let mut max_width = 0;
    for (i, v) in corpus.iter().enumerate() {
        let p_v = oracle_acceptance(v);
        let r = build_iqp_reduction(v);
        max_width = max_width.max(r.iqp.n_qubits());
        let got = iqp_marginal_distribution(&r.iqp, r.s + 1).map_err(|e| e.to_string())?;
        ensure(*got.p1() == p_v.div_pow2(r.s as u32), || format!("circuit {i}: IQP marginal mismatch\n{v}"))?;
        let post: Vec<ExactAmplitude> = iqp_postselected_amplitudes(&r.iqp, r.s)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|a| a.mul_sqrt2_pow(r.s as u32))
            .collect();
        let target = oracle_state(v);
        let phase = (0..8u8).find(|&k| post.iter().zip(&target).all(|(p, t)| *p == t.mul_omega(k)));
        ensure(phase.is_some(), || format!("circuit {i}: postselected state differs beyond a global phase\n{v}"))?;
    }
    Ok(format!("{} circuits, widest IQP circuit {max_width} qubits", corpus.len()))
}

fn criterion_3(corpus: &[Circuit]) -> Outcome {
    let zeros = adversarial_zero();
    for (i, v) in zeros.iter().enumerate() {
        ensure(oracle_acceptance(v).is_zero(), || format!("adversarial circuit {i} is not a no-instance\n{v}"))?;
    }
    let mut no_instances = 0;
    for (i, v) in corpus.iter().chain(&zeros).enumerate() {
        let r = verify_reductions(v).map_err(|e| e.to_string())?;
        let z = oracle_acceptance(v).is_zero();
        no_instances += usize::from(z);
        ensure(z || (r.p_w1.is_positive() && r.p_w1 < ExactReal::one()), || {
            format!("circuit {i}: p_W(1) not in (0, 1)")
        })?;
        ensure(r.ptilde_actual.is_zero() == z && r.iqp_actual.is_zero() == z, || {
            format!("circuit {i}: zero status differs (p_V zero: {z})\n{v}")
        })?;
    }
    Ok(format!("{} circuits, {no_instances} with p_V(1) = 0", corpus.len() + zeros.len()))
}

fn bits(s: &str) -> BitString {
    s.parse().unwrap()
}

fn criterion_4() -> Outcome {
    let family = family_from_spec("gates", None).unwrap();
    let honest = server_from_spec("honest", &family, 20).unwrap();
    let opts = AuditOptions::default();
    let xs: Vec<BitString> = (1..=10u64).map(|i| BitString::from_index(i * 3 % 16, 4)).collect();
    let leaky = scheme_from_spec("leaky", &family).unwrap();
    let r = check_correctness(leaky.as_ref(), honest.as_ref(), family.as_ref(), &xs, &Epsilon::zero(), &opts)
        .map_err(|e| e.to_string())?;
    ensure(r.pass, || "leaky scheme fails ε = 0 correctness".into())?;
    let pairs = check_blindness_all(leaky.as_ref(), &xs, opts.coin_budget).map_err(|e| e.to_string())?;
    ensure(pairs.len() == 45 && pairs.iter().all(|p| !p.pass), || "leaky scheme passes blindness on some pair".into())?;

    let constant = scheme_from_spec("constant", &family).unwrap();
    let pairs = check_blindness_all(constant.as_ref(), &xs, opts.coin_budget).map_err(|e| e.to_string())?;
    ensure(pairs.iter().all(|p| p.pass), || "constant scheme fails blindness".into())?;
    let extremes = [bits("0000"), bits("1000")];
    for x in &extremes {
        let p1 = float::dqc1_p1(&family.circuit(x).unwrap());
        ensure(!(1e-12..=1.0 - 1e-12).contains(&p1), || format!("family member {x} is not deterministic"))?;
    }
    let servers = ["honest", "fixed:0", "fixed:1/2", "fixed:1", "padded:1"];
    let epsilons = ["0", "1/10", "1/2", "9/10", "999/1000"];
    for server in servers {
        let server = server_from_spec(server, &family, 20).unwrap();
        for eps in epsilons {
            let r = check_correctness(
                constant.as_ref(),
                server.as_ref(),
                family.as_ref(),
                &extremes,
                &eps.parse().unwrap(),
                &opts,
            )
            .map_err(|e| e.to_string())?;
            ensure(!r.pass, || {
                format!("constant scheme passes correctness with server {} at ε = {eps}", server.name())
            })?;
        }
    }
    Ok(format!("10-member family, 45 pairs, {} servers × {} ε values", servers.len(), epsilons.len()))
}

struct Config {
    scheme: &'static str,
    server: &'static str,
    family: Arc<dyn CircuitFamily>,
    xs: Vec<BitString>,
    mode: ResponseMode,
    epsilon: &'static str,
}

fn criterion_5() -> Outcome {
    let gates = family_from_spec("gates", None).unwrap();
    let parity = family_from_spec("parity", None).unwrap();
    let fixed_h = family_from_spec(
        "fixed",
        Some(&Circuit::new(2, vec![Gate::h(1), Gate::cnot(1, 0), Gate::t(0), Gate::h(0)]).unwrap()),
    )
    .unwrap();
    let fixed_zero =
        family_from_spec("fixed", Some(&Circuit::new(2, vec![Gate::h(1), Gate::cz(0, 1)]).unwrap())).unwrap();
    let all3: Vec<BitString> = BitString::all(3).collect();
    let some4: Vec<BitString> = ["0000", "1000", "0100", "1100", "0010", "0001"].iter().map(|s| bits(s)).collect();
    let cfg = |scheme, server, family: &Arc<dyn CircuitFamily>, xs: &[BitString], mode, epsilon| Config {
        scheme,
        server,
        family: family.clone(),
        xs: xs.to_vec(),
        mode,
        epsilon,
    };
    let configs = [
        cfg("leaky", "honest", &gates, &some4, ResponseMode::Single, "0"),
        cfg("constant", "honest", &gates, &some4, ResponseMode::Single, "0"),
        cfg("local:4", "honest", &gates, &some4, ResponseMode::Single, "1/4"),
        cfg("constant", "honest", &fixed_h, &all3, ResponseMode::Single, "0"),
        cfg("otp", "honest", &fixed_h, &all3, ResponseMode::Single, "0"),
        cfg("flagged:otp", "honest", &fixed_h, &all3, ResponseMode::Single, "0"),
        cfg("otp", "padded:2", &fixed_h, &all3, ResponseMode::Poly, "0"),
        cfg("constant", "honest", &fixed_zero, &all3, ResponseMode::Single, "0"),
        cfg("local:4", "honest", &parity, &all3, ResponseMode::Single, "0"),
        cfg("flagged:local:3", "padded:1", &parity, &all3, ResponseMode::Poly, "1/3"),
    ];
    let opts = AuditOptions::default();
    let mut passing = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for c in &configs {
        let scheme = scheme_from_spec(c.scheme, &c.family).unwrap();
        let server = server_from_spec(c.server, &c.family, 20).unwrap();
        let eps: Epsilon = c.epsilon.parse().unwrap();
        let audit = audit_scheme(scheme.as_ref(), server.as_ref(), c.family.as_ref(), &c.xs, &eps, &opts)
            .map_err(|e| e.to_string())?;
        if !audit.pass {
            continue;
        }
        passing.push(format!("{}/{}/{}", c.scheme, c.server, c.family.name()));
        let s = c.xs[0].len();
        let advice = make_advice(scheme.as_ref(), server.as_ref(), s, c.mode, &mut rng).map_err(|e| e.to_string())?;
        for x in &c.xs {
            let p1 = dqc1_distribution(&c.family.circuit(x).unwrap()).unwrap().p1().clone();
            let o = extract_decide(scheme.as_ref(), &advice, x, opts.coin_budget).map_err(|e| e.to_string())?;
            ensure(o.p_acc == &o.eta * &o.pr_xi_1, || format!("{}: p_acc != η·Pr(ξ=1) on {x}", c.scheme))?;
            ensure(o.within_bounds(&p1, &eps), || format!("{}: bound violated on {x}", c.scheme))?;
            ensure(o.accept == p1.is_positive(), || format!("{}: decision differs from p1 > 0 on {x}", c.scheme))?;
        }
    }
    ensure(passing.len() >= 5, || format!("only {} configurations pass both audits", passing.len()))?;

    let leaky = scheme_from_spec("leaky", &gates).unwrap();
    let honest = server_from_spec("honest", &gates, 20).unwrap();
    let advice = make_advice(leaky.as_ref(), honest.as_ref(), 4, ResponseMode::Single, &mut rng).unwrap();
    for x in BitString::all(4).filter(|x| *x != BitString::ones(4)) {
        let o = extract_decide(leaky.as_ref(), &advice, &x, opts.coin_budget).map_err(|e| e.to_string())?;
        ensure(o.p_acc.is_zero(), || format!("leaky scheme accepts {x}"))?;
    }
    Ok(format!("passing configurations: {}; leaky p_acc = 0 on all 15 x ≠ 1111", passing.join(", ")))
}

fn within_5_sigma(hits: usize, runs: usize, p: f64) -> bool {
    let sigma = (p * (1.0 - p) / runs as f64).sqrt();
    (hits as f64 / runs as f64 - p).abs() <= 5.0 * sigma
}

fn criterion_6() -> Outcome {
    const RUNS: usize = 100_000;
    // The DQC1 reduction of H(0) has p̃ = 3/32; a constant scheme against
    // an honest server for it accepts with p_acc = 3/32.
    let circuit = build_dqc1_reduction(&Circuit::new(1, vec![Gate::h(0)]).unwrap()).dqc1_circuit;
    let family = family_from_spec("fixed", Some(&circuit)).unwrap();
    let mut details = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for scheme_name in ["constant", "otp"] {
        let scheme = scheme_from_spec(scheme_name, &family).unwrap();
        let server = server_from_spec("honest", &family, 20).unwrap();
        let advice = make_advice(scheme.as_ref(), server.as_ref(), 2, ResponseMode::Single, &mut rng).unwrap();
        let x = bits("01");
        let exact = extract_decide(scheme.as_ref(), &advice, &x, 20).map_err(|e| e.to_string())?;
        let hits = (0..RUNS).filter(|_| extract_run_once(scheme.as_ref(), &advice, &x, &mut rng).unwrap()).count();
        let p = exact.p_acc.to_f64();
        ensure(within_5_sigma(hits, RUNS, p), || format!("{scheme_name}: {hits}/{RUNS} vs p_acc = {}", exact.p_acc))?;
        details.push(format!("{scheme_name} p_acc = {} freq {:.5}", exact.p_acc, hits as f64 / RUNS as f64));
    }
    for p1 in [ExactReal::ratio(3, 32), ExactReal::dyadic(2, -1, 2), ExactReal::ratio(2, 5)] {
        let d = BinaryDistribution::from_p1(p1.clone()).unwrap();
        let hits = (0..RUNS).filter(|_| sample_outcome(&d, &mut rng)).count();
        ensure(within_5_sigma(hits, RUNS, p1.to_f64()), || format!("sample_outcome: {hits}/{RUNS} vs {p1}"))?;
    }
    details.push("sample_outcome at 3/32, (2-√2)/4, 2/5".into());
    Ok(details.join("; "))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let unit = ExactReal::ratio(1, 256);
    for t in 0..20 {
        let table = TruthTable::random(8, &mut rng).unwrap();
        for x in BitString::all(8) {
            let o = all_demo(&table, &x).map_err(|e| e.to_string())?;
            let want = table.value(&x) == Some(true);
            ensure(o.accept == want, || format!("table {t}, x = {x}: decision {}", o.accept))?;
            let p = if want { unit.clone() } else { ExactReal::zero() };
            ensure(o.p_acc == p, || format!("table {t}, x = {x}: p_acc = {}", o.p_acc))?;
        }
    }
    Ok("20 tables × 256 inputs".into())
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0f64;
    for i in 0..100 {
        let n_qubits = rng.random_range(1..=8);
        let n_gates = rng.random_range(0..=24);
        let c = random_circuit(&RandomCircuitConfig { n_qubits, n_gates }, &mut rng);
        let exact = dqc1_distribution(&c).map_err(|e| e.to_string())?.p1().to_f64();
        let approx = float::dqc1_p1(&c);
        let diff = (exact - approx).abs();
        worst = worst.max(diff);
        ensure(diff <= 1e-9, || format!("circuit {i}: exact {exact} float {approx}\n{c}"))?;
    }
    Ok(format!("100 circuits, max |exact - float| = {worst:.2e}"))
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() -> ExitCode {
    let corpus = corpus();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("DQC1 reduction identity, exact", Box::new(|| criterion_1(&corpus))),
        ("IQP postselection identities, exact", Box::new(|| criterion_2(&corpus))),
        ("zero preservation across reductions", Box::new(|| criterion_3(&corpus))),
        ("correctness/blindness separation of built-in schemes", Box::new(criterion_4)),
        ("extraction bounds and decisions", Box::new(criterion_5)),
        ("sampled vs exact consistency", Box::new(criterion_6)),
        ("advice demonstrator decides every truth table", Box::new(criterion_7)),
        ("exact vs float DQC1 cross-check", Box::new(criterion_8)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] criterion {}: {name} ({detail}; {secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] criterion {}: {name} ({why}; {secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
