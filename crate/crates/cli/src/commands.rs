//! One function per subcommand. Each returns the command name, the
//! resolved configuration and the outcome, and leaves writing to the caller.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, ensure, Context, Result};
use blindlab_core::circuit::{
    is_iqp_form, parse_circuit, random_circuit, serialize_circuit, Circuit, RandomCircuitConfig,
};
use blindlab_core::exact::ExactReal;
use blindlab_core::extract::{
    all_demo as all_demo_exact, all_demo_run_once, extract_decide, extract_run_once, make_advice, ResponseMode,
    TruthTable,
};
use blindlab_core::protocol::{
    audit_scheme, family_from_spec, scheme_from_spec, server_from_spec, AuditOptions, CircuitFamily, Scheme,
    ServerModel,
};
use blindlab_core::reductions::{
    build_dqc1_reduction, build_iqp_reduction, build_w, verify_reductions_with_bounds, VerifyBounds,
};
use blindlab_core::simulate::{
    acceptance_probability, dqc1_distribution_with_bound, iqp_marginal_distribution_with_bound, sample_outcome,
    BinaryDistribution, Epsilon,
};
use blindlab_core::BitString;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::Outcome;
use crate::{Common, Descriptor, Model, ProtocolArgs, Target};

pub type Run = (&'static str, Value, Outcome);

const DEFAULT_SEED: u64 = 0;
const DEFAULT_LENGTH: usize = 2;

fn read_circuit(path: &Path) -> Result<Circuit> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read circuit file {}", path.display()))?;
    parse_circuit(&text).with_context(|| format!("in circuit file {}", path.display()))
}

fn check_width(c: &Circuit, common: &Common) -> Result<()> {
    let n = c.n_qubits();
    ensure!(
        n <= common.budget_n as usize,
        "circuit has {n} qubits but the exact-simulation budget is {}; raise it with --budget-n or BLINDLAB_BUDGET_N",
        common.budget_n
    );
    Ok(())
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Frequency of `true` over `samples` runs, or null when sampling is off.
fn sampled(samples: u64, mut run: impl FnMut() -> Result<bool>) -> Result<Value> {
    if samples == 0 {
        return Ok(Value::Null);
    }
    let mut ones = 0u64;
    for _ in 0..samples {
        ones += u64::from(run()?);
    }
    Ok(json!({ "samples": samples, "ones": ones, "frequency": ones as f64 / samples as f64 }))
}

fn common_config(common: &Common, seed: u64) -> Value {
    json!({
        "budget_n": common.budget_n,
        "budget_coins": common.budget_coins,
        "samples": common.samples,
        "seed": seed,
        "format": format!("{:?}", common.format).to_lowercase(),
    })
}

fn merge(base: Value, extra: Value) -> Value {
    match (base, extra) {
        (Value::Object(mut a), Value::Object(b)) => {
            a.extend(b);
            Value::Object(a)
        }
        (a, _) => a,
    }
}

fn distribution_json(d: &BinaryDistribution) -> Value {
    json!({ "p0": d.p0().to_string(), "p1": d.p1().to_string() })
}

pub fn simulate(common: &Common, path: &Path, model: Model, marginal: usize) -> Result<Run> {
    let c = read_circuit(path)?;
    check_width(&c, common)?;
    let seed = common.seed.unwrap_or(DEFAULT_SEED);
    let bound = common.budget_n as usize;
    let distribution = match model {
        Model::Pure => BinaryDistribution::from_p1(acceptance_probability(&c))?,
        Model::Dqc1 => dqc1_distribution_with_bound(&c, bound)?,
        Model::Iqp => {
            let form = is_iqp_form(&c).context(
                "circuit is not in IQP form: expected one H per qubit, then Z-diagonal gates, then one H per qubit",
            )?;
            iqp_marginal_distribution_with_bound(&form, marginal, bound)?
        }
    };
    let mut rng = rng_for(seed);
    let sampling = sampled(common.samples, || Ok(sample_outcome(&distribution, &mut rng)))?;
    let model_name = format!("{model:?}").to_lowercase();
    let mut result = json!({
        "model": model_name,
        "n_qubits": c.n_qubits(),
        "gates": c.len(),
        "distribution": distribution_json(&distribution),
        "sampled": sampling,
    });
    if model == Model::Iqp {
        result["marginal"] = json!(marginal);
    }
    let config =
        merge(common_config(common, seed), json!({ "circuit": path.display().to_string(), "model": model_name }));
    let p1 = distribution.p1().to_string();
    let outcome = Outcome {
        result,
        csv_header: vec!["model", "n_qubits", "p0", "p1"],
        csv_rows: vec![vec![model_name, c.n_qubits().to_string(), distribution.p0().to_string(), p1]],
        pass: true,
    };
    Ok(("simulate", config, outcome))
}

fn circuit_json(c: &Circuit) -> Value {
    json!({ "n_qubits": c.n_qubits(), "gates": c.len(), "circuit": serialize_circuit(c) })
}

pub fn reduce(common: &Common, path: &Path, target: Target, emit: Option<&Path>) -> Result<Run> {
    let v = read_circuit(path)?;
    let w = build_w(&v);
    let dqc1 = build_dqc1_reduction(&v).dqc1_circuit;
    let iqp = build_iqp_reduction(&v);
    let iqp_circuit = iqp.iqp.to_circuit();

    let mut result = json!({ "source_n": v.n_qubits() });
    let mut rows = Vec::new();
    let mut add = |name: &str, c: &Circuit, postselect: usize, result: &mut Value| {
        let mut entry = circuit_json(c);
        if name == "iqp" {
            entry["s"] = json!(iqp.s);
            entry["postselect_count"] = json!(postselect);
        }
        result[name] = entry;
        rows.push(vec![name.to_string(), c.n_qubits().to_string(), c.len().to_string(), postselect.to_string()]);
    };
    if matches!(target, Target::W | Target::All) {
        add("w", &w, 0, &mut result);
    }
    if matches!(target, Target::Dqc1 | Target::All) {
        add("dqc1", &dqc1, 0, &mut result);
    }
    if matches!(target, Target::Iqp | Target::All) {
        add("iqp", &iqp_circuit, iqp.postselect_count, &mut result);
    }
    if let Some(emit) = emit {
        let c = match target {
            Target::W => &w,
            Target::Dqc1 => &dqc1,
            Target::Iqp => &iqp_circuit,
            Target::All => bail!("--emit writes one circuit; choose --target w, dqc1 or iqp"),
        };
        fs::write(emit, serialize_circuit(c) + "\n")
            .with_context(|| format!("cannot write circuit file {}", emit.display()))?;
    }
    let target_name = format!("{target:?}").to_lowercase();
    let config = merge(
        common_config(common, common.seed.unwrap_or(DEFAULT_SEED)),
        json!({ "circuit": path.display().to_string(), "target": target_name }),
    );
    let outcome = Outcome {
        result,
        csv_header: vec!["target", "n_qubits", "gates", "postselect_count"],
        csv_rows: rows,
        pass: true,
    };
    Ok(("reduce", config, outcome))
}

/// Random circuits with 1 to `max_qubits` qubits and 1 to `max_gates` gates.
fn corpus(count: usize, max_qubits: usize, max_gates: usize, seed: u64) -> Vec<Circuit> {
    let mut rng = rng_for(seed);
    (0..count)
        .map(|_| {
            let n_qubits = rng.random_range(1..=max_qubits);
            let n_gates = rng.random_range(1..=max_gates);
            random_circuit(&RandomCircuitConfig { n_qubits, n_gates }, &mut rng)
        })
        .collect()
}

pub fn verify_reductions(
    common: &Common,
    path: Option<&Path>,
    count: Option<usize>,
    max_qubits: usize,
    max_gates: usize,
) -> Result<Run> {
    let seed = common.seed.unwrap_or(DEFAULT_SEED);
    let mut config = common_config(common, seed);
    let circuits = match (path, count) {
        (Some(p), _) => {
            config["circuit"] = json!(p.display().to_string());
            vec![read_circuit(p)?]
        }
        (None, Some(count)) => {
            ensure!(max_qubits >= 1 && max_gates >= 1, "--max-qubits and --max-gates must be at least 1");
            ensure!(
                max_qubits <= common.budget_n as usize,
                "--max-qubits {max_qubits} exceeds the exact-simulation budget {}; raise it with --budget-n",
                common.budget_n
            );
            config["corpus"] = json!({ "count": count, "max_qubits": max_qubits, "max_gates": max_gates });
            corpus(count, max_qubits, max_gates, seed)
        }
        (None, None) => bail!("pass --circuit PATH or --corpus COUNT"),
    };
    let bounds = VerifyBounds { source_n: common.budget_n as usize, ..VerifyBounds::default() };

    let mut entries = Vec::new();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut zero_instances = 0;
    for (i, v) in circuits.iter().enumerate() {
        let r = verify_reductions_with_bounds(v, &bounds).with_context(|| format!("circuit {i}"))?;
        let ok = r.ok() && r.zero_preserved();
        if !ok {
            failures.push(i);
        }
        zero_instances += usize::from(r.p_v1.is_zero());
        let row = |check: &str, expected: String, actual: String, pass: bool| {
            vec![i.to_string(), check.to_string(), expected, actual, pass.to_string()]
        };
        rows.push(row("dqc1", r.ptilde_expected.to_string(), r.ptilde_actual.to_string(), r.dqc1_ok));
        rows.push(row("iqp", r.iqp_expected.to_string(), r.iqp_actual.to_string(), r.iqp_ok));
        let phase = r.global_phase.map(|k| k.to_string()).unwrap_or_default();
        rows.push(row("state", String::new(), phase, r.state_identity_ok));
        rows.push(row("zero", r.p_v1.is_zero().to_string(), r.ptilde_actual.is_zero().to_string(), r.zero_preserved()));
        entries.push(json!({ "index": i, "source": serialize_circuit(v), "report": serde_json::to_value(&r)? }));
    }
    let result = json!({
        "circuits": entries,
        "summary": { "count": circuits.len(), "zero_instances": zero_instances, "failures": failures },
    });
    let outcome = Outcome {
        result,
        csv_header: vec!["index", "check", "expected", "actual", "pass"],
        csv_rows: rows,
        pass: failures.is_empty(),
    };
    Ok(("verify-reductions", config, outcome))
}

fn read_descriptor(path: Option<&Path>) -> Result<Descriptor> {
    let Some(path) = path else { return Ok(Descriptor::default()) };
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read experiment descriptor {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| {
        format!(
            "malformed experiment descriptor {}; expected keys scheme, server, family, xs, epsilon, seed, mode",
            path.display()
        )
    })
}

/// Flags over descriptor over defaults.
struct Resolved {
    scheme: Box<dyn Scheme>,
    server_name: String,
    family: Arc<dyn CircuitFamily>,
    xs: Vec<BitString>,
    epsilon: Epsilon,
    seed: u64,
    mode: Option<String>,
    config: Value,
}

impl Resolved {
    fn server(&self, common: &Common) -> Result<Arc<dyn ServerModel>> {
        Ok(server_from_spec(&self.server_name, &self.family, common.budget_n as usize)?)
    }
}

fn resolve(common: &Common, args: &ProtocolArgs, mode: Option<&str>) -> Result<Resolved> {
    let d = read_descriptor(args.config.as_deref())?;
    let scheme_name =
        args.scheme.clone().or(d.scheme).context("no scheme given; pass --scheme or set it in --config")?;
    let server_name = args.server.clone().or(d.server).unwrap_or_else(|| "honest".into());
    let family_name = args.family.clone().or(d.family).unwrap_or_else(|| "gates".into());
    let epsilon_text = args.epsilon.clone().or(d.epsilon).unwrap_or_else(|| "0".into());
    let seed = common.seed.or(d.seed).unwrap_or(DEFAULT_SEED);
    let mode = mode.map(str::to_string).or(d.mode);

    let circuit = args.circuit.as_deref().map(read_circuit).transpose()?;
    let family = family_from_spec(&family_name, circuit.as_ref())?;
    let scheme = scheme_from_spec(&scheme_name, &family)?;
    let epsilon: Epsilon = epsilon_text.parse().with_context(|| format!("--epsilon {epsilon_text:?}"))?;
    let xs: Vec<BitString> = match (args.xs.clone().or(d.xs), args.length) {
        (Some(xs), _) => xs
            .iter()
            .map(|x| x.trim().parse().with_context(|| format!("parameter {x:?} is not a bit string")))
            .collect::<Result<_>>()?,
        (None, length) => BitString::all(length.unwrap_or(DEFAULT_LENGTH)).collect(),
    };
    ensure!(!xs.is_empty(), "no parameters given");

    let mut config = common_config(common, seed);
    let extra = json!({
        "scheme": scheme.name(),
        "server": server_name,
        "family": family.name(),
        "epsilon": epsilon.to_string(),
        "xs": xs.iter().map(ToString::to_string).collect::<Vec<_>>(),
    });
    config = merge(config, extra);
    if let Some(c) = &args.circuit {
        config["circuit"] = json!(c.display().to_string());
    }
    if let Some(m) = &mode {
        config["mode"] = json!(m);
    }
    Ok(Resolved { scheme, server_name, family, xs, epsilon, seed, mode, config })
}

fn audit_options(common: &Common) -> AuditOptions {
    AuditOptions {
        coin_budget: common.budget_coins as usize,
        dqc1_bound: common.budget_n as usize,
        ..AuditOptions::default()
    }
}

pub fn scheme_audit(common: &Common, args: &ProtocolArgs) -> Result<Run> {
    let r = resolve(common, args, None)?;
    let server = r.server(common)?;
    let report =
        audit_scheme(r.scheme.as_ref(), server.as_ref(), r.family.as_ref(), &r.xs, &r.epsilon, &audit_options(common))?;

    let mut rows = Vec::new();
    for k in &report.correctness.keygen {
        rows.push(vec![
            k.x.to_string(),
            "keygen".into(),
            String::new(),
            k.success_probability.to_string(),
            k.pass.to_string(),
        ]);
    }
    for c in &report.correctness.checks {
        let worst = c.check.residuals.iter().max().expect("two residuals").to_string();
        rows.push(vec![c.x.to_string(), "correctness".into(), c.key.to_string(), worst, c.check.pass.to_string()]);
    }
    for b in &report.blindness {
        let differing = (b.only_x1.len() + b.only_x2.len()).to_string();
        rows.push(vec![b.x1.to_string(), "blindness".into(), b.x2.to_string(), differing, b.pass.to_string()]);
    }
    let pass = report.pass;
    let outcome = Outcome {
        result: serde_json::to_value(&report)?,
        csv_header: vec!["x", "check", "against", "value", "pass"],
        csv_rows: rows,
        pass,
    };
    Ok(("scheme-audit", r.config, outcome))
}

pub fn extract(common: &Common, args: &ProtocolArgs, mode: Option<&str>) -> Result<Run> {
    let r = resolve(common, args, mode)?;
    let mode: ResponseMode = r.mode.as_deref().unwrap_or("poly").parse()?;
    let s = r.xs[0].len();
    ensure!(
        r.xs.iter().all(|x| x.len() == s),
        "extraction needs parameters of one length; got lengths differing from {s}"
    );
    let server = r.server(common)?;
    let budget = common.budget_coins as usize;

    let mut rng = rng_for(r.seed);
    let advice = make_advice(r.scheme.as_ref(), server.as_ref(), s, mode, &mut rng)?;
    let mut outcomes = Vec::new();
    let mut rows = Vec::new();
    let mut pass = true;
    for x in &r.xs {
        let o = extract_decide(r.scheme.as_ref(), &advice, x, budget)?;
        let p1 = dqc1_distribution_with_bound(&r.family.circuit(x)?, common.budget_n as usize)?.p1().clone();
        let bounds_ok = o.within_bounds(&p1, &r.epsilon);
        let decision_ok = o.accept == p1.is_positive();
        pass &= bounds_ok && decision_ok;
        let sampling = sampled(common.samples, || Ok(extract_run_once(r.scheme.as_ref(), &advice, x, &mut rng)?))?;
        rows.push(vec![x.to_string(), "bounds".into(), o.p_acc.to_string(), bounds_ok.to_string()]);
        rows.push(vec![x.to_string(), "decision".into(), o.accept.to_string(), decision_ok.to_string()]);
        let mut entry = serde_json::to_value(&o)?;
        entry["p1"] = json!(p1.to_string());
        entry["bounds_ok"] = json!(bounds_ok);
        entry["decision_ok"] = json!(decision_ok);
        entry["sampled"] = sampling;
        outcomes.push(entry);
    }
    let mut config = r.config;
    config["mode"] = json!(mode.to_string());
    let result = json!({ "advice": serde_json::to_value(&advice)?, "outcomes": outcomes });
    let outcome = Outcome { result, csv_header: vec!["x", "check", "value", "pass"], csv_rows: rows, pass };
    Ok(("extract", config, outcome))
}

pub fn all_demo(
    common: &Common,
    table: Option<&str>,
    parity: Option<usize>,
    random: Option<usize>,
    xs: Option<&[String]>,
) -> Result<Run> {
    let seed = common.seed.unwrap_or(DEFAULT_SEED);
    let mut rng = rng_for(seed);
    let table = match (table, parity, random) {
        (Some(t), _, _) => t.parse::<TruthTable>()?,
        (_, Some(s), _) => TruthTable::parity(s)?,
        (_, _, Some(s)) => TruthTable::random(s, &mut rng)?,
        _ => bail!("pass one of --table, --parity or --random"),
    };
    let xs: Vec<BitString> = match xs {
        Some(xs) => xs
            .iter()
            .map(|x| x.trim().parse().with_context(|| format!("input {x:?} is not a bit string")))
            .collect::<Result<_>>()?,
        None => BitString::all(table.s()).collect(),
    };

    let mut outcomes = Vec::new();
    let mut rows = Vec::new();
    let mut pass = true;
    for x in &xs {
        let o = all_demo_exact(&table, x)?;
        let decision_ok = o.accept == (o.f_x == Some(true));
        pass &= decision_ok;
        let sampling = sampled(common.samples, || Ok(all_demo_run_once(&table, x, &mut rng)?))?;
        let f_x = match o.f_x {
            Some(b) => u8::from(b).to_string(),
            None => "x".into(),
        };
        rows.push(vec![x.to_string(), "decision".into(), f_x, o.p_acc.to_string(), decision_ok.to_string()]);
        let mut entry = serde_json::to_value(&o)?;
        entry["decision_ok"] = json!(decision_ok);
        entry["sampled"] = sampling;
        outcomes.push(entry);
    }
    let config = merge(common_config(common, seed), json!({ "table": table.to_string() }));
    let mass = ExactReal::one().div_pow2(table.s() as u32);
    let result = json!({ "s": table.s(), "advice_mass": mass.to_string(), "outcomes": outcomes });
    let outcome = Outcome { result, csv_header: vec!["x", "check", "f_x", "p_acc", "pass"], csv_rows: rows, pass };
    Ok(("all-demo", config, outcome))
}
