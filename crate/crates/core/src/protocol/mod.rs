//! One-round classical delegation of DQC1 sampling.
//!
//! The client draws a key `k ← K(x)`, sends `a = E(x, k)`, receives a
//! response `b ~ q_a`, and outputs `τ = D(x, k, b)`. Keys come from explicit
//! coin strings, so the set of keys, the ciphertext distribution `P_x(a)`,
//! and the output distribution of every key are computed by exhaustive
//! enumeration. That makes correctness (every key's output distribution is
//! within multiplicative error ε of the target) and blindness (equal-length
//! parameters reach exactly the same ciphertexts) decidable.

mod family;
mod registry;
mod response;
mod scheme;
mod server;

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::exact::ExactReal;
use crate::simulate::{
    check_multiplicative_error, dqc1_distribution_with_bound, BinaryDistribution, Epsilon, MultiplicativeErrorReport,
    DEFAULT_DQC1_BOUND,
};

pub use family::{CircuitFamily, FixedFamily, GateCycleFamily, ParityFamily};
pub use registry::{builtin_manifests, family_from_spec, scheme_from_spec, server_from_spec};
pub use response::ResponseDistribution;
pub use scheme::{
    ConstantScheme, FlaggedScheme, KeyOutcome, LeakyScheme, LengthFormula, LocalSamplerScheme, OneTimePadScheme,
    Scheme, SchemeManifest,
};
pub use server::{FixedServer, HonestServer, PaddedServer, ServerModel};

/// Default limit on the number of coins enumerated per parameter.
pub const DEFAULT_COIN_BUDGET: usize = 20;

/// Key generation retries before [`run_protocol`] gives up.
pub const MAX_KEYGEN_ATTEMPTS: usize = 64;

fn random_bits<R: Rng + ?Sized>(rng: &mut R, len: usize) -> BitString {
    BitString::new((0..len).map(|_| rng.random::<bool>()).collect())
}

/// Draws coins until key generation succeeds; returns coins, key and the
/// number of attempts.
pub fn sample_key<R: Rng + ?Sized>(
    scheme: &dyn Scheme,
    x: &BitString,
    rng: &mut R,
) -> Result<(BitString, BitString, usize)> {
    let l = scheme.coin_length(x.len());
    for attempt in 1..=MAX_KEYGEN_ATTEMPTS {
        let coins = random_bits(rng, l);
        if let KeyOutcome::Success(key) = scheme.keygen(x, &coins)? {
            return Ok((coins, key, attempt));
        }
    }
    Err(Error::KeygenFailed { attempts: MAX_KEYGEN_ATTEMPTS })
}

fn check_compatible(scheme: &dyn Scheme, server: &dyn ServerModel) -> Result<()> {
    let needed = scheme.manifest().response_bits_read;
    if server.response_length() < needed {
        return Err(Error::Inconsistent(format!(
            "scheme {} reads {needed} response bits but server {} answers with {}",
            scheme.name(),
            server.name(),
            server.response_length()
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transcript {
    pub x: BitString,
    pub coins: BitString,
    pub key: BitString,
    pub a: BitString,
    pub b: BitString,
    pub tau: bool,
    pub keygen_attempts: usize,
}

/// One execution of the protocol, retrying key generation on failure.
pub fn run_protocol<R: Rng + ?Sized>(
    scheme: &dyn Scheme,
    server: &dyn ServerModel,
    x: &BitString,
    rng: &mut R,
) -> Result<Transcript> {
    check_compatible(scheme, server)?;
    let (coins, key, keygen_attempts) = sample_key(scheme, x, rng)?;
    let a = scheme.encrypt(x, &key);
    let b = server.respond(&a)?.sample(rng);
    let tau = scheme.decrypt(x, &key, &b);
    Ok(Transcript { x: x.clone(), coins, key, a, b, tau, keygen_attempts })
}

/// Every coin string's key-generation outcome for one parameter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KeyTable {
    pub x: BitString,
    pub coin_length: usize,
    pub total: u64,
    pub failures: u64,
    /// Successful keys with the number of coin strings producing each.
    pub keys: BTreeMap<BitString, u64>,
}

impl KeyTable {
    pub fn successes(&self) -> u64 {
        self.total - self.failures
    }

    pub fn success_probability(&self) -> ExactReal {
        ExactReal::ratio(self.successes(), self.total)
    }

    /// `Pr[K(x) = key | success]`.
    pub fn key_probability(&self, key: &BitString) -> ExactReal {
        ExactReal::ratio(self.keys.get(key).copied().unwrap_or(0), self.successes())
    }
}

pub fn enumerate_keys(scheme: &dyn Scheme, x: &BitString, coin_budget: usize) -> Result<KeyTable> {
    let l = scheme.coin_length(x.len());
    let bound = coin_budget.min(62);
    if l > bound {
        return Err(Error::BoundExceeded { what: "coin enumeration", required: l, bound });
    }
    let total = 1u64 << l;
    let outcomes: Vec<KeyOutcome> =
        (0..total).into_par_iter().map(|i| scheme.keygen(x, &BitString::from_index(i, l))).collect::<Result<_>>()?;
    let mut keys = BTreeMap::new();
    let mut failures = 0;
    for outcome in outcomes {
        match outcome {
            KeyOutcome::Success(k) => *keys.entry(k).or_insert(0) += 1,
            KeyOutcome::Fail => failures += 1,
        }
    }
    if keys.is_empty() {
        return Err(Error::KeygenFailed { attempts: total as usize });
    }
    Ok(KeyTable { x: x.clone(), coin_length: l, total, failures, keys })
}

fn output_distribution(
    scheme: &dyn Scheme,
    server: &dyn ServerModel,
    x: &BitString,
    key: &BitString,
) -> Result<BinaryDistribution> {
    let q = server.respond(&scheme.encrypt(x, key))?;
    BinaryDistribution::from_p1(q.probability_where(|b| scheme.decrypt(x, key, b)))
}

/// `Pr(τ = z) = Σ_b q_{E(x,k)}(b) · [D(x, k, b) = z]` for a reachable key.
pub fn exact_output_distribution(
    scheme: &dyn Scheme,
    server: &dyn ServerModel,
    x: &BitString,
    key: &BitString,
    coin_budget: usize,
) -> Result<BinaryDistribution> {
    check_compatible(scheme, server)?;
    if !enumerate_keys(scheme, x, coin_budget)?.keys.contains_key(key) {
        return Err(Error::UnreachableKey { x: x.to_string(), key: key.to_string() });
    }
    output_distribution(scheme, server, x, key)
}

/// The ciphertext distribution `P_x(a)`, conditioned on successful keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncryptionSupport {
    pub x: BitString,
    pub probabilities: BTreeMap<BitString, ExactReal>,
}

impl EncryptionSupport {
    pub fn support(&self) -> BTreeSet<BitString> {
        self.probabilities.keys().cloned().collect()
    }
}

impl Serialize for EncryptionSupport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("x", &self.x)?;
        let probs: BTreeMap<String, String> =
            self.probabilities.iter().map(|(a, p)| (a.to_string(), p.to_string())).collect();
        map.serialize_entry("probabilities", &probs)?;
        map.end()
    }
}

pub fn encryption_support(scheme: &dyn Scheme, x: &BitString, coin_budget: usize) -> Result<EncryptionSupport> {
    let table = enumerate_keys(scheme, x, coin_budget)?;
    let mut counts: BTreeMap<BitString, u64> = BTreeMap::new();
    for (k, c) in &table.keys {
        *counts.entry(scheme.encrypt(x, k)).or_insert(0) += c;
    }
    let successes = table.successes();
    let probabilities = counts.into_iter().map(|(a, c)| (a, ExactReal::ratio(c, successes))).collect();
    Ok(EncryptionSupport { x: x.clone(), probabilities })
}

/// Limits and thresholds shared by the audits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditOptions {
    pub coin_budget: usize,
    pub dqc1_bound: usize,
    /// Key generation must succeed with probability at least `1/2 + margin`.
    pub success_margin: ExactReal,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            coin_budget: DEFAULT_COIN_BUDGET,
            dqc1_bound: DEFAULT_DQC1_BOUND,
            success_margin: ExactReal::ratio(1, 16),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KeygenCheck {
    pub x: BitString,
    pub success_probability: ExactReal,
    pub required: ExactReal,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KeyCheck {
    pub x: BitString,
    pub key: BitString,
    pub key_probability: ExactReal,
    #[serde(flatten)]
    pub check: MultiplicativeErrorReport,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct KeyRef {
    pub x: BitString,
    pub key: BitString,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrectnessReport {
    pub epsilon: Epsilon,
    pub keygen: Vec<KeygenCheck>,
    pub checks: Vec<KeyCheck>,
    pub violations: Vec<KeyRef>,
    pub pass: bool,
}

fn sorted_unique(xs: &[BitString]) -> Vec<BitString> {
    let set: BTreeSet<BitString> = xs.iter().cloned().collect();
    set.into_iter().collect()
}

/// ε-correctness: for every `x` and every successful key `k`, the output
/// distribution is within multiplicative error ε of the DQC1 distribution
/// of `V_x`. Key generation must also succeed often enough.
pub fn check_correctness(
    scheme: &dyn Scheme,
    server: &dyn ServerModel,
    family: &dyn CircuitFamily,
    xs: &[BitString],
    epsilon: &Epsilon,
    opts: &AuditOptions,
) -> Result<CorrectnessReport> {
    check_compatible(scheme, server)?;
    let required = &ExactReal::ratio(1, 2) + &opts.success_margin;
    let per_x: Vec<(KeygenCheck, Vec<KeyCheck>)> = sorted_unique(xs)
        .into_par_iter()
        .map(|x| {
            let table = enumerate_keys(scheme, &x, opts.coin_budget)?;
            let ideal = dqc1_distribution_with_bound(&family.circuit(&x)?, opts.dqc1_bound)?;
            let success_probability = table.success_probability();
            let keygen = KeygenCheck {
                x: x.clone(),
                pass: success_probability >= required,
                success_probability,
                required: required.clone(),
            };
            let checks = table
                .keys
                .keys()
                .map(|k| {
                    let claimed = output_distribution(scheme, server, &x, k)?;
                    Ok(KeyCheck {
                        x: x.clone(),
                        key: k.clone(),
                        key_probability: table.key_probability(k),
                        check: check_multiplicative_error(&ideal, &claimed, epsilon),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((keygen, checks))
        })
        .collect::<Result<_>>()?;
    let (keygen, checks): (Vec<_>, Vec<Vec<_>>) = per_x.into_iter().unzip();
    let checks: Vec<KeyCheck> = checks.into_iter().flatten().collect();
    let violations: Vec<KeyRef> =
        checks.iter().filter(|c| !c.check.pass).map(|c| KeyRef { x: c.x.clone(), key: c.key.clone() }).collect();
    let pass = violations.is_empty() && keygen.iter().all(|k| k.pass);
    Ok(CorrectnessReport { epsilon: epsilon.clone(), keygen, checks, violations, pass })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlindnessReport {
    pub x1: BitString,
    pub x2: BitString,
    pub support_size_x1: usize,
    pub support_size_x2: usize,
    /// Ciphertexts reachable from `x1` but not from `x2`.
    pub only_x1: Vec<BitString>,
    /// Ciphertexts reachable from `x2` but not from `x1`.
    pub only_x2: Vec<BitString>,
    pub pass: bool,
}

fn compare_supports(s1: &EncryptionSupport, s2: &EncryptionSupport) -> BlindnessReport {
    let (a, b) = (s1.support(), s2.support());
    let only_x1: Vec<BitString> = a.difference(&b).cloned().collect();
    let only_x2: Vec<BitString> = b.difference(&a).cloned().collect();
    BlindnessReport {
        x1: s1.x.clone(),
        x2: s2.x.clone(),
        support_size_x1: a.len(),
        support_size_x2: b.len(),
        pass: only_x1.is_empty() && only_x2.is_empty(),
        only_x1,
        only_x2,
    }
}

/// Blindness for one pair: both parameters reach the same ciphertexts.
pub fn check_blindness(
    scheme: &dyn Scheme,
    x1: &BitString,
    x2: &BitString,
    coin_budget: usize,
) -> Result<BlindnessReport> {
    if x1.len() != x2.len() {
        return Err(Error::LengthMismatch { expected: x1.len(), got: x2.len() });
    }
    Ok(compare_supports(&encryption_support(scheme, x1, coin_budget)?, &encryption_support(scheme, x2, coin_budget)?))
}

/// Blindness over every unordered pair of distinct equal-length parameters.
pub fn check_blindness_all(scheme: &dyn Scheme, xs: &[BitString], coin_budget: usize) -> Result<Vec<BlindnessReport>> {
    let xs = sorted_unique(xs);
    let supports: Vec<EncryptionSupport> =
        xs.par_iter().map(|x| encryption_support(scheme, x, coin_budget)).collect::<Result<_>>()?;
    let mut reports = Vec::new();
    for i in 0..supports.len() {
        for j in i + 1..supports.len() {
            if supports[i].x.len() == supports[j].x.len() {
                reports.push(compare_supports(&supports[i], &supports[j]));
            }
        }
    }
    Ok(reports)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub scheme: SchemeManifest,
    pub server: String,
    pub family: String,
    pub xs: Vec<BitString>,
    pub correctness: CorrectnessReport,
    pub blindness: Vec<BlindnessReport>,
    pub correct: bool,
    pub blind: bool,
    pub pass: bool,
}

pub fn audit_scheme(
    scheme: &dyn Scheme,
    server: &dyn ServerModel,
    family: &dyn CircuitFamily,
    xs: &[BitString],
    epsilon: &Epsilon,
    opts: &AuditOptions,
) -> Result<AuditReport> {
    let correctness = check_correctness(scheme, server, family, xs, epsilon, opts)?;
    let blindness = check_blindness_all(scheme, xs, opts.coin_budget)?;
    let correct = correctness.pass;
    let blind = blindness.iter().all(|b| b.pass);
    Ok(AuditReport {
        scheme: scheme.manifest(),
        server: server.name(),
        family: family.name(),
        xs: sorted_unique(xs),
        correctness,
        blindness,
        correct,
        blind,
        pass: correct && blind,
    })
}
