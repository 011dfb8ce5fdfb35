//! The decision procedure built from a blind and correct scheme.
//!
//! Advice for input length `s` is a ciphertext `a_s = E(1^s, k_s)` together
//! with the server's response model `q_{a_s}`. On input `x` the procedure
//! draws `k ← K(x)`, rejects unless `E(x, k) = a_s`, and otherwise draws
//! `b ~ q_{a_s}` and accepts iff `D(x, k, b) = 1`. Its acceptance
//! probability is `p_acc = η · Pr(ξ = 1)` with `η = Pr[E(x, K(x)) = a_s]`.
//! Blindness makes `η > 0`; correctness makes `Pr(ξ = 1)` multiplicatively
//! close to `p1(x)`, so `p_acc > 0` exactly when `p1(x) > 0`.

mod all_demo;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::exact::ExactReal;
use crate::protocol::{enumerate_keys, sample_key, ResponseDistribution, Scheme, ServerModel};
use crate::simulate::Epsilon;

pub use all_demo::{all_demo, all_demo_run_once, AllDemoOutcome, TruthTable, ALL_DEMO_BOUND};

/// Whether the advice carries one number `q(0)` or a full distribution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ResponseMode {
    Single,
    Poly,
}

impl FromStr for ResponseMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(ResponseMode::Single),
            "poly" => Ok(ResponseMode::Poly),
            other => Err(Error::InvalidInput(format!("unknown mode {other:?} (known: single, poly)"))),
        }
    }
}

impl fmt::Display for ResponseMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResponseMode::Single => "single",
            ResponseMode::Poly => "poly",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum ResponseModel {
    Single { q0: ExactReal },
    Poly { distribution: ResponseDistribution },
}

impl ResponseModel {
    pub fn distribution(&self) -> ResponseDistribution {
        match self {
            ResponseModel::Single { q0 } => {
                let entries =
                    vec![("0".parse().expect("bit"), q0.clone()), ("1".parse().expect("bit"), q0.complement())];
                ResponseDistribution::new(1, entries).expect("q0 is a probability")
            }
            ResponseModel::Poly { distribution } => distribution.clone(),
        }
    }
}

/// Advice for inputs of length `s`. The coins and key are recorded so that
/// an experiment can be replayed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Advice {
    pub s: usize,
    pub coins: BitString,
    pub key: BitString,
    pub a_s: BitString,
    pub response: ResponseModel,
}

/// Samples `k_s ← K(1^s)`, sets `a_s = E(1^s, k_s)` and records the
/// server's exact response model for `a_s`.
pub fn make_advice<R: Rng + ?Sized>(
    scheme: &dyn Scheme,
    server: &dyn ServerModel,
    s: usize,
    mode: ResponseMode,
    rng: &mut R,
) -> Result<Advice> {
    let ones = BitString::ones(s);
    let (coins, key, _) = sample_key(scheme, &ones, rng)?;
    let a_s = scheme.encrypt(&ones, &key);
    let distribution = server.respond(&a_s)?;
    let response = match mode {
        ResponseMode::Single => {
            if distribution.length() != 1 {
                return Err(Error::Inconsistent(format!(
                    "single mode needs one-bit responses; server {} answers with {} bits",
                    server.name(),
                    distribution.length()
                )));
            }
            ResponseModel::Single { q0: distribution.probability(&"0".parse().expect("bit")) }
        }
        ResponseMode::Poly => ResponseModel::Poly { distribution },
    };
    Ok(Advice { s, coins, key, a_s, response })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtractionOutcome {
    pub x: BitString,
    /// `Pr[E(x, K(x)) = a_s]` over successful keys.
    pub eta: ExactReal,
    /// `Pr(ξ = 1)` conditioned on a matching ciphertext; 0 when `η = 0`.
    pub pr_xi_1: ExactReal,
    pub p_acc: ExactReal,
    pub accept: bool,
}

impl ExtractionOutcome {
    /// `η(1-ε)·p1 ≤ p_acc ≤ η(1+ε)·p1`.
    pub fn within_bounds(&self, p1: &ExactReal, epsilon: &Epsilon) -> bool {
        let eps = epsilon.as_exact();
        let centre = &self.eta * p1;
        let low = &centre * &(ExactReal::one() - eps.clone());
        let high = &centre * &(ExactReal::one() + eps);
        low <= self.p_acc && self.p_acc <= high
    }
}

/// The exact acceptance probability of the procedure, by enumerating every
/// coin string; accepts iff `p_acc > 0`.
pub fn extract_decide(
    scheme: &dyn Scheme,
    advice: &Advice,
    x: &BitString,
    coin_budget: usize,
) -> Result<ExtractionOutcome> {
    if x.len() != advice.s {
        return Err(Error::LengthMismatch { expected: advice.s, got: x.len() });
    }
    let table = enumerate_keys(scheme, x, coin_budget)?;
    let q = advice.response.distribution();
    let mut matching = 0u64;
    let mut weighted = ExactReal::zero();
    for (k, &count) in &table.keys {
        if scheme.encrypt(x, k) == advice.a_s {
            matching += count;
            let xi = q.probability_where(|b| scheme.decrypt(x, k, b));
            weighted = &weighted + &(&xi * &ExactReal::integer(count as i64));
        }
    }
    let successes = table.successes();
    let eta = ExactReal::ratio(matching, successes);
    let p_acc = &weighted * &ExactReal::ratio(1, successes);
    let pr_xi_1 = if matching == 0 { ExactReal::zero() } else { &weighted * &ExactReal::ratio(1, matching) };
    Ok(ExtractionOutcome { x: x.clone(), accept: p_acc.is_positive(), eta, pr_xi_1, p_acc })
}

/// One sampled run of the procedure.
pub fn extract_run_once<R: Rng + ?Sized>(
    scheme: &dyn Scheme,
    advice: &Advice,
    x: &BitString,
    rng: &mut R,
) -> Result<bool> {
    if x.len() != advice.s {
        return Err(Error::LengthMismatch { expected: advice.s, got: x.len() });
    }
    let (_, key, _) = sample_key(scheme, x, rng)?;
    if scheme.encrypt(x, &key) != advice.a_s {
        return Ok(false);
    }
    let b = advice.response.distribution().sample(rng);
    Ok(scheme.decrypt(x, &key, &b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Circuit, Gate};
    use crate::protocol::{
        ConstantScheme, FixedFamily, FixedServer, GateCycleFamily, HonestServer, LeakyScheme, OneTimePadScheme,
        PaddedServer,
    };
    use crate::simulate::dqc1_distribution;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn bits(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn advice_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let server = FixedServer::new(ExactReal::ratio(1, 3)).unwrap();
        let a = make_advice(&LeakyScheme, &server, 3, ResponseMode::Single, &mut rng).unwrap();
        assert_eq!(a.a_s, bits("111"));
        assert_eq!(a.response, ResponseModel::Single { q0: ExactReal::ratio(2, 3) });
        let a = make_advice(&ConstantScheme, &server, 3, ResponseMode::Single, &mut rng).unwrap();
        assert_eq!(a.a_s, bits("000"));
        let a = make_advice(&OneTimePadScheme, &server, 3, ResponseMode::Poly, &mut rng).unwrap();
        assert_eq!(a.a_s, bits("111").xor(&a.key));
        let padded = PaddedServer::new(Arc::new(server), 1);
        assert!(make_advice(&LeakyScheme, &padded, 3, ResponseMode::Single, &mut rng).is_err());
    }

    #[test]
    fn leaky_scheme_never_matches_other_inputs() {
        let family = Arc::new(GateCycleFamily);
        let server = HonestServer::new(family);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let advice = make_advice(&LeakyScheme, &server, 2, ResponseMode::Single, &mut rng).unwrap();
        for x in BitString::all(2).filter(|x| *x != bits("11")) {
            let o = extract_decide(&LeakyScheme, &advice, &x, 20).unwrap();
            assert!(o.eta.is_zero() && o.p_acc.is_zero() && !o.accept);
        }
    }

    #[test]
    fn constant_scheme_with_silent_server_rejects() {
        let server = FixedServer::new(ExactReal::zero()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let advice = make_advice(&ConstantScheme, &server, 2, ResponseMode::Single, &mut rng).unwrap();
        for x in BitString::all(2) {
            assert!(!extract_decide(&ConstantScheme, &advice, &x, 20).unwrap().accept);
        }
    }

    #[test]
    fn degenerate_family_accepts_within_bounds() {
        let circuit = Circuit::new(2, vec![Gate::h(1), Gate::cnot(1, 0), Gate::t(0)]).unwrap();
        let p1 = dqc1_distribution(&circuit).unwrap().p1().clone();
        let family = Arc::new(FixedFamily { circuit });
        let server = HonestServer::new(family);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for scheme in [&ConstantScheme as &dyn Scheme, &OneTimePadScheme] {
            let advice = make_advice(scheme, &server, 3, ResponseMode::Single, &mut rng).unwrap();
            for x in BitString::all(3) {
                let o = extract_decide(scheme, &advice, &x, 20).unwrap();
                assert!(o.accept);
                assert_eq!(o.p_acc, &o.eta * &o.pr_xi_1);
                assert!(o.within_bounds(&p1, &Epsilon::zero()));
            }
        }
    }

    #[test]
    fn single_and_poly_modes_agree() {
        let family = Arc::new(GateCycleFamily);
        let server = HonestServer::new(family);
        let a =
            make_advice(&ConstantScheme, &server, 3, ResponseMode::Single, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let b =
            make_advice(&ConstantScheme, &server, 3, ResponseMode::Poly, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        for x in BitString::all(3) {
            assert_eq!(
                extract_decide(&ConstantScheme, &a, &x, 20).unwrap(),
                extract_decide(&ConstantScheme, &b, &x, 20).unwrap()
            );
        }
    }

    #[test]
    fn run_once_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let always = FixedServer::new(ExactReal::one()).unwrap();
        let advice = make_advice(&ConstantScheme, &always, 2, ResponseMode::Single, &mut rng).unwrap();
        assert!((0..200).all(|_| extract_run_once(&ConstantScheme, &advice, &bits("01"), &mut rng).unwrap()));
        let leaky = make_advice(&LeakyScheme, &always, 2, ResponseMode::Single, &mut rng).unwrap();
        assert!((0..200).all(|_| !extract_run_once(&LeakyScheme, &leaky, &bits("01"), &mut rng).unwrap()));
    }

    #[test]
    fn length_mismatch() {
        let server = FixedServer::new(ExactReal::one()).unwrap();
        let advice =
            make_advice(&ConstantScheme, &server, 2, ResponseMode::Single, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert!(extract_decide(&ConstantScheme, &advice, &bits("1"), 20).is_err());
    }
}
