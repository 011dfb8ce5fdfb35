use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use serde::Serialize;

use super::CircuitFamily;
use crate::bits::BitString;
use crate::error::Result;
use crate::simulate::dqc1_distribution;

/// Result of running key generation on one coin string.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum KeyOutcome {
    Success(BitString),
    Fail,
}

/// `per_input_bit · |x| + constant`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LengthFormula {
    pub per_input_bit: usize,
    pub constant: usize,
}

impl LengthFormula {
    pub fn constant(constant: usize) -> Self {
        LengthFormula { per_input_bit: 0, constant }
    }

    pub fn eval(&self, input_len: usize) -> usize {
        self.per_input_bit * input_len + self.constant
    }
}

/// The declarative part of a scheme, as listed by the CLI.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchemeManifest {
    pub name: String,
    pub description: String,
    pub coin_length: LengthFormula,
    pub ciphertext_length: LengthFormula,
    /// How many leading response bits decryption reads; servers must
    /// answer with at least this many.
    pub response_bits_read: usize,
    /// Whether key generation may report failure.
    pub flagged: bool,
}

/// A delegation scheme `(K, E, D)` with explicit coins, so that keys can be
/// enumerated exhaustively. All methods must be deterministic.
pub trait Scheme: Send + Sync {
    fn manifest(&self) -> SchemeManifest;

    fn keygen(&self, x: &BitString, coins: &BitString) -> Result<KeyOutcome>;

    fn encrypt(&self, x: &BitString, key: &BitString) -> BitString;

    fn decrypt(&self, x: &BitString, key: &BitString, b: &BitString) -> bool;

    fn name(&self) -> String {
        self.manifest().name
    }

    fn coin_length(&self, input_len: usize) -> usize {
        self.manifest().coin_length.eval(input_len)
    }
}

/// Sends the parameter in the clear: correct against an honest server,
/// never blind.
#[derive(Clone, Copy, Debug, Default)]
pub struct LeakyScheme;

impl Scheme for LeakyScheme {
    fn manifest(&self) -> SchemeManifest {
        SchemeManifest {
            name: "leaky".into(),
            description: "a = x, key empty, τ = b[0]".into(),
            coin_length: LengthFormula::constant(0),
            ciphertext_length: LengthFormula { per_input_bit: 1, constant: 0 },
            response_bits_read: 1,
            flagged: false,
        }
    }

    fn keygen(&self, _x: &BitString, _coins: &BitString) -> Result<KeyOutcome> {
        Ok(KeyOutcome::Success(BitString::empty()))
    }

    fn encrypt(&self, x: &BitString, _key: &BitString) -> BitString {
        x.clone()
    }

    fn decrypt(&self, _x: &BitString, _key: &BitString, b: &BitString) -> bool {
        b.bit(0)
    }
}

/// Sends `0^{|x|}` whatever the parameter: blind, and correct only when
/// every same-length parameter has the same distribution.
#[derive(Clone, Copy, Debug, Default)]
pub struct ConstantScheme;

impl Scheme for ConstantScheme {
    fn manifest(&self) -> SchemeManifest {
        SchemeManifest {
            name: "constant".into(),
            description: "a = 0^|x|, key empty, τ = b[0]".into(),
            coin_length: LengthFormula::constant(0),
            ciphertext_length: LengthFormula { per_input_bit: 1, constant: 0 },
            response_bits_read: 1,
            flagged: false,
        }
    }

    fn keygen(&self, _x: &BitString, _coins: &BitString) -> Result<KeyOutcome> {
        Ok(KeyOutcome::Success(BitString::empty()))
    }

    fn encrypt(&self, x: &BitString, _key: &BitString) -> BitString {
        BitString::zeros(x.len())
    }

    fn decrypt(&self, _x: &BitString, _key: &BitString, b: &BitString) -> bool {
        b.bit(0)
    }
}

/// `a = x ⊕ k` for a uniform key `k`: every ciphertext is reachable from
/// every parameter.
#[derive(Clone, Copy, Debug, Default)]
pub struct OneTimePadScheme;

impl Scheme for OneTimePadScheme {
    fn manifest(&self) -> SchemeManifest {
        SchemeManifest {
            name: "otp".into(),
            description: "k = coins, a = x xor k, τ = b[0]".into(),
            coin_length: LengthFormula { per_input_bit: 1, constant: 0 },
            ciphertext_length: LengthFormula { per_input_bit: 1, constant: 0 },
            response_bits_read: 1,
            flagged: false,
        }
    }

    fn keygen(&self, _x: &BitString, coins: &BitString) -> Result<KeyOutcome> {
        Ok(KeyOutcome::Success(coins.clone()))
    }

    fn encrypt(&self, x: &BitString, key: &BitString) -> BitString {
        x.xor(key)
    }

    fn decrypt(&self, _x: &BitString, _key: &BitString, b: &BitString) -> bool {
        b.bit(0)
    }
}

/// Wraps a scheme with a key-generation failure flag: two extra coins,
/// failure when both are 1, so keys succeed with probability 3/4.
pub struct FlaggedScheme {
    inner: Box<dyn Scheme>,
}

impl FlaggedScheme {
    pub fn new(inner: Box<dyn Scheme>) -> Self {
        FlaggedScheme { inner }
    }
}

impl Scheme for FlaggedScheme {
    fn manifest(&self) -> SchemeManifest {
        let inner = self.inner.manifest();
        SchemeManifest {
            name: format!("flagged:{}", inner.name),
            description: format!("{}; fails when the two trailing coins are both 1", inner.description),
            coin_length: LengthFormula { constant: inner.coin_length.constant + 2, ..inner.coin_length },
            flagged: true,
            ..inner
        }
    }

    fn keygen(&self, x: &BitString, coins: &BitString) -> Result<KeyOutcome> {
        let l = coins.len() - 2;
        if coins.bit(l) && coins.bit(l + 1) {
            return Ok(KeyOutcome::Fail);
        }
        self.inner.keygen(x, &coins.slice(0, l))
    }

    fn encrypt(&self, x: &BitString, key: &BitString) -> BitString {
        self.inner.encrypt(x, key)
    }

    fn decrypt(&self, x: &BitString, key: &BitString, b: &BitString) -> bool {
        self.inner.decrypt(x, key, b)
    }
}

/// The client samples the answer herself with `bits` coins: the key is the
/// bit `[coins < ⌊p1·2^bits⌋]`, the ciphertext is `0^{|x|}` and the server
/// is ignored. Blind on any family; correct exactly when every `p1` is 0
/// or 1, since each fixed key yields a point mass.
pub struct LocalSamplerScheme {
    family: Arc<dyn CircuitFamily>,
    bits: usize,
    thresholds: Mutex<HashMap<BitString, BigInt>>,
}

impl LocalSamplerScheme {
    pub fn new(family: Arc<dyn CircuitFamily>, bits: usize) -> Self {
        LocalSamplerScheme { family, bits, thresholds: Mutex::new(HashMap::new()) }
    }

    fn threshold(&self, x: &BitString) -> Result<BigInt> {
        if let Some(t) = self.thresholds.lock().expect("cache lock").get(x) {
            return Ok(t.clone());
        }
        let d = dqc1_distribution(&self.family.circuit(x)?)?;
        let t = d.p1().floor_scaled(self.bits as u32);
        self.thresholds.lock().expect("cache lock").insert(x.clone(), t.clone());
        Ok(t)
    }
}

impl Scheme for LocalSamplerScheme {
    fn manifest(&self) -> SchemeManifest {
        SchemeManifest {
            name: format!("local:{}", self.bits),
            description: format!(
                "key = [coins < floor(p1·2^{})] on family {}, a = 0^|x|, τ = key",
                self.bits,
                self.family.name()
            ),
            coin_length: LengthFormula::constant(self.bits),
            ciphertext_length: LengthFormula { per_input_bit: 1, constant: 0 },
            response_bits_read: 1,
            flagged: false,
        }
    }

    fn keygen(&self, x: &BitString, coins: &BitString) -> Result<KeyOutcome> {
        let below = BigInt::from(coins.to_index()) < self.threshold(x)?;
        Ok(KeyOutcome::Success(BitString::new(vec![below])))
    }

    fn encrypt(&self, x: &BitString, _key: &BitString) -> BitString {
        BitString::zeros(x.len())
    }

    fn decrypt(&self, _x: &BitString, key: &BitString, _b: &BitString) -> bool {
        key.bit(0)
    }
}
