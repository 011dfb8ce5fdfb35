use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::{CircuitFamily, ResponseDistribution};
use crate::bits::BitString;
use crate::error::Result;
use crate::exact::ExactReal;
use crate::simulate::{dqc1_distribution_with_bound, BinaryDistribution, DEFAULT_DQC1_BOUND};

/// The server's behaviour: the exact response distribution `q_a` for every
/// message `a`.
pub trait ServerModel: Send + Sync {
    fn name(&self) -> String;

    fn response_length(&self) -> usize;

    fn respond(&self, a: &BitString) -> Result<ResponseDistribution>;

    fn single_bit(&self) -> bool {
        self.response_length() == 1
    }
}

/// Treats `a` as a parameter of its family and answers with the exact DQC1
/// distribution of `V_a`. Responses are cached per message.
pub struct HonestServer {
    family: Arc<dyn CircuitFamily>,
    bound: usize,
    cache: Mutex<HashMap<BitString, ResponseDistribution>>,
}

impl HonestServer {
    pub fn new(family: Arc<dyn CircuitFamily>) -> Self {
        HonestServer::with_bound(family, DEFAULT_DQC1_BOUND)
    }

    pub fn with_bound(family: Arc<dyn CircuitFamily>, bound: usize) -> Self {
        HonestServer { family, bound, cache: Mutex::new(HashMap::new()) }
    }
}

impl ServerModel for HonestServer {
    fn name(&self) -> String {
        "honest".into()
    }

    fn response_length(&self) -> usize {
        1
    }

    fn respond(&self, a: &BitString) -> Result<ResponseDistribution> {
        if let Some(d) = self.cache.lock().expect("cache lock").get(a) {
            return Ok(d.clone());
        }
        let d = ResponseDistribution::from_binary(&dqc1_distribution_with_bound(&self.family.circuit(a)?, self.bound)?);
        self.cache.lock().expect("cache lock").insert(a.clone(), d.clone());
        Ok(d)
    }
}

/// Answers 1 with the same probability for every message.
#[derive(Clone, Debug)]
pub struct FixedServer {
    distribution: ResponseDistribution,
    q1: ExactReal,
}

impl FixedServer {
    pub fn new(q1: ExactReal) -> Result<Self> {
        let distribution = ResponseDistribution::from_binary(&BinaryDistribution::from_p1(q1.clone())?);
        Ok(FixedServer { distribution, q1 })
    }
}

impl ServerModel for FixedServer {
    fn name(&self) -> String {
        format!("fixed:{}", self.q1)
    }

    fn response_length(&self) -> usize {
        1
    }

    fn respond(&self, _a: &BitString) -> Result<ResponseDistribution> {
        Ok(self.distribution.clone())
    }
}

/// Appends `extra` uniformly random bits to every response of `inner`,
/// giving a multi-bit response model whose first bit is unchanged.
pub struct PaddedServer {
    inner: Arc<dyn ServerModel>,
    extra: usize,
}

impl PaddedServer {
    pub fn new(inner: Arc<dyn ServerModel>, extra: usize) -> Self {
        PaddedServer { inner, extra }
    }
}

impl ServerModel for PaddedServer {
    fn name(&self) -> String {
        format!("padded:{}:{}", self.extra, self.inner.name())
    }

    fn response_length(&self) -> usize {
        self.inner.response_length() + self.extra
    }

    fn respond(&self, a: &BitString) -> Result<ResponseDistribution> {
        let base = self.inner.respond(a)?;
        let entries = base
            .entries()
            .iter()
            .flat_map(|(b, p)| {
                let p = p.div_pow2(self.extra as u32);
                BitString::all(self.extra).map(move |r| (b.concat(&r), p.clone()))
            })
            .collect();
        ResponseDistribution::new(self.response_length(), entries)
    }
}
