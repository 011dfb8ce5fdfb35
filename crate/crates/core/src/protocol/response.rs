use rand::Rng;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::exact::ExactReal;
use crate::simulate::{sample_index, BinaryDistribution, DEFAULT_SAMPLING_BITS};

/// An exact distribution over response strings of one fixed length.
/// Entries are sorted by response and zero-probability entries are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResponseDistribution {
    length: usize,
    entries: Vec<(BitString, ExactReal)>,
}

impl ResponseDistribution {
    pub fn new(length: usize, mut entries: Vec<(BitString, ExactReal)>) -> Result<Self> {
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::MalformedDistribution(format!("response {} listed twice", w[0].0)));
        }
        if let Some((b, _)) = entries.iter().find(|(b, _)| b.len() != length) {
            return Err(Error::MalformedDistribution(format!("response {b} is not of length {length}")));
        }
        if let Some((b, p)) = entries.iter().find(|(_, p)| p.is_negative()) {
            return Err(Error::MalformedDistribution(format!("response {b} has negative probability {p}")));
        }
        let total: ExactReal = entries.iter().map(|(_, p)| p.clone()).sum();
        if total != ExactReal::one() {
            return Err(Error::MalformedDistribution(format!("probabilities sum to {total}, not 1")));
        }
        entries.retain(|(_, p)| !p.is_zero());
        Ok(ResponseDistribution { length, entries })
    }

    /// The single-bit distribution `q(0) = d.p0`, `q(1) = d.p1`.
    pub fn from_binary(d: &BinaryDistribution) -> Self {
        let entries = vec![("0".parse().expect("bit"), d.p0().clone()), ("1".parse().expect("bit"), d.p1().clone())];
        ResponseDistribution::new(1, entries).expect("a binary distribution sums to 1")
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// The responses with positive probability, sorted.
    pub fn entries(&self) -> &[(BitString, ExactReal)] {
        &self.entries
    }

    pub fn probability(&self, b: &BitString) -> ExactReal {
        self.entries.iter().find(|(r, _)| r == b).map(|(_, p)| p.clone()).unwrap_or_else(ExactReal::zero)
    }

    /// `Σ_b q(b)` over the responses accepted by `pred`.
    pub fn probability_where(&self, mut pred: impl FnMut(&BitString) -> bool) -> ExactReal {
        self.entries.iter().filter(|(b, _)| pred(b)).map(|(_, p)| p.clone()).sum()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BitString {
        let probs: Vec<ExactReal> = self.entries.iter().map(|(_, p)| p.clone()).collect();
        self.entries[sample_index(&probs, rng, DEFAULT_SAMPLING_BITS)].0.clone()
    }
}

impl Serialize for ResponseDistribution {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.entries.len()))?;
        for (b, p) in &self.entries {
            map.serialize_entry(&b.to_string(), &p.to_string())?;
        }
        map.end()
    }
}
