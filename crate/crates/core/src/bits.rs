//! Fixed-length bit strings used for parameters, keys, ciphertexts and
//! server responses.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A bit string, most significant (leftmost) bit first.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    pub fn empty() -> Self {
        BitString(Vec::new())
    }

    pub fn zeros(len: usize) -> Self {
        BitString(vec![false; len])
    }

    pub fn ones(len: usize) -> Self {
        BitString(vec![true; len])
    }

    /// The `len`-bit big-endian encoding of `value`.
    ///
    /// Panics if `len > 64` and high bits would be required, or `value`
    /// does not fit in `len` bits.
    pub fn from_index(value: u64, len: usize) -> Self {
        assert!(len >= 64 || value >> len == 0, "value {value} does not fit in {len} bits");
        BitString(
            (0..len)
                .map(|i| {
                    let shift = len - 1 - i;
                    shift < 64 && (value >> shift) & 1 == 1
                })
                .collect(),
        )
    }

    /// Big-endian integer value. Panics above 64 bits.
    pub fn to_index(&self) -> u64 {
        assert!(self.0.len() <= 64, "bit string too long for u64");
        self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    /// Bitwise XOR; both operands must have equal length.
    pub fn xor(&self, other: &BitString) -> BitString {
        assert_eq!(self.len(), other.len(), "xor of unequal-length bit strings");
        BitString(self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect())
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = self.0.clone();
        bits.extend_from_slice(&other.0);
        BitString(bits)
    }

    pub fn slice(&self, start: usize, end: usize) -> BitString {
        BitString(self.0[start..end].to_vec())
    }

    /// All `2^len` strings of the given length in lexicographic order.
    pub fn all(len: usize) -> impl Iterator<Item = BitString> {
        assert!(len < 64, "cannot enumerate 2^{len} strings");
        (0..1u64 << len).map(move |v| BitString::from_index(v, len))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidInput(format!("invalid bit character {other:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
