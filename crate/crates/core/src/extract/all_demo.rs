//! Any `f: {0,1}^s → {0,1,⊥}` is decided with probabilistic advice: the
//! advice distribution puts mass `2^-s` on each pair `(x, f(x))`, and the
//! procedure samples a pair, rejects unless its first part is the input,
//! and accepts iff its second part is 1.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Serialize, Serializer};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::exact::ExactReal;
use crate::simulate::{sample_index, DEFAULT_SAMPLING_BITS};

/// Largest `s` accepted by [`TruthTable::new`].
pub const ALL_DEMO_BOUND: usize = 16;

/// A table over `{0,1}^s` with values 0, 1 or undefined (`None`), indexed
/// by the input read as a binary number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthTable {
    s: usize,
    values: Vec<Option<bool>>,
}

impl TruthTable {
    pub fn new(s: usize, values: Vec<Option<bool>>) -> Result<Self> {
        if s > ALL_DEMO_BOUND {
            return Err(Error::BoundExceeded { what: "truth table size", required: s, bound: ALL_DEMO_BOUND });
        }
        if values.len() != 1 << s {
            return Err(Error::LengthMismatch { expected: 1 << s, got: values.len() });
        }
        Ok(TruthTable { s, values })
    }

    pub fn from_fn(s: usize, f: impl Fn(&BitString) -> Option<bool>) -> Result<Self> {
        if s > ALL_DEMO_BOUND {
            return Err(Error::BoundExceeded { what: "truth table size", required: s, bound: ALL_DEMO_BOUND });
        }
        TruthTable::new(s, BitString::all(s).map(|x| f(&x)).collect())
    }

    pub fn parity(s: usize) -> Result<Self> {
        TruthTable::from_fn(s, |x| Some(x.count_ones() % 2 == 1))
    }

    /// Each entry 0, 1 or undefined with equal probability.
    pub fn random<R: Rng + ?Sized>(s: usize, rng: &mut R) -> Result<Self> {
        if s > ALL_DEMO_BOUND {
            return Err(Error::BoundExceeded { what: "truth table size", required: s, bound: ALL_DEMO_BOUND });
        }
        let values = (0..1usize << s).map(|_| [None, Some(false), Some(true)][rng.random_range(0..3)]).collect();
        TruthTable::new(s, values)
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn value(&self, x: &BitString) -> Option<bool> {
        self.values[x.to_index() as usize]
    }
}

/// One character per input in index order: `0`, `1`, or `x` for undefined.
impl FromStr for TruthTable {
    type Err = Error;
    fn from_str(text: &str) -> Result<Self> {
        let values: Vec<Option<bool>> = text
            .chars()
            .map(|c| match c {
                '0' => Ok(Some(false)),
                '1' => Ok(Some(true)),
                'x' | '⊥' => Ok(None),
                other => Err(Error::InvalidInput(format!("truth table entry {other:?} is not 0, 1 or x"))),
            })
            .collect::<Result<_>>()?;
        if !values.len().is_power_of_two() {
            return Err(Error::InvalidInput(format!("truth table length {} is not a power of two", values.len())));
        }
        TruthTable::new(values.len().trailing_zeros() as usize, values)
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.values {
            f.write_str(match v {
                Some(false) => "0",
                Some(true) => "1",
                None => "x",
            })?;
        }
        Ok(())
    }
}

impl Serialize for TruthTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AllDemoOutcome {
    pub x: BitString,
    pub s: usize,
    pub f_x: Option<bool>,
    pub p_acc: ExactReal,
    pub accept: bool,
}

/// The advice distribution: `((x', f(x')), 2^-s)` for every `x'`.
fn advice(table: &TruthTable) -> Vec<((BitString, Option<bool>), ExactReal)> {
    let mass = ExactReal::one().div_pow2(table.s as u32);
    BitString::all(table.s)
        .map(|x| {
            let y = table.value(&x);
            ((x, y), mass.clone())
        })
        .collect()
}

fn check_length(table: &TruthTable, x: &BitString) -> Result<()> {
    if x.len() != table.s {
        return Err(Error::LengthMismatch { expected: table.s, got: x.len() });
    }
    Ok(())
}

/// Exact acceptance probability of the advice procedure on `x`.
pub fn all_demo(table: &TruthTable, x: &BitString) -> Result<AllDemoOutcome> {
    check_length(table, x)?;
    let p_acc: ExactReal =
        advice(table).into_iter().filter(|((x2, y), _)| x2 == x && *y == Some(true)).map(|(_, p)| p).sum();
    Ok(AllDemoOutcome { x: x.clone(), s: table.s, f_x: table.value(x), accept: p_acc.is_positive(), p_acc })
}

/// One sampled run of the advice procedure.
pub fn all_demo_run_once<R: Rng + ?Sized>(table: &TruthTable, x: &BitString, rng: &mut R) -> Result<bool> {
    check_length(table, x)?;
    let q = advice(table);
    let probs: Vec<ExactReal> = q.iter().map(|(_, p)| p.clone()).collect();
    let ((x2, y), _) = &q[sample_index(&probs, rng, DEFAULT_SAMPLING_BITS)];
    Ok(x2 == x && *y == Some(true))
}
