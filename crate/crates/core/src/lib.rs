//! Exact simulation of DQC1 and IQP circuits, the circuit reductions that
//! preserve zero/nonzero acceptance, audits of classical delegation schemes
//! for correctness and blindness, and the extraction procedure that turns a
//! blind and correct scheme into a decision procedure with advice.

pub mod bits;
pub mod circuit;
pub mod error;
pub mod exact;
pub mod extract;
pub mod protocol;
pub mod reductions;
pub mod simulate;

pub use bits::BitString;
pub use error::{Error, Result};
