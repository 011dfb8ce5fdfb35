//! Built-in schemes, servers and families selected by name.
//!
//! Names may carry a parameter after a colon: `local:4`, `flagged:otp`,
//! `fixed:1/3`, `padded:2:honest`.

use std::sync::Arc;

use super::{
    CircuitFamily, ConstantScheme, FixedFamily, FixedServer, FlaggedScheme, GateCycleFamily, HonestServer, LeakyScheme,
    LocalSamplerScheme, OneTimePadScheme, PaddedServer, ParityFamily, Scheme, SchemeManifest, ServerModel,
};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::exact::{parse_rational, ExactReal};

const DEFAULT_LOCAL_BITS: usize = 4;

fn parse_count(s: &str, what: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::InvalidInput(format!("{what} expects a non-negative integer, got {s:?}")))
}

/// `gates`, `parity`, or `fixed` (which needs `circuit`).
pub fn family_from_spec(spec: &str, circuit: Option<&Circuit>) -> Result<Arc<dyn CircuitFamily>> {
    match spec {
        "gates" => Ok(Arc::new(GateCycleFamily)),
        "parity" => Ok(Arc::new(ParityFamily)),
        "fixed" => {
            let circuit = circuit.ok_or_else(|| Error::InvalidInput("family fixed needs a circuit".into()))?;
            Ok(Arc::new(FixedFamily { circuit: circuit.clone() }))
        }
        other => Err(Error::InvalidInput(format!("unknown family {other:?} (known: gates, parity, fixed)"))),
    }
}

/// `leaky`, `constant`, `otp`, `local[:bits]`, or `flagged:<scheme>`.
pub fn scheme_from_spec(spec: &str, family: &Arc<dyn CircuitFamily>) -> Result<Box<dyn Scheme>> {
    let (head, param) = match spec.split_once(':') {
        Some((h, p)) => (h, Some(p)),
        None => (spec, None),
    };
    match (head, param) {
        ("leaky", None) => Ok(Box::new(LeakyScheme)),
        ("constant", None) => Ok(Box::new(ConstantScheme)),
        ("otp", None) => Ok(Box::new(OneTimePadScheme)),
        ("local", p) => {
            let bits = p.map(|p| parse_count(p, "local")).transpose()?.unwrap_or(DEFAULT_LOCAL_BITS);
            Ok(Box::new(LocalSamplerScheme::new(family.clone(), bits)))
        }
        ("flagged", Some(inner)) => Ok(Box::new(FlaggedScheme::new(scheme_from_spec(inner, family)?))),
        _ => Err(Error::InvalidInput(format!(
            "unknown scheme {spec:?} (known: leaky, constant, otp, local[:bits], flagged:<scheme>)"
        ))),
    }
}

/// `honest`, `fixed:<q1>`, or `padded:<extra>[:<server>]` (default inner
/// server `honest`).
pub fn server_from_spec(
    spec: &str,
    family: &Arc<dyn CircuitFamily>,
    dqc1_bound: usize,
) -> Result<Arc<dyn ServerModel>> {
    let (head, param) = match spec.split_once(':') {
        Some((h, p)) => (h, Some(p)),
        None => (spec, None),
    };
    match (head, param) {
        ("honest", None) => Ok(Arc::new(HonestServer::with_bound(family.clone(), dqc1_bound))),
        ("fixed", Some(q1)) => Ok(Arc::new(FixedServer::new(ExactReal::from_rational(&parse_rational(q1)?))?)),
        ("padded", Some(rest)) => {
            let (extra, inner) = rest.split_once(':').unwrap_or((rest, "honest"));
            let inner = server_from_spec(inner, family, dqc1_bound)?;
            Ok(Arc::new(PaddedServer::new(inner, parse_count(extra, "padded")?)))
        }
        _ => Err(Error::InvalidInput(format!(
            "unknown server {spec:?} (known: honest, fixed:<q1>, padded:<extra>[:<server>])"
        ))),
    }
}

/// Manifests of the built-in schemes, local samplers bound to `family`.
pub fn builtin_manifests(family: &Arc<dyn CircuitFamily>) -> Vec<SchemeManifest> {
    ["leaky", "constant", "otp", "local", "flagged:otp"]
        .iter()
        .map(|s| scheme_from_spec(s, family).expect("built-in name").manifest())
        .collect()
}
