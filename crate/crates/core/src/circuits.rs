//! Circuits, exits and strong exits.

use serde::{Deserialize, Serialize};

use crate::machine::{find_point, AvoidPrefix, Config, DifferFrom};
use crate::shifts::{Point, ShiftError, Subshift};
use crate::verdict::Confidence;
use crate::words::{EvPeriodicWord, Word};

/// Descriptions up to this length are searched first for witness points.
const WITNESS_ENUM: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitReport {
    pub gamma: String,
    pub is_circuit: bool,
    pub exit: Option<String>,
    pub strong_exit: Option<String>,
    /// n at which the chain F_{γ^n} is known to be constant.
    pub stabilization_index: Option<usize>,
    pub confidence: Confidence,
}

fn gamma_point(gamma: &Word) -> Result<EvPeriodicWord, ShiftError> {
    EvPeriodicWord::periodic(gamma.clone()).ok_or_else(|| ShiftError::Precondition("a circuit must be a nonempty word".into()))
}

pub fn is_circuit(s: &Subshift, gamma: &Word) -> Result<bool, ShiftError> {
    Ok(s.contains_point(&gamma_point(gamma)?))
}

fn require_circuit(s: &Subshift, gamma: &Word) -> Result<EvPeriodicWord, ShiftError> {
    let p = gamma_point(gamma)?;
    if !s.contains_point(&p) {
        return Err(ShiftError::Precondition(format!("{} is not a circuit", s.show_word(gamma))));
    }
    Ok(p)
}

/// Some y ≠ γ^∞ with γy ∈ X.
pub fn exit_of(s: &Subshift, gamma: &Word) -> Result<Option<EvPeriodicWord>, ShiftError> {
    let p = require_circuit(s, gamma)?;
    let m = s.machine();
    let q = m.run(gamma.letters()).expect("circuits are in the language");
    let y = find_point(m, &Config::single(q), &DifferFrom(&p), WITNESS_ENUM);
    Ok(match y {
        Some(y) if s.is_oracle() => oracle_confirms(s, gamma, &y, 1).then_some(y),
        other => other,
    })
}

/// The states s₀·γⁿ eventually cycle; returns (index where the cycle
/// starts, the states on the cycle).
fn power_chain(s: &Subshift, gamma: &Word) -> (usize, Vec<u32>) {
    let m = s.machine();
    let mut seen = std::collections::HashMap::new();
    let mut chain = Vec::new();
    let mut q = m.start();
    loop {
        q = m.run_from(q, gamma.letters()).expect("circuit powers are in the language");
        if let Some(&i) = seen.get(&q) {
            return (i + 1, chain[i..].to_vec());
        }
        seen.insert(q, chain.len());
        chain.push(q);
    }
}

/// A single y ≠ γ^∞, outside the cylinder of γ, with γⁿy ∈ X for every n.
pub fn strong_exit(s: &Subshift, gamma: &Word) -> Result<(Option<EvPeriodicWord>, usize), ShiftError> {
    require_circuit(s, gamma)?;
    let (index, cycle) = power_chain(s, gamma);
    let k = Config::new(cycle);
    let y = find_point(s.machine(), &k, &AvoidPrefix(gamma), WITNESS_ENUM);
    let y = match y {
        Some(y) if s.is_oracle() => {
            let depth = s.depth_bound().unwrap_or(1);
            oracle_confirms(s, gamma, &y, (depth / gamma.len()).max(1)).then_some(y)
        }
        other => other,
    };
    Ok((y, index))
}

/// Checks γⁿy on the oracle's own windows for n = 1..=n_max.
fn oracle_confirms(s: &Subshift, gamma: &Word, y: &EvPeriodicWord, n_max: usize) -> bool {
    (1..=n_max).all(|n| s.contains_prefixed(&gamma.repeat(n), &Point::Ev(y.clone())).0)
}

pub fn circuit_report(s: &Subshift, gamma: &Word) -> Result<CircuitReport, ShiftError> {
    let is_c = is_circuit(s, gamma)?;
    let mut report = CircuitReport {
        gamma: s.show_word(gamma),
        is_circuit: is_c,
        exit: None,
        strong_exit: None,
        stabilization_index: None,
        confidence: s.confidence(),
    };
    if is_c {
        report.exit = exit_of(s, gamma)?.map(|y| s.show_point(&y));
        let (y, index) = strong_exit(s, gamma)?;
        report.strong_exit = y.map(|y| s.show_point(&y));
        report.stabilization_index = Some(index);
    }
    Ok(report)
}
