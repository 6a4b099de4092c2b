//! Verdicts, witnesses and replay scripts shared by the decision modules.
//!
//! Witnesses are stored in printed form (words as strings over the shift's
//! alphabet) so that reports serialize deterministically and can be replayed
//! against a freshly loaded shift.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Confidence {
    Exact,
    /// Computed on a depth-truncated surrogate of an oracle shift.
    Bounded { depth: usize },
}

impl Confidence {
    pub fn and(self, other: Confidence) -> Confidence {
        match (self, other) {
            (Confidence::Exact, c) | (c, Confidence::Exact) => c,
            (Confidence::Bounded { depth: a }, Confidence::Bounded { depth: b }) => {
                Confidence::Bounded { depth: a.min(b) }
            }
        }
    }

    pub fn is_exact(self) -> bool {
        self == Confidence::Exact
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    /// A word of L_X with no one-letter left extension.
    NonExtendable { word: String },
    /// The language is that of the SFT of this memory.
    Memory { memory: usize },
    /// No memory up to the bound presents the language.
    NoMemoryUpTo { m_max: usize },
    /// Two distinct cycles at a common state, reached by `prefix`.
    TwoCycles { prefix: String, first: String, second: String },
    /// F_B = {γ^∞}.
    IsolatedPeriodic { b: Vec<String>, gamma: String },
    /// cost(B, x) = ∞.
    InfiniteCost { b: Vec<String>, x: String },
    /// cost(B, x) ≥ at_least, with at_least beyond any finite bound the
    /// procedure could certify.
    UnboundedCost { b: Vec<String>, x: String, at_least: usize },
    /// Forwarded from a sub-verdict.
    Clause { clause: String, detail: String },
}

/// One step of a witness replay: call a module operation and compare the
/// printed result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayStep {
    pub call: String,
    pub args: Vec<String>,
    pub expect: String,
}

impl ReplayStep {
    pub fn new<S: Into<String>>(call: &str, args: Vec<S>, expect: impl Into<String>) -> Self {
        ReplayStep {
            call: call.to_string(),
            args: args.into_iter().map(Into::into).collect(),
            expect: expect.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub property: String,
    pub value: bool,
    pub confidence: Confidence,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub replay: Vec<ReplayStep>,
}

impl Verdict {
    pub fn holds(property: &str, confidence: Confidence) -> Verdict {
        Verdict {
            property: property.to_string(),
            value: true,
            confidence,
            witness: None,
            replay: Vec::new(),
        }
    }

    pub fn fails(property: &str, confidence: Confidence, witness: Witness) -> Verdict {
        Verdict {
            property: property.to_string(),
            value: false,
            confidence,
            witness: Some(witness),
            replay: Vec::new(),
        }
    }

    pub fn with_witness(mut self, witness: Witness) -> Verdict {
        self.witness = Some(witness);
        self
    }

    pub fn with_replay(mut self, replay: Vec<ReplayStep>) -> Verdict {
        self.replay = replay;
        self
    }
}
