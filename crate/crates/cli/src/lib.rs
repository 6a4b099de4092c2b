//! Command surface of the `subshift` tool: shift loading, the report
//! document, and the registry of reproducible examples.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use subshift::circuits::circuit_report;
use subshift::criteria::{self, criteria_report, replay_verdict, CostReport, Only};
use subshift::paction::{domain_contains, fixed_point, PartialMap};
use subshift::shifts::builtin_spec_text;
use subshift::spectrum::{limit_ball, to_dot, validate_element, xi_ball, PointFamily, SpectrumBall, DEFAULT_WINDOW};
use subshift::{Confidence, ShiftError, ShiftSpec, Subshift, Word};

pub mod reproduce;

pub const TOOL: &str = concat!("subshift ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Computed,
    PropertyFailed,
    InputError,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Computed => 0,
            Outcome::PropertyFailed => 1,
            Outcome::InputError => 2,
        }
    }
}

/// What every command prints. Field order is fixed and maps serialize
/// sorted, so equal inputs give byte-identical output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: String,
    pub command: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<ShiftSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidence: Option<Confidence>,
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub report: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Shift(#[from] ShiftError),
    #[error("{0}")]
    Input(String),
}

impl From<subshift::words::WordError> for CliError {
    fn from(e: subshift::words::WordError) -> CliError {
        CliError::Shift(e.into())
    }
}

impl From<subshift::spectrum::SpectrumError> for CliError {
    fn from(e: subshift::spectrum::SpectrumError) -> CliError {
        CliError::Input(e.to_string())
    }
}

/// A path to a JSON spec, or the name of a built-in shift (`even`,
/// `even.json`, …) when no such file exists.
pub fn load_shift(arg: &str) -> Result<Subshift, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{arg}: {e}")))?;
        return Ok(Subshift::from_json(&text)?);
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(arg);
    match builtin_spec_text(stem) {
        Some(text) => Ok(Subshift::from_json(text)?),
        None => Err(CliError::Input(format!("no spec file or built-in shift named `{arg}`"))),
    }
}

/// The parsed command, independent of the argument parser.
#[derive(Clone, Debug)]
pub enum Command {
    Lang { word: String },
    Follower { words: Vec<String> },
    Circuit { gamma: String },
    Paction { g: String, x: String },
    Spectrum { x: String, radius: usize },
    Limit { family: String, radius: usize, k_max: usize },
    Criteria { only: Option<Only> },
    Cost { b: Vec<String>, x: Option<String>, thomsen: bool },
}

/// Result of one command on a loaded shift; `dot` is the graph to write
/// when one was produced.
pub struct Output {
    pub outcome: Outcome,
    pub confidence: Confidence,
    pub report: Value,
    pub dot: Option<String>,
}

fn words(s: &Subshift, texts: &[String]) -> Result<Vec<Word>, CliError> {
    texts.iter().map(|t| Ok(s.word(t)?)).collect()
}

fn ball_view(s: &Subshift, ball: &SpectrumBall) -> Value {
    let al = s.alphabet();
    json!({
        "radius": ball.radius,
        "members": ball.members.iter().map(|g| al.fmt_element(g)).collect::<Vec<_>>(),
        "stem_prefix": s.show_word(&ball.stem_prefix),
        "stem": ball.stem.as_ref().map(|x| s.show_point(x)),
        "confidence": ball.confidence,
    })
}

fn cost_view(r: &CostReport) -> Value {
    serde_json::to_value(r).expect("reports serialize")
}

pub fn run(s: &Subshift, cmd: &Command, depth: Option<usize>) -> Result<Output, CliError> {
    let mut confidence = s.confidence();
    let mut outcome = Outcome::Computed;
    let mut dot = None;
    let report = match cmd {
        Command::Lang { word } => {
            let w = s.word(word)?;
            json!({
                "word": s.show_word(&w),
                "in_language": s.in_language(&w)?,
                "left_extendable": s.left_extendable(&w)?,
            })
        }
        Command::Follower { words: texts } => {
            let b = words(s, texts)?;
            for w in &b {
                s.in_language(w)?;
            }
            let cfg = s.follower_config(&b);
            confidence = cfg.confidence;
            let nonempty = s.follower_nonempty(&cfg);
            let unique = if nonempty { s.follower_unique_point(&cfg)?.map(|x| s.show_point(&x)) } else { None };
            json!({
                "words": b.iter().map(|w| s.show_word(w)).collect::<Vec<_>>(),
                "states": cfg.alive_sets,
                "nonempty": nonempty,
                "unique_point": unique,
            })
        }
        Command::Circuit { gamma } => {
            let r = circuit_report(s, &s.word(gamma)?)?;
            confidence = r.confidence;
            serde_json::to_value(&r).expect("reports serialize")
        }
        Command::Paction { g, x } => {
            let al = s.alphabet();
            let g = al.parse_element(g).map_err(ShiftError::from)?;
            let x = s.point(x)?;
            if !s.contains_point(&x) {
                return Err(CliError::Input(format!("{} is not a point of the shift", s.show_point(&x))));
            }
            let map = PartialMap::new(&g);
            json!({
                "g": al.fmt_element(&g),
                "x": s.show_point(&x),
                "alpha": map.pair.as_ref().map(|p| s.show_word(&p.alpha)),
                "beta": map.pair.as_ref().map(|p| s.show_word(&p.beta)),
                "in_domain": domain_contains(s, &g.inverse(), &x),
                "image": map.apply(s, &x).map(|y| s.show_point(&y)),
                "fixed_point": if g.is_unit() { None } else { fixed_point(s, &g)?.map(|y| s.show_point(&y)) },
            })
        }
        Command::Spectrum { x, radius } => {
            let x = s.point(x)?;
            if !s.contains_point(&x) {
                return Err(CliError::Input(format!("{} is not a point of the shift", s.show_point(&x))));
            }
            let ball = xi_ball(s, &x, *radius);
            let v = validate_element(s, &ball);
            confidence = ball.confidence;
            if !v.value {
                outcome = Outcome::PropertyFailed;
            }
            dot = Some(to_dot(s.alphabet(), &ball));
            json!({ "x": s.show_point(&x), "ball": ball_view(s, &ball), "validation": v })
        }
        Command::Limit { family, radius, k_max } => {
            let fam = PointFamily::parse(s, family)?;
            let (ball, stab) = limit_ball(s, &fam, *radius, *k_max, DEFAULT_WINDOW)?;
            let validation = ball.as_ref().map(|b| validate_element(s, b));
            if let Some(b) = &ball {
                confidence = b.confidence;
                dot = Some(to_dot(s.alphabet(), b));
            }
            if validation.as_ref().is_some_and(|v| !v.value) {
                outcome = Outcome::PropertyFailed;
            }
            let limit = fam.limit();
            let xi = s.contains_point(&limit).then(|| xi_ball(s, &limit, *radius));
            json!({
                "family": fam.name,
                "limit_point": s.show_point(&limit),
                "stabilization": stab,
                "ball": ball.as_ref().map(|b| ball_view(s, b)),
                "validation": validation,
                "equals_xi_of_limit": match (&ball, &xi) {
                    (Some(b), Some(x)) => Some(b.members == x.members),
                    _ => None,
                },
            })
        }
        Command::Criteria { only } => {
            let r = criteria_report(s, *only, depth)?;
            confidence = r.confidence;
            let mut replays = serde_json::Map::new();
            for (name, v) in &r.verdicts {
                if let Err(e) = replay_verdict(s, v) {
                    outcome = Outcome::PropertyFailed;
                    replays.insert(name.clone(), Value::String(e));
                }
            }
            let mut value = serde_json::to_value(&r).expect("reports serialize");
            if !replays.is_empty() {
                value["replay_failures"] = Value::Object(replays);
            }
            value
        }
        Command::Cost { b, x, thomsen } => {
            let b = words(s, b)?;
            let r = match (x, thomsen) {
                (Some(x), false) => criteria::cost(s, &b, &s.point(x)?)?,
                (Some(x), true) => criteria::thomsen_cost(s, &b, &s.point(x)?)?,
                (None, false) => criteria::sup_cost(s, &b)?,
                (None, true) => criteria::thomsen_sup(s, &b)?,
            };
            confidence = r.confidence;
            if let Err(e) = criteria::replay(s, &r.replay, subshift::shifts::confidence_depth(r.confidence)) {
                outcome = Outcome::PropertyFailed;
                let mut v = cost_view(&r);
                v["replay_failure"] = Value::String(e);
                v
            } else {
                cost_view(&r)
            }
        }
    };
    Ok(Output { outcome, confidence, report, dot })
}

/// Loads the shift, runs the command and wraps the result; errors become
/// documents with outcome `input-error`.
pub fn document(spec: &str, cmd: &Command, depth: Option<usize>, argv: Vec<String>) -> (ReportDocument, Option<String>) {
    let mut doc = ReportDocument {
        tool: TOOL.into(),
        command: argv,
        shift: None,
        confidence: None,
        outcome: Outcome::InputError,
        report: Value::Null,
        error: None,
    };
    let s = match load_shift(spec) {
        Ok(s) => s,
        Err(e) => {
            doc.error = Some(e.to_string());
            return (doc, None);
        }
    };
    doc.shift = Some(s.spec().clone());
    match run(&s, cmd, depth) {
        Ok(out) => {
            doc.outcome = out.outcome;
            doc.confidence = Some(out.confidence);
            doc.report = out.report;
            (doc, out.dot)
        }
        Err(e) => {
            if let CliError::Shift(ShiftError::Inconsistent(_)) = e {
                doc.outcome = Outcome::PropertyFailed;
            }
            doc.error = Some(e.to_string());
            (doc, None)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_load_by_name_or_file_stem() {
        assert!(load_shift("even").is_ok());
        assert!(load_shift("somewhere/golden.json").is_ok());
        assert!(matches!(load_shift("nothing"), Err(CliError::Input(_))));
    }

    #[test]
    fn follower_report() {
        let s = load_shift("even").unwrap();
        let out = run(&s, &Command::Follower { words: vec!["01".into(), "011".into()] }, None).unwrap();
        assert_eq!(out.outcome, Outcome::Computed);
        assert_eq!(out.report["unique_point"], "(1)");
    }

    #[test]
    fn bad_input_is_an_input_error() {
        let (doc, dot) = document("even", &Command::Lang { word: "0x".into() }, None, vec![]);
        assert_eq!(doc.outcome, Outcome::InputError);
        assert!(doc.error.is_some() && dot.is_none());
    }
}
