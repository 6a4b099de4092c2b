//! Subshift representations: full shifts, SFTs, sofic shifts given by a
//! labeled graph, and named oracle rules with a depth bound.

use std::borrow::Cow;
use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::machine::{Config, ConfigGraph, Machine, StateId};
use crate::verdict::{Confidence, ReplayStep, Verdict, Witness};
use crate::words::{words_of_length, Alphabet, EvPeriodicWord, Letter, Word, WordError};

#[derive(Debug, Error)]
pub enum ShiftError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("malformed shift spec: {0}")]
    Spec(String),
    #[error("the shift is empty")]
    EmptyShift,
    #[error("word of length {len} exceeds the oracle depth bound {depth}")]
    DepthExceeded { len: usize, depth: usize },
    #[error("the follower set is empty")]
    EmptyFollower,
    #[error("{0} is not supported for this kind of shift")]
    Unsupported(&'static str),
    #[error("{0}")]
    Precondition(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("search budget exhausted: {0}")]
    Budget(String),
    #[error("internal cross-check failed: {0}")]
    Inconsistent(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpecKind {
    Full,
    Sft,
    Sofic,
    Oracle,
}

/// The on-disk description of a shift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftSpec {
    pub alphabet: Vec<String>,
    pub kind: SpecKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub forbidden: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub states: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub edges: Vec<(String, String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth_bound: Option<usize>,
}

pub const BUILTIN_NAMES: [&str; 7] = ["even", "sft001", "golden", "full2", "markov3", "pow2", "ex14"];

pub fn builtin_spec_text(name: &str) -> Option<&'static str> {
    Some(match name.to_ascii_lowercase().as_str() {
        "even" => include_str!("../../../shifts/even.json"),
        "sft001" => include_str!("../../../shifts/sft001.json"),
        "golden" => include_str!("../../../shifts/golden.json"),
        "full2" => include_str!("../../../shifts/full2.json"),
        "markov3" => include_str!("../../../shifts/markov3.json"),
        "pow2" => include_str!("../../../shifts/pow2.json"),
        "ex14" => include_str!("../../../shifts/ex14.json"),
        _ => return None,
    })
}

/// A labeled graph presentation. States without an infinite future are
/// removed on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub states: Vec<String>,
    pub edges: Vec<(usize, Letter, usize)>,
    pub deterministic: bool,
}

impl Presentation {
    pub fn new(states: Vec<String>, edges: Vec<(usize, Letter, usize)>) -> Presentation {
        let n = states.len();
        let mut out = vec![Vec::new(); n];
        for &(s, _, t) in &edges {
            out[s].push(t);
        }
        let alive = crate::machine::greatest_alive(n, |q| out[q].clone());
        let mut renum = vec![usize::MAX; n];
        let mut kept = Vec::new();
        for q in 0..n {
            if alive[q] {
                renum[q] = kept.len();
                kept.push(states[q].clone());
            }
        }
        let mut edges: Vec<(usize, Letter, usize)> = edges
            .into_iter()
            .filter(|&(s, _, t)| alive[s] && alive[t])
            .map(|(s, a, t)| (renum[s], a, renum[t]))
            .collect();
        edges.sort();
        edges.dedup();
        let mut seen = BTreeSet::new();
        let deterministic = edges.iter().all(|&(s, a, _)| seen.insert((s, a)));
        Presentation { states: kept, edges, deterministic }
    }

    /// Subset construction starting from the given set of states.
    fn machine(&self, k: usize, initial: &[usize]) -> Option<Machine> {
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut sets: Vec<Vec<usize>> = Vec::new();
        let mut delta: Vec<Vec<Option<usize>>> = Vec::new();
        let mut start: Vec<usize> = initial.to_vec();
        start.sort_unstable();
        start.dedup();
        if start.is_empty() {
            return None;
        }
        index.insert(start.clone(), 0);
        sets.push(start);
        let mut i = 0;
        while i < sets.len() {
            let cur = sets[i].clone();
            let mut row = Vec::with_capacity(k);
            for a in 0..k {
                let mut next: Vec<usize> = self
                    .edges
                    .iter()
                    .filter(|&&(s, l, _)| l.index() == a && cur.binary_search(&s).is_ok())
                    .map(|&(_, _, t)| t)
                    .collect();
                next.sort_unstable();
                next.dedup();
                if next.is_empty() {
                    row.push(None);
                    continue;
                }
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = sets.len();
                        index.insert(next.clone(), id);
                        sets.push(next);
                        id
                    }
                };
                row.push(Some(id));
            }
            delta.push(row);
            i += 1;
        }
        let names: Vec<String> = sets
            .iter()
            .map(|s| {
                let inner: Vec<&str> = s.iter().map(|&q| self.states[q].as_str()).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect();
        Machine::build(k, 0, &delta, &names)
    }
}

/// History automaton of an SFT: states are the last (m−1) letters read.
fn sft_machine(alphabet: &Alphabet, forbidden: &[Word]) -> Option<Machine> {
    let k = alphabet.len();
    let m = forbidden.iter().map(Word::len).max().unwrap_or(1);
    let hist = m.saturating_sub(1);
    let mut index: HashMap<Vec<Letter>, usize> = HashMap::new();
    let mut states: Vec<Vec<Letter>> = vec![Vec::new()];
    index.insert(Vec::new(), 0);
    let mut delta = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let h = states[i].clone();
        let mut row = Vec::with_capacity(k);
        for a in 0..k {
            let mut w = h.clone();
            w.push(Letter(a as u16));
            if forbidden.iter().any(|f| w.ends_with(f.letters())) {
                row.push(None);
                continue;
            }
            let next = w[w.len().saturating_sub(hist)..].to_vec();
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    let id = states.len();
                    index.insert(next.clone(), id);
                    states.push(next);
                    id
                }
            };
            row.push(Some(id));
        }
        delta.push(row);
        i += 1;
    }
    let names: Vec<String> = states
        .iter()
        .map(|h| format!("[{}]", alphabet.fmt_word(&Word(h.clone()))))
        .collect();
    Machine::build(k, 0, &delta, &names)
}

/// Built-in factorial languages that are not given by a finite graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OracleRule {
    /// Over {0,1}: forbids 0 1^n 0 for n ≥ 1 not a power of two.
    Pow2,
    /// Over {0,1,2}: {1,2}^N together with the single point 0z, z the
    /// Thue–Morse word over {1,2}.
    Ex14,
}

impl OracleRule {
    pub fn from_name(name: &str) -> Option<OracleRule> {
        match name.to_ascii_lowercase().as_str() {
            "pow2" => Some(OracleRule::Pow2),
            "ex14" => Some(OracleRule::Ex14),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OracleRule::Pow2 => "pow2",
            OracleRule::Ex14 => "ex14",
        }
    }

    pub fn symbols(self) -> &'static [&'static str] {
        match self {
            OracleRule::Pow2 => &["0", "1"],
            OracleRule::Ex14 => &["0", "1", "2"],
        }
    }

    pub fn default_depth(self) -> usize {
        match self {
            OracleRule::Pow2 => 256,
            OracleRule::Ex14 => 64,
        }
    }

    /// Exact membership of a finite word in the language.
    pub fn accepts(self, w: &[Letter]) -> bool {
        match self {
            OracleRule::Pow2 => {
                let mut run: Option<usize> = None;
                for &a in w {
                    match (a.0, run) {
                        (0, Some(n)) if n > 1 && !n.is_power_of_two() => return false,
                        (0, _) => run = Some(0),
                        (_, Some(n)) => run = Some(n + 1),
                        (_, None) => {}
                    }
                }
                true
            }
            OracleRule::Ex14 => {
                if w.iter().skip(1).any(|a| a.0 == 0) {
                    return false;
                }
                match w.first() {
                    Some(a) if a.0 == 0 => {
                        w[1..].iter().enumerate().all(|(i, a)| *a == thue_morse_letter(i, Letter(1), Letter(2)))
                    }
                    _ => true,
                }
            }
        }
    }

    /// A finite deterministic surrogate agreeing with the language on all
    /// words of length ≤ `depth`.
    pub fn machine(self, depth: usize) -> Option<Machine> {
        let depth = depth.max(1);
        match self {
            OracleRule::Pow2 => {
                // 0 = no zero read yet, 1 + t = t ones since the last zero
                let n = depth + 2;
                let mut delta = vec![vec![None; 2]; n];
                delta[0] = vec![Some(1), Some(0)];
                for t in 0..=depth {
                    let zero_ok = t == 0 || t.is_power_of_two() || t == depth;
                    delta[1 + t][0] = zero_ok.then_some(1);
                    delta[1 + t][1] = Some(1 + (t + 1).min(depth));
                }
                let mut names = vec!["no-zero".to_string()];
                names.extend((0..=depth).map(|t| {
                    if t == depth {
                        format!("ones>={t}")
                    } else {
                        format!("ones={t}")
                    }
                }));
                Machine::build(2, 0, &delta, &names)
            }
            OracleRule::Ex14 => {
                // 0 = start, 1 = free over {1,2}, 2 + k = k letters of z read
                let n = depth + 2;
                let mut delta = vec![vec![None; 3]; n];
                delta[0] = vec![Some(2), Some(1), Some(1)];
                delta[1] = vec![None, Some(1), Some(1)];
                for k in 0..depth {
                    let zk = thue_morse_letter(k, Letter(1), Letter(2));
                    let next = if k + 1 < depth { 2 + k + 1 } else { 1 };
                    delta[2 + k][zk.index()] = Some(next);
                }
                let mut names = vec!["start".to_string(), "free".to_string()];
                names.extend((0..depth).map(|k| format!("z[{k}..]")));
                Machine::build(3, 0, &delta, &names)
            }
        }
    }
}

pub fn thue_morse_letter(i: usize, first: Letter, second: Letter) -> Letter {
    if i.count_ones().is_multiple_of(2) {
        first
    } else {
        second
    }
}

/// A point given either exactly as an eventually periodic word or by a
/// built-in generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Point {
    Ev(EvPeriodicWord),
    ThueMorse { first: Letter, second: Letter },
}

impl Point {
    pub fn letter(&self, i: usize) -> Letter {
        match self {
            Point::Ev(x) => x.letter(i),
            Point::ThueMorse { first, second } => thue_morse_letter(i, *first, *second),
        }
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word((0..n).map(|i| self.letter(i)).collect())
    }

    pub fn as_ev(&self) -> Option<&EvPeriodicWord> {
        match self {
            Point::Ev(x) => Some(x),
            _ => None,
        }
    }

    /// Accepts `pre(per)` or `thue-morse(a,b)`.
    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Point, WordError> {
        let t = text.trim();
        if let Some(args) = t.strip_prefix("thue-morse(").and_then(|r| r.strip_suffix(')')) {
            let parts: Vec<&str> = args.split(',').map(str::trim).collect();
            let bad = || WordError::Parse {
                input: text.to_string(),
                reason: "expected thue-morse(a,b) with two distinct symbols".into(),
            };
            if parts.len() != 2 {
                return Err(bad());
            }
            let first = alphabet.letter(parts[0]).ok_or_else(bad)?;
            let second = alphabet.letter(parts[1]).ok_or_else(bad)?;
            if first == second {
                return Err(bad());
            }
            return Ok(Point::ThueMorse { first, second });
        }
        Ok(Point::Ev(alphabet.parse_point(t)?))
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        match self {
            Point::Ev(x) => alphabet.fmt_point(x),
            Point::ThueMorse { first, second } => {
                format!("thue-morse({},{})", alphabet.symbol(*first), alphabet.symbol(*second))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum ShiftKind {
    Full,
    Sft { forbidden: Vec<Word> },
    Sofic { presentation: Presentation },
    Oracle { rule: OracleRule, depth_bound: usize },
}

/// The canonical follower configuration of a finite set of words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FollowerConfig {
    pub words: Vec<Word>,
    /// `None` when some word is outside L_X (F_B = ∅).
    pub config: Option<Config>,
    /// For each word, the printed machine state reached (a set of
    /// presentation states for sofic shifts).
    pub alive_sets: Vec<String>,
    pub confidence: Confidence,
}

#[derive(Clone, Debug)]
pub struct Subshift {
    alphabet: Alphabet,
    kind: ShiftKind,
    spec: ShiftSpec,
    machine: Machine,
}

/// Length of the prefix of a generated point that is checked on exact kinds.
const GENERATED_PREFIX: usize = 1024;

impl Subshift {
    pub fn from_spec(spec: ShiftSpec) -> Result<Subshift, ShiftError> {
        let alphabet = Alphabet::new(&spec.alphabet)?;
        let k = alphabet.len();
        let unexpected = |field: &str, present: bool| -> Result<(), ShiftError> {
            if present {
                Err(ShiftError::Spec(format!("field `{field}` does not apply to kind {:?}", spec.kind)))
            } else {
                Ok(())
            }
        };
        let (kind, machine) = match spec.kind {
            SpecKind::Full => {
                unexpected("forbidden", !spec.forbidden.is_empty())?;
                unexpected("states", !spec.states.is_empty())?;
                unexpected("edges", !spec.edges.is_empty())?;
                unexpected("rule", spec.rule.is_some())?;
                unexpected("depth_bound", spec.depth_bound.is_some())?;
                let delta = vec![(0..k).map(|_| Some(0)).collect()];
                let m = Machine::build(k, 0, &delta, &["*".to_string()]).ok_or(ShiftError::EmptyShift)?;
                (ShiftKind::Full, m)
            }
            SpecKind::Sft => {
                unexpected("states", !spec.states.is_empty())?;
                unexpected("edges", !spec.edges.is_empty())?;
                unexpected("rule", spec.rule.is_some())?;
                unexpected("depth_bound", spec.depth_bound.is_some())?;
                let forbidden = spec
                    .forbidden
                    .iter()
                    .map(|f| alphabet.parse_word(f))
                    .collect::<Result<Vec<_>, _>>()?;
                if forbidden.iter().any(Word::is_empty) {
                    return Err(ShiftError::Spec("forbidden words must be nonempty".into()));
                }
                let m = sft_machine(&alphabet, &forbidden).ok_or(ShiftError::EmptyShift)?;
                (ShiftKind::Sft { forbidden }, m)
            }
            SpecKind::Sofic => {
                unexpected("forbidden", !spec.forbidden.is_empty())?;
                unexpected("rule", spec.rule.is_some())?;
                unexpected("depth_bound", spec.depth_bound.is_some())?;
                let mut ids = HashMap::new();
                for (i, s) in spec.states.iter().enumerate() {
                    if ids.insert(s.as_str(), i).is_some() {
                        return Err(ShiftError::Spec(format!("duplicate state `{s}`")));
                    }
                }
                let mut edges = Vec::new();
                for (s, l, t) in &spec.edges {
                    let src = *ids.get(s.as_str()).ok_or_else(|| ShiftError::Spec(format!("unknown state `{s}`")))?;
                    let dst = *ids.get(t.as_str()).ok_or_else(|| ShiftError::Spec(format!("unknown state `{t}`")))?;
                    let a = alphabet.letter(l).ok_or_else(|| ShiftError::Spec(format!("unknown label `{l}`")))?;
                    edges.push((src, a, dst));
                }
                let p = Presentation::new(spec.states.clone(), edges);
                let all: Vec<usize> = (0..p.states.len()).collect();
                let m = p.machine(k, &all).ok_or(ShiftError::EmptyShift)?;
                (ShiftKind::Sofic { presentation: p }, m)
            }
            SpecKind::Oracle => {
                unexpected("forbidden", !spec.forbidden.is_empty())?;
                unexpected("states", !spec.states.is_empty())?;
                unexpected("edges", !spec.edges.is_empty())?;
                let name = spec.rule.as_deref().ok_or_else(|| ShiftError::Spec("oracle shifts need a `rule`".into()))?;
                let rule = OracleRule::from_name(name).ok_or_else(|| ShiftError::Spec(format!("unknown rule `{name}`")))?;
                if spec.alphabet.iter().map(String::as_str).ne(rule.symbols().iter().copied()) {
                    return Err(ShiftError::Spec(format!(
                        "rule `{name}` is defined over the alphabet {:?}",
                        rule.symbols()
                    )));
                }
                let depth_bound = spec.depth_bound.unwrap_or(rule.default_depth());
                if depth_bound == 0 {
                    return Err(ShiftError::Spec("depth_bound must be positive".into()));
                }
                validate_rule(rule, k, depth_bound.min(8))?;
                let m = rule.machine(depth_bound).ok_or(ShiftError::EmptyShift)?;
                (ShiftKind::Oracle { rule, depth_bound }, m)
            }
        };
        Ok(Subshift { alphabet, kind, spec, machine })
    }

    pub fn from_json(text: &str) -> Result<Subshift, ShiftError> {
        Subshift::from_spec(serde_json::from_str(text)?)
    }

    pub fn builtin(name: &str) -> Option<Subshift> {
        builtin_spec_text(name).map(|t| Subshift::from_json(t).expect("built-in specs are valid"))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn kind(&self) -> &ShiftKind {
        &self.kind
    }

    pub fn spec(&self) -> &ShiftSpec {
        &self.spec
    }

    pub fn is_oracle(&self) -> bool {
        matches!(self.kind, ShiftKind::Oracle { .. })
    }

    /// The machine at the shift's own depth (exact for non-oracle kinds).
    pub fn machine(&self) -> &Machine {
        &self.machine
    }

    /// The machine used for an analysis: for oracles, optionally truncated at
    /// a different depth.
    pub fn machine_at(&self, depth: Option<usize>) -> Cow<'_, Machine> {
        match (&self.kind, depth) {
            (ShiftKind::Oracle { rule, depth_bound }, Some(d)) if d != *depth_bound => {
                Cow::Owned(rule.machine(d).expect("oracle languages are nonempty"))
            }
            _ => Cow::Borrowed(&self.machine),
        }
    }

    pub fn confidence(&self) -> Confidence {
        self.confidence_at(None)
    }

    pub fn confidence_at(&self, depth: Option<usize>) -> Confidence {
        match self.kind {
            ShiftKind::Oracle { depth_bound, .. } => Confidence::Bounded { depth: depth.unwrap_or(depth_bound) },
            _ => Confidence::Exact,
        }
    }

    pub fn depth_bound(&self) -> Option<usize> {
        match self.kind {
            ShiftKind::Oracle { depth_bound, .. } => Some(depth_bound),
            _ => None,
        }
    }

    pub fn word(&self, text: &str) -> Result<Word, ShiftError> {
        Ok(self.alphabet.parse_word(text)?)
    }

    pub fn point(&self, text: &str) -> Result<EvPeriodicWord, ShiftError> {
        Ok(self.alphabet.parse_point(text)?)
    }

    pub fn show_word(&self, w: &Word) -> String {
        self.alphabet.fmt_word(w)
    }

    pub fn show_point(&self, x: &EvPeriodicWord) -> String {
        self.alphabet.fmt_point(x)
    }

    pub fn in_language(&self, w: &Word) -> Result<bool, ShiftError> {
        if let ShiftKind::Oracle { rule, depth_bound } = self.kind {
            if w.len() > depth_bound {
                return Err(ShiftError::DepthExceeded { len: w.len(), depth: depth_bound });
            }
            return Ok(rule.accepts(w.letters()));
        }
        Ok(self.machine.run(w.letters()).is_some())
    }

    /// Whether αx ∈ X, with the confidence of the answer.
    pub fn contains_prefixed(&self, alpha: &Word, x: &Point) -> (bool, Confidence) {
        match (&self.kind, x) {
            (ShiftKind::Oracle { rule, depth_bound }, _) => {
                let d = *depth_bound;
                let span = match x {
                    Point::Ev(x) => alpha.len() + x.description_len(),
                    Point::ThueMorse { .. } => alpha.len() + 2 * d,
                };
                let letter = |i: usize| {
                    if i < alpha.len() {
                        alpha.letters()[i]
                    } else {
                        x.letter(i - alpha.len())
                    }
                };
                let ok = (0..span.max(1)).all(|i| {
                    let window: Vec<Letter> = (i..i + d).map(letter).collect();
                    rule.accepts(&window)
                });
                (ok, Confidence::Bounded { depth: d })
            }
            (_, Point::Ev(x)) => (self.machine.runs_forever(self.machine.start(), &x.prepend(alpha)), Confidence::Exact),
            (_, Point::ThueMorse { .. }) => {
                let w = alpha.concat(&x.prefix(GENERATED_PREFIX));
                (self.machine.run(w.letters()).is_some(), Confidence::Bounded { depth: GENERATED_PREFIX })
            }
        }
    }

    pub fn contains_point(&self, x: &EvPeriodicWord) -> bool {
        self.contains_prefixed(&Word::empty(), &Point::Ev(x.clone())).0
    }

    pub fn follower_config(&self, b: &[Word]) -> FollowerConfig {
        self.follower_config_at(b, None)
    }

    pub fn follower_config_at(&self, b: &[Word], depth: Option<usize>) -> FollowerConfig {
        let m = self.machine_at(depth);
        let mut states = Vec::new();
        let mut alive_sets = Vec::new();
        let mut dead = false;
        for w in b {
            match m.run(w.letters()) {
                Some(q) => {
                    states.push(q);
                    alive_sets.push(m.name(q).to_string());
                }
                None => {
                    dead = true;
                    alive_sets.push("{}".to_string());
                }
            }
        }
        if b.is_empty() {
            states.push(m.start());
        }
        FollowerConfig {
            words: b.to_vec(),
            config: (!dead).then(|| Config::new(states)),
            alive_sets,
            confidence: self.confidence_at(depth),
        }
    }

    pub fn follower_nonempty(&self, cfg: &FollowerConfig) -> bool {
        let Some(c) = &cfg.config else { return false };
        let m = self.machine_at(confidence_depth(cfg.confidence));
        ConfigGraph::explore(&m, std::slice::from_ref(c)).alive[0]
    }

    pub fn follower_unique_point(&self, cfg: &FollowerConfig) -> Result<Option<EvPeriodicWord>, ShiftError> {
        let Some(c) = &cfg.config else { return Err(ShiftError::EmptyFollower) };
        let m = self.machine_at(confidence_depth(cfg.confidence));
        let g = ConfigGraph::explore(&m, std::slice::from_ref(c));
        if !g.alive[0] {
            return Err(ShiftError::EmptyFollower);
        }
        Ok(g.unique_point(0))
    }

    /// Whether some letter a has aw ∈ L_X.
    pub fn left_extendable(&self, w: &Word) -> Result<bool, ShiftError> {
        for a in self.alphabet.letters() {
            if self.in_language(&Word(vec![a]).concat(w))? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// σ is onto iff every word of L_X is left-extendable; decided by BFS on
    /// pairs (run of w, runs of aw for all a).
    pub fn is_surjective(&self) -> Result<Verdict, ShiftError> {
        if self.is_oracle() {
            return Err(ShiftError::Unsupported("exact surjectivity"));
        }
        Ok(self.surjectivity_on(&self.machine, Confidence::Exact))
    }

    /// The depth-truncated variant for oracle shifts.
    pub fn is_surjective_bounded(&self, depth: Option<usize>) -> Verdict {
        let m = self.machine_at(depth);
        self.surjectivity_on(&m, self.confidence_at(depth))
    }

    fn surjectivity_on(&self, m: &Machine, confidence: Confidence) -> Verdict {
        let start_set: Vec<StateId> = m.successors(m.start()).map(|(_, t)| t).collect();
        let start = (m.start(), Config::new(start_set));
        let mut prev: HashMap<(StateId, Config), Option<((StateId, Config), Letter)>> = HashMap::new();
        prev.insert(start.clone(), None);
        let mut queue = VecDeque::from([start]);
        while let Some((p, s)) = queue.pop_front() {
            if s.is_empty() {
                let mut path = Vec::new();
                let mut cur = (p, s);
                while let Some(Some((prv, a))) = prev.get(&cur) {
                    path.push(*a);
                    cur = prv.clone();
                }
                path.reverse();
                let w = self.show_word(&Word(path));
                return Verdict::fails("surjective", confidence, Witness::NonExtendable { word: w.clone() })
                    .with_replay(vec![
                        ReplayStep::new("in_language", vec![w.clone()], "true"),
                        ReplayStep::new("left_extendable", vec![w], "false"),
                    ]);
            }
            for (a, p2) in m.successors(p) {
                let s2 = Config::new(s.states().iter().filter_map(|&q| m.step(q, a)).collect());
                let key = (p2, s2);
                if !prev.contains_key(&key) {
                    prev.insert(key.clone(), Some(((p, s.clone()), a)));
                    queue.push_back(key);
                }
            }
        }
        Verdict::holds("surjective", confidence)
    }

    /// Whether X is of finite type, and with which memory.
    pub fn is_finite_type(&self, m_max: usize) -> Result<Verdict, ShiftError> {
        match &self.kind {
            ShiftKind::Full => Ok(Verdict::holds("finite-type", Confidence::Exact).with_witness(Witness::Memory { memory: 0 })),
            ShiftKind::Sft { forbidden } => {
                let memory = forbidden.iter().map(Word::len).max().unwrap_or(1).saturating_sub(1);
                Ok(Verdict::holds("finite-type", Confidence::Exact).with_witness(Witness::Memory { memory }))
            }
            ShiftKind::Sofic { .. } => {
                let k = self.alphabet.len();
                for m in 1..=m_max {
                    let forbidden: Vec<Word> = words_of_length(k, m + 1)
                        .into_iter()
                        .filter(|w| self.machine.run(w.letters()).is_none())
                        .collect();
                    let Some(sft) = sft_machine(&self.alphabet, &forbidden) else { continue };
                    if language_included(&sft, &self.machine) {
                        return Ok(Verdict::holds("finite-type", Confidence::Exact).with_witness(Witness::Memory { memory: m }));
                    }
                }
                Ok(Verdict::fails("finite-type", Confidence::Exact, Witness::NoMemoryUpTo { m_max }))
            }
            ShiftKind::Oracle { .. } => Err(ShiftError::Unsupported("finite-type test")),
        }
    }

    /// Λ_l(x) = {α : |α| = l, αx ∈ X}.
    pub fn lambda_l(&self, x: &Point, l: usize) -> (Vec<Word>, Confidence) {
        let mut conf = self.confidence();
        let out = words_of_length(self.alphabet.len(), l)
            .into_iter()
            .filter(|a| {
                let (ok, c) = self.contains_prefixed(a, x);
                conf = conf.and(c);
                ok
            })
            .collect();
        (out, conf)
    }
}

pub fn confidence_depth(c: Confidence) -> Option<usize> {
    match c {
        Confidence::Exact => None,
        Confidence::Bounded { depth } => Some(depth),
    }
}

/// L(a) ⊆ L(b) for machines whose states all have infinite futures.
pub fn language_included(a: &Machine, b: &Machine) -> bool {
    let mut seen = std::collections::HashSet::new();
    let mut stack = vec![(a.start(), b.start())];
    seen.insert((a.start(), b.start()));
    while let Some((p, q)) = stack.pop() {
        for (l, p2) in a.successors(p) {
            let Some(q2) = b.step(q, l) else { return false };
            if seen.insert((p2, q2)) {
                stack.push((p2, q2));
            }
        }
    }
    true
}

fn validate_rule(rule: OracleRule, k: usize, len: usize) -> Result<(), ShiftError> {
    for n in 0..=len {
        for w in words_of_length(k, n) {
            if !rule.accepts(w.letters()) {
                continue;
            }
            let l = w.letters();
            if n > 0 && (!rule.accepts(&l[1..]) || !rule.accepts(&l[..n - 1])) {
                return Err(ShiftError::Spec(format!("rule `{}` is not factorial", rule.name())));
            }
            let extendable = (0..k).any(|a| {
                let mut v = l.to_vec();
                v.push(Letter(a as u16));
                rule.accepts(&v)
            });
            if !extendable {
                return Err(ShiftError::Spec(format!("rule `{}` is not extendable", rule.name())));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn even() -> Subshift {
        Subshift::builtin("even").unwrap()
    }

    #[test]
    fn even_language() {
        let s = even();
        assert!(s.in_language(&s.word("0110").unwrap()).unwrap());
        assert!(!s.in_language(&s.word("010").unwrap()).unwrap());
        assert!(s.in_language(&Word::empty()).unwrap());
    }

    #[test]
    fn even_points() {
        let s = even();
        assert!(s.contains_point(&s.point("(1)").unwrap()));
        assert!(s.contains_point(&s.point("0(1)").unwrap()));
        assert!(!s.contains_point(&s.point("010(0)").unwrap()));
        let t = Subshift::builtin("sft001").unwrap();
        assert!(!t.contains_point(&t.point("(001)").unwrap()));
    }

    #[test]
    fn even_follower_configs() {
        let s = even();
        let c0 = s.follower_config(&[s.word("0").unwrap()]);
        assert_eq!(c0.alive_sets, vec!["{q0}"]);
        let c1 = s.follower_config(&[s.word("1").unwrap()]);
        assert_eq!(c1.alive_sets, vec!["{q0,q1}"]);
        assert_eq!(c1.config, s.follower_config(&[]).config);
        assert_eq!(s.follower_config(&[Word::empty()]).config, s.follower_config(&[]).config);
        let b = [s.word("01").unwrap(), s.word("011").unwrap()];
        let cfg = s.follower_config(&b);
        assert!(s.follower_nonempty(&cfg));
        assert_eq!(s.follower_unique_point(&cfg).unwrap(), Some(s.point("(1)").unwrap()));
        let cfg = s.follower_config(&[s.word("010").unwrap()]);
        assert!(cfg.config.is_none());
        assert!(s.follower_unique_point(&cfg).is_err());
    }

    #[test]
    fn surjectivity() {
        assert!(even().is_surjective().unwrap().value);
        let m3 = Subshift::builtin("markov3").unwrap();
        let v = m3.is_surjective().unwrap();
        assert!(!v.value);
        assert_eq!(v.witness, Some(Witness::NonExtendable { word: "1".into() }));
        assert!(Subshift::builtin("full2").unwrap().is_surjective().unwrap().value);
    }

    #[test]
    fn finite_type() {
        let v = even().is_finite_type(8).unwrap();
        assert!(!v.value);
        let g = Subshift::builtin("golden").unwrap().is_finite_type(8).unwrap();
        assert_eq!(g.witness, Some(Witness::Memory { memory: 1 }));
        let t = Subshift::builtin("sft001").unwrap().is_finite_type(8).unwrap();
        assert_eq!(t.witness, Some(Witness::Memory { memory: 2 }));
    }

    #[test]
    fn golden_as_sofic_has_memory_one() {
        let spec = r#"{"alphabet":["0","1"],"kind":"sofic","states":["a","b"],
            "edges":[["a","0","a"],["a","1","b"],["b","0","a"]]}"#;
        let s = Subshift::from_json(spec).unwrap();
        assert_eq!(s.is_finite_type(8).unwrap().witness, Some(Witness::Memory { memory: 1 }));
    }

    #[test]
    fn unknown_fields_rejected() {
        let spec = r#"{"alphabet":["0"],"kind":"full","colour":"red"}"#;
        assert!(Subshift::from_json(spec).is_err());
        let spec = r#"{"alphabet":["0","1"],"kind":"oracle","rule":"pow3"}"#;
        assert!(Subshift::from_json(spec).is_err());
    }

    #[test]
    fn oracle_machines_agree_with_rules() {
        for rule in [OracleRule::Pow2, OracleRule::Ex14] {
            let d = 7;
            let m = rule.machine(d).unwrap();
            let k = rule.symbols().len();
            for n in 0..=d {
                for w in words_of_length(k, n) {
                    assert_eq!(m.run(w.letters()).is_some(), rule.accepts(w.letters()), "{rule:?} {w:?}");
                }
            }
        }
    }

    #[test]
    fn oracle_depth_exceeded() {
        let p = Subshift::from_json(r#"{"alphabet":["0","1"],"kind":"oracle","rule":"pow2","depth_bound":4}"#).unwrap();
        assert!(matches!(p.in_language(&p.word("00000").unwrap()), Err(ShiftError::DepthExceeded { .. })));
    }

    #[test]
    fn lambda_sets() {
        let ex = Subshift::builtin("ex14").unwrap();
        let z = Point::parse(ex.alphabet(), "thue-morse(1,2)").unwrap();
        let (l, c) = ex.lambda_l(&z, 1);
        assert_eq!(l.len(), 3);
        assert!(!c.is_exact());
        let (l, _) = ex.lambda_l(&Point::Ev(ex.point("(1)").unwrap()), 1);
        assert_eq!(l, vec![ex.word("1").unwrap(), ex.word("2").unwrap()]);
        let f = Subshift::builtin("full2").unwrap();
        assert_eq!(f.lambda_l(&Point::Ev(f.point("0(1)").unwrap()), 2).0.len(), 4);
    }
}
