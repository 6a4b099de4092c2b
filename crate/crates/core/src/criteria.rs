//! Decision procedures: costs of reaching points, the cofinality family,
//! topological freeness, minimality and simplicity.
//!
//! Everything runs on the follower machine. A finite set B enters only
//! through its configuration C_B; the configurations reachable from C_B
//! (with their BFS distance, i.e. the shortest bridge γ) form the finite
//! set 𝒦, and
//!
//!   cost(B, x) = min over a of  a + min{ dist(K) : K ∈ 𝒦, σ^a x ∈ F_K }.
//!
//! "cost > k" is then a safety-style property of x that is decided by a
//! search over (position, state, surviving obligations).

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::machine::{follower_included, greatest_alive, lex_least_point, sccs, Config, ConfigGraph, Machine, StateId};
use crate::shifts::{ShiftError, ShiftKind, Subshift};
use crate::verdict::{Confidence, ReplayStep, Verdict, Witness};
use crate::words::{ev_periodic_of_description, words_of_length, EvPeriodicWord, Letter, Word};

/// Depth of the surrogate machine used for criteria on oracle shifts.
pub const CRITERIA_ORACLE_DEPTH: usize = 32;
/// Search budget for crazy inclusions, in |μ| + |ν|.
pub const CRAZY_BUDGET: usize = 6;

const CONFIG_BUDGET: usize = 1 << 16;
const PRODUCT_BUDGET: usize = 1 << 20;
const WITNESS_ENUM: usize = 6;
const PERIODIC_PROBE: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum CostValue {
    Finite(usize),
    Infinite,
}

impl CostValue {
    pub fn finite(self) -> Option<usize> {
        match self {
            CostValue::Finite(n) => Some(n),
            CostValue::Infinite => None,
        }
    }
}

impl fmt::Display for CostValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostValue::Finite(n) => write!(f, "{n}"),
            CostValue::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for CostValue {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "inf" | "∞" => Ok(CostValue::Infinite),
            _ => s.parse().map(CostValue::Finite).map_err(|_| format!("not a cost: {s}")),
        }
    }
}

impl From<CostValue> for String {
    fn from(c: CostValue) -> String {
        c.to_string()
    }
}

impl TryFrom<String> for CostValue {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub x: String,
    pub cost: CostValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostReport {
    pub b: Vec<String>,
    /// The target point, or "sup" for suprema over X.
    pub x: String,
    pub cost: CostValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
    /// For suprema: a point whose cost is the reported value, or, for an
    /// infinite supremum without infinite-cost points, a point of large cost.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attained_at: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attained_cost: Option<CostValue>,
    /// Oracle suprema: the probes that set a new record.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub records: Vec<ProbeRecord>,
    pub confidence: Confidence,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub replay: Vec<ReplayStep>,
}

/// 𝒦 for one configuration, sorted by (distance, bridge word).
struct Reach<'m> {
    m: &'m Machine,
    configs: Vec<Config>,
    dist: Vec<usize>,
    words: Vec<Word>,
    next: Vec<Vec<Option<u32>>>,
}

/// Cost of one point: (cost, |α|, index of K).
type CostHit = (usize, usize, usize);

impl<'m> Reach<'m> {
    fn new(m: &'m Machine, root: &Config) -> Reach<'m> {
        let g = ConfigGraph::explore(m, std::slice::from_ref(root));
        let words = g.bfs_words(0);
        // paths into live configurations stay live
        let mut live: Vec<(usize, Word)> = words.into_iter().filter(|(v, _)| g.alive[*v]).collect();
        live.sort_by(|a, b| a.1.cmp(&b.1));
        let pos: HashMap<usize, u32> = live.iter().enumerate().map(|(i, (v, _))| (*v, i as u32)).collect();
        let next = live
            .iter()
            .map(|(v, _)| g.succ[*v].iter().map(|t| t.and_then(|t| pos.get(&t).copied())).collect())
            .collect();
        Reach {
            m,
            configs: live.iter().map(|(v, _)| g.nodes[*v].clone()).collect(),
            dist: live.iter().map(|(_, w)| w.len()).collect(),
            words: live.into_iter().map(|(_, w)| w).collect(),
            next,
        }
    }

    fn max_dist(&self) -> usize {
        self.dist.last().copied().unwrap_or(0)
    }

    /// Number of configurations with distance ≤ j (a prefix of the order).
    fn within(&self, j: usize) -> usize {
        self.dist.partition_point(|&d| d <= j)
    }

    fn first_inside(&self, profile: &[bool], limit: usize) -> Option<usize> {
        (0..limit).find(|&i| self.configs[i].states().iter().all(|&q| profile[q as usize]))
    }

    fn cost_of(&self, x: &EvPeriodicWord) -> Option<CostHit> {
        let profiles = self.m.profiles(x);
        let mut best: Option<CostHit> = None;
        for (a, p) in profiles.iter().enumerate() {
            if best.is_some_and(|b| a >= b.0) {
                break;
            }
            if let Some(i) = self.first_inside(p, self.configs.len()) {
                if best.is_none_or(|b| a + self.dist[i] < b.0) {
                    best = Some((a + self.dist[i], a, i));
                }
            }
        }
        best
    }

    fn thomsen_of(&self, x: &EvPeriodicWord) -> Option<(usize, usize)> {
        let p = &self.m.profiles(x)[0];
        self.first_inside(p, self.configs.len()).map(|i| (self.dist[i], i))
    }

    fn step_set(&self, o: &[u32], a: Letter) -> Vec<u32> {
        let mut v: Vec<u32> = o.iter().filter_map(|&i| self.next[i as usize][a.index()]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    fn with_prefix(&self, mut o: Vec<u32>, n: usize) -> Vec<u32> {
        o.extend(0..n as u32);
        o.sort_unstable();
        o.dedup();
        o
    }

    fn complete(&self, path: Vec<Letter>, q: StateId) -> EvPeriodicWord {
        lex_least_point(self.m, &Config::single(q))
            .expect("machine states have an infinite future")
            .prepend(&Word(path))
    }

    /// A point of cost > k, if any.
    fn exceeds(&self, k: usize) -> Result<Option<EvPeriodicWord>, ShiftError> {
        let start = (0usize, self.m.start(), (0..self.within(k) as u32).collect::<Vec<_>>());
        bfs_to_goal(self.m, start, |&(pos, _, ref o)| pos > k && o.is_empty(), |(pos, _, o), a, q2| {
            let mut o2 = self.step_set(o, a);
            let p2 = pos + 1;
            if p2 <= k {
                o2 = self.with_prefix(o2, self.within(k - p2));
            }
            (p2.min(k + 1), q2, o2)
        })
        .map(|hit| hit.map(|(path, (_, q, _))| self.complete(path, q)))
    }

    /// A point of Thomsen cost > k, if any.
    fn exceeds_thomsen(&self, k: usize) -> Result<Option<EvPeriodicWord>, ShiftError> {
        let start = (self.m.start(), (0..self.within(k) as u32).collect::<Vec<_>>());
        bfs_to_goal(self.m, start, |(_, o)| o.is_empty(), |(_, o), a, q2| (q2, self.step_set(o, a)))
            .map(|hit| hit.map(|(path, (q, _))| self.complete(path, q)))
    }

    /// A point of infinite cost, as a lasso through an accepting cycle of
    /// the breakpoint construction over (state, pending obligations).
    fn infinite_point(&self) -> Result<Option<EvPeriodicWord>, ShiftError> {
        let all: Vec<u32> = (0..self.configs.len() as u32).collect();
        let mut nodes: Vec<(StateId, Vec<u32>)> = vec![(self.m.start(), all.clone())];
        let mut index: HashMap<(StateId, Vec<u32>), usize> = HashMap::from([(nodes[0].clone(), 0)]);
        let mut parent: Vec<Option<(usize, Letter)>> = vec![None];
        let mut edges: Vec<Vec<(Letter, usize, bool)>> = Vec::new();
        let mut i = 0;
        while i < nodes.len() {
            let (q, mo) = nodes[i].clone();
            let mut row = Vec::new();
            for (a, q2) in self.m.successors(q) {
                let mut m2 = self.step_set(&mo, a);
                let acc = m2.is_empty();
                if acc {
                    m2 = all.clone();
                }
                let key = (q2, m2);
                let j = match index.get(&key) {
                    Some(&j) => j,
                    None => {
                        if nodes.len() >= PRODUCT_BUDGET {
                            return Err(ShiftError::Budget("infinite-cost search".into()));
                        }
                        index.insert(key.clone(), nodes.len());
                        nodes.push(key);
                        parent.push(Some((i, a)));
                        nodes.len() - 1
                    }
                };
                row.push((a, j, acc));
            }
            edges.push(row);
            i += 1;
        }
        let succ: Vec<Vec<usize>> = edges.iter().map(|r| r.iter().map(|e| e.1).collect()).collect();
        let comp = sccs(&succ);
        for (u, row) in edges.iter().enumerate() {
            for &(a, v, acc) in row {
                if !acc || comp[u] != comp[v] {
                    continue;
                }
                let prefix = trace(&parent, u);
                // back from v to u inside the component
                let mut back: HashMap<usize, (usize, Letter)> = HashMap::new();
                let mut queue = VecDeque::from([v]);
                let mut seen = vec![false; nodes.len()];
                seen[v] = true;
                while let Some(w) = queue.pop_front() {
                    if w == u {
                        break;
                    }
                    for &(b, t, _) in &edges[w] {
                        if comp[t] == comp[u] && !seen[t] {
                            seen[t] = true;
                            back.insert(t, (w, b));
                            queue.push_back(t);
                        }
                    }
                }
                let mut cycle = Vec::new();
                let mut cur = u;
                while cur != v {
                    let (p, b) = back[&cur];
                    cycle.push(b);
                    cur = p;
                }
                cycle.push(a);
                cycle.reverse();
                return Ok(EvPeriodicWord::new(Word(prefix), Word(cycle)));
            }
        }
        Ok(None)
    }
}

fn trace(parent: &[Option<(usize, Letter)>], mut v: usize) -> Vec<Letter> {
    let mut out = Vec::new();
    while let Some((p, a)) = parent[v] {
        out.push(a);
        v = p;
    }
    out.reverse();
    out
}

/// Breadth-first search over a product with the machine; returns the word
/// leading to the first goal node and that node.
fn bfs_to_goal<N, G, S>(m: &Machine, start: N, goal: G, step: S) -> Result<Option<(Vec<Letter>, N)>, ShiftError>
where
    N: Clone + Eq + std::hash::Hash + ProductNode,
    G: Fn(&N) -> bool,
    S: Fn(&N, Letter, StateId) -> N,
{
    let mut nodes = vec![start.clone()];
    let mut parent: Vec<Option<(usize, Letter)>> = vec![None];
    let mut seen: HashMap<N, usize> = HashMap::from([(start, 0)]);
    let mut i = 0;
    while i < nodes.len() {
        let n = nodes[i].clone();
        if goal(&n) {
            return Ok(Some((trace(&parent, i), n)));
        }
        for (a, q2) in m.successors(n.state()) {
            let n2 = step(&n, a, q2);
            if !seen.contains_key(&n2) {
                if nodes.len() >= PRODUCT_BUDGET {
                    return Err(ShiftError::Budget("cost search".into()));
                }
                seen.insert(n2.clone(), nodes.len());
                nodes.push(n2);
                parent.push(Some((i, a)));
            }
        }
        i += 1;
    }
    Ok(None)
}

trait ProductNode {
    fn state(&self) -> StateId;
}

impl ProductNode for (usize, StateId, Vec<u32>) {
    fn state(&self) -> StateId {
        self.1
    }
}

impl ProductNode for (StateId, Vec<u32>) {
    fn state(&self) -> StateId {
        self.0
    }
}

/// The supremum of cost over X for one configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Sup {
    Finite { value: usize, at: EvPeriodicWord },
    /// `at` has cost `at_cost` (infinite or merely large), computed on the
    /// surrogate of depth `depth` for oracles.
    Unbounded { at: EvPeriodicWord, at_cost: CostValue, depth: Option<usize> },
}

fn enum_bound(k: usize) -> usize {
    let mut d = 0;
    while d < 8 && k.pow(d as u32 + 1) <= 256 {
        d += 1;
    }
    d.max(2)
}

fn points_in(s: &Subshift, m: &Machine, max_desc: usize) -> Vec<EvPeriodicWord> {
    let mut out = Vec::new();
    for d in 1..=max_desc {
        for x in ev_periodic_of_description(m.alphabet_size(), d) {
            let inside = if s.is_oracle() { s.contains_point(&x) } else { m.runs_forever(m.start(), &x) };
            if inside {
                out.push(x);
            }
        }
    }
    out
}

fn cap_at(c: Option<usize>, depth: Option<usize>) -> CostValue {
    match (c, depth) {
        (Some(c), Some(d)) if c >= d => CostValue::Infinite,
        (Some(c), _) => CostValue::Finite(c),
        (None, _) => CostValue::Infinite,
    }
}

/// The analysis context: the machine used (a surrogate for oracles) and
/// the probes used where exact procedures are unavailable.
pub struct Analysis<'s> {
    s: &'s Subshift,
    machine: std::borrow::Cow<'s, Machine>,
    depth: Option<usize>,
    probes: Vec<EvPeriodicWord>,
    families: Vec<Vec<EvPeriodicWord>>,
    wide: Option<Surrogate>,
    memo: BTreeMap<&'static str, Verdict>,
}

/// The surrogate at twice the analysis depth, with longer probe families:
/// an oracle supremum is read as unbounded when it grows with the depth.
struct Surrogate {
    machine: Machine,
    depth: usize,
    families: Vec<Vec<EvPeriodicWord>>,
}

impl<'s> Analysis<'s> {
    /// `depth` is used for oracle shifts only (default
    /// [`CRITERIA_ORACLE_DEPTH`], capped by the shift's own bound).
    pub fn new(s: &'s Subshift, depth: Option<usize>) -> Analysis<'s> {
        let depth = s.depth_bound().map(|d| depth.unwrap_or(CRITERIA_ORACLE_DEPTH).min(d));
        Analysis::with_depth(s, depth)
    }

    fn with_depth(s: &'s Subshift, depth: Option<usize>) -> Analysis<'s> {
        let machine = s.machine_at(depth);
        let (probes, families, wide) = match depth {
            Some(d) => (
                points_in(s, &machine, 5),
                probe_families(s, d / 2),
                Some(Surrogate { machine: s.machine_at(Some(2 * d)).into_owned(), depth: 2 * d, families: probe_families(s, d) }),
            ),
            None => (Vec::new(), Vec::new(), None),
        };
        Analysis { s, machine, depth, probes, families, wide, memo: BTreeMap::new() }
    }

    pub fn confidence(&self) -> Confidence {
        self.s.confidence_at(self.depth)
    }

    pub fn machine(&self) -> &Machine {
        &self.machine
    }

    fn reps(&self, c: &Config) -> Vec<String> {
        c.states().iter().map(|&q| self.s.show_word(self.machine.rep(q))).collect()
    }

    /// On a surrogate, costs reaching the truncation depth are unresolved
    /// and count as infinite.
    fn cap(&self, c: Option<usize>) -> CostValue {
        cap_at(c, self.depth)
    }

    fn config_of(&self, b: &[Word]) -> Result<Config, ShiftError> {
        for w in b {
            if !self.s.in_language(w)? {
                return Err(ShiftError::Precondition(format!("{} is not in the language", self.s.show_word(w))));
            }
        }
        let f = self.s.follower_config_at(b, self.depth);
        f.config.ok_or_else(|| ShiftError::Precondition("some word is outside the truncated language".into()))
    }

    fn require_point(&self, x: &EvPeriodicWord) -> Result<(), ShiftError> {
        if !self.s.contains_point(x) {
            return Err(ShiftError::Precondition(format!("{} is not a point of X", self.s.show_point(x))));
        }
        Ok(())
    }

    pub fn cost(&self, b: &[Word], x: &EvPeriodicWord) -> Result<CostReport, ShiftError> {
        self.require_point(x)?;
        let c = self.config_of(b)?;
        let r = Reach::new(&self.machine, &c);
        let hit = r.cost_of(x);
        let mut report = self.report(b, self.s.show_point(x), self.cap(hit.map(|h| h.0)));
        if let (Some((_, a, i)), CostValue::Finite(_)) = (hit, report.cost) {
            let gamma = &r.words[i];
            report.alpha = Some(self.s.show_word(&x.prefix(a)));
            report.gamma = Some(self.s.show_word(gamma));
            let y = x.shift(a);
            for beta in b {
                let p = y.prepend(&beta.concat(gamma));
                report.replay.push(ReplayStep::new("contains_point", vec![self.s.show_point(&p)], "true"));
            }
        }
        Ok(report)
    }

    pub fn thomsen_cost(&self, b: &[Word], x: &EvPeriodicWord) -> Result<CostReport, ShiftError> {
        self.require_point(x)?;
        let c = self.config_of(b)?;
        let r = Reach::new(&self.machine, &c);
        let hit = r.thomsen_of(x);
        let mut report = self.report(b, self.s.show_point(x), self.cap(hit.map(|h| h.0)));
        if let (Some((_, i)), CostValue::Finite(_)) = (hit, report.cost) {
            report.alpha = Some(self.s.show_word(&Word::empty()));
            report.gamma = Some(self.s.show_word(&r.words[i]));
            for beta in b {
                let p = x.prepend(&beta.concat(&r.words[i]));
                report.replay.push(ReplayStep::new("contains_point", vec![self.s.show_point(&p)], "true"));
            }
        }
        Ok(report)
    }

    fn report(&self, b: &[Word], x: String, cost: CostValue) -> CostReport {
        CostReport {
            b: b.iter().map(|w| self.s.show_word(w)).collect(),
            x,
            cost,
            alpha: None,
            gamma: None,
            attained_at: None,
            attained_cost: None,
            records: Vec::new(),
            confidence: self.confidence(),
            replay: Vec::new(),
        }
    }

    fn cost_value(&self, r: &Reach, x: &EvPeriodicWord) -> CostValue {
        self.cap(r.cost_of(x).map(|h| h.0))
    }

    /// sup over x of cost(C, x), exactly for graph shifts.
    fn sup_exact(&self, c: &Config) -> Result<Sup, ShiftError> {
        let r = Reach::new(&self.machine, c);
        let m = &*self.machine;
        let enumerated = points_in(self.s, m, enum_bound(m.alphabet_size()));
        let costs: Vec<CostValue> = enumerated.iter().map(|x| self.cost_value(&r, x)).collect();
        let first_with = |want: CostValue| enumerated.iter().zip(&costs).find(|(_, &c)| c == want).map(|(x, _)| x.clone());
        let k_star = r.max_dist() + m.num_states() + 1;
        let unbounded = |at: EvPeriodicWord| Sup::Unbounded { at_cost: self.cost_value(&r, &at), at, depth: None };
        let sup = if r.configs.is_empty() {
            unbounded(lex_least_point(m, &Config::single(m.start())).unwrap())
        } else if let Some(x0) = r.exceeds(k_star)? {
            match first_with(CostValue::Infinite) {
                Some(x) => unbounded(x),
                None => unbounded(r.infinite_point()?.unwrap_or(x0)),
            }
        } else {
            let (mut lo, mut hi) = (0, k_star);
            while lo < hi {
                let mid = (lo + hi) / 2;
                if r.exceeds(mid)?.is_some() {
                    lo = mid + 1;
                } else {
                    hi = mid;
                }
            }
            let at = match first_with(CostValue::Finite(lo)) {
                Some(x) => x,
                None if lo == 0 => lex_least_point(m, &Config::single(m.start())).unwrap(),
                None => r.exceeds(lo - 1)?.expect("monotone"),
            };
            Sup::Finite { value: lo, at }
        };
        // cross-checks against the direct computation
        match &sup {
            Sup::Finite { value, at } => {
                if self.cost_value(&r, at) != CostValue::Finite(*value) {
                    return Err(ShiftError::Inconsistent(format!("sup witness {} does not attain {value}", self.s.show_point(at))));
                }
                if let Some((x, c)) = enumerated.iter().zip(&costs).find(|(_, &c)| c > CostValue::Finite(*value)) {
                    return Err(ShiftError::Inconsistent(format!("{} has cost {c} above the supremum {value}", self.s.show_point(x))));
                }
            }
            Sup::Unbounded { at, at_cost, .. } => {
                if at_cost.finite().is_some_and(|c| c <= k_star) {
                    return Err(ShiftError::Inconsistent(format!("unbounded witness {} has cost {at_cost}", self.s.show_point(at))));
                }
            }
        }
        Ok(sup)
    }

    /// Largest probe cost on one surrogate, with the points that set a
    /// new record.
    fn probe_max<'p>(
        &self,
        m: &Machine,
        depth: usize,
        c: &Config,
        points: impl Iterator<Item = &'p EvPeriodicWord>,
        thomsen: bool,
    ) -> (CostValue, Option<EvPeriodicWord>, Vec<ProbeRecord>) {
        let r = Reach::new(m, c);
        let mut best: (CostValue, Option<EvPeriodicWord>) = (CostValue::Finite(0), None);
        let mut records = Vec::new();
        for x in points {
            let raw = if thomsen { r.thomsen_of(x).map(|h| h.0) } else { r.cost_of(x).map(|h| h.0) };
            let cv = cap_at(raw, Some(depth));
            if best.1.is_none() || cv > best.0 {
                best = (cv, Some(x.clone()));
                records.push(ProbeRecord { x: self.s.show_point(x), cost: cv });
            }
        }
        (best.0, best.1, records)
    }

    /// Oracle suprema: the probe maximum on the surrogate, read as unbounded
    /// when it is infinite or grows on the surrogate of twice the depth.
    fn sup_probed(&self, c: &Config, thomsen: bool) -> (Sup, Vec<ProbeRecord>) {
        let d = self.depth.expect("oracle analysis");
        let fallback = || lex_least_point(&self.machine, c).unwrap_or_else(|| lex_least_point(&self.machine, &Config::single(self.machine.start())).unwrap());
        let points = self.families.iter().flatten().chain(&self.probes);
        let (base, at, records) = self.probe_max(&self.machine, d, c, points, thomsen);
        let at = at.unwrap_or_else(fallback);
        if base == CostValue::Infinite {
            return (Sup::Unbounded { at, at_cost: base, depth: Some(d) }, records);
        }
        let wide = self.wide.as_ref().expect("oracle analysis");
        let lifted: Option<Vec<StateId>> = c.states().iter().map(|&q| wide.machine.run(self.machine.rep(q).letters())).collect();
        if let Some(states) = lifted {
            let points = wide.families.iter().flatten().chain(&self.probes);
            let (w, wat, wrecords) = self.probe_max(&wide.machine, wide.depth, &Config::new(states), points, thomsen);
            if w > base {
                let sup = Sup::Unbounded { at: wat.unwrap_or(at), at_cost: w, depth: Some(wide.depth) };
                return (sup, wrecords);
            }
        }
        (Sup::Finite { value: base.finite().unwrap(), at }, records)
    }

    fn sup_of(&self, c: &Config) -> Result<(Sup, Vec<ProbeRecord>), ShiftError> {
        if self.depth.is_some() {
            Ok(self.sup_probed(c, false))
        } else {
            Ok((self.sup_exact(c)?, Vec::new()))
        }
    }

    fn sup_report(&self, b: &[Word], sup: Sup, records: Vec<ProbeRecord>, call: &str) -> CostReport {
        let (cost, at, attained, depth) = match sup {
            Sup::Finite { value, at } => (CostValue::Finite(value), at, CostValue::Finite(value), self.depth),
            Sup::Unbounded { at, at_cost, depth } => (CostValue::Infinite, at, at_cost, depth),
        };
        let mut report = self.report(b, "sup".into(), cost);
        report.attained_at = Some(self.s.show_point(&at));
        report.attained_cost = Some(attained);
        report.records = records;
        let args = cost_args(depth, &report.attained_at.clone().unwrap(), &report.b);
        report.replay.push(ReplayStep::new(call, args, attained.to_string()));
        report
    }

    pub fn sup_cost(&self, b: &[Word]) -> Result<CostReport, ShiftError> {
        let c = self.config_of(b)?;
        let (sup, records) = self.sup_of(&c)?;
        Ok(self.sup_report(b, sup, records, "cost"))
    }

    pub fn thomsen_sup(&self, b: &[Word]) -> Result<CostReport, ShiftError> {
        let c = self.config_of(b)?;
        if self.depth.is_some() {
            let (sup, records) = self.sup_probed(&c, true);
            return Ok(self.sup_report(b, sup, records, "thomsen_cost"));
        }
        let r = Reach::new(&self.machine, &c);
        let tv = |x: &EvPeriodicWord| self.cap(r.thomsen_of(x).map(|h| h.0));
        let start_point = || lex_least_point(&self.machine, &Config::single(self.machine.start())).unwrap();
        let sup = if r.configs.is_empty() {
            Sup::Unbounded { at: start_point(), at_cost: CostValue::Infinite, depth: None }
        } else if let Some(x) = r.exceeds_thomsen(r.max_dist())? {
            let at = self.shortest_with(&x, |x| tv(x) == CostValue::Infinite);
            Sup::Unbounded { at, at_cost: CostValue::Infinite, depth: None }
        } else {
            let mut k = 0;
            while r.exceeds_thomsen(k)?.is_some() {
                k += 1;
            }
            let at = match k {
                0 => start_point(),
                _ => r.exceeds_thomsen(k - 1)?.unwrap(),
            };
            Sup::Finite { value: k, at: self.shortest_with(&at, |x| tv(x) == CostValue::Finite(k)) }
        };
        let (want, at) = match &sup {
            Sup::Finite { value, at } => (CostValue::Finite(*value), at),
            Sup::Unbounded { at, at_cost, .. } => (*at_cost, at),
        };
        if tv(at) != want {
            return Err(ShiftError::Inconsistent(format!("Thomsen witness {} has cost {}", self.s.show_point(at), tv(at))));
        }
        Ok(self.sup_report(b, sup, Vec::new(), "thomsen_cost"))
    }

    /// Prefers a short enumerated point with the same property as `fallback`.
    fn shortest_with(&self, fallback: &EvPeriodicWord, ok: impl Fn(&EvPeriodicWord) -> bool) -> EvPeriodicWord {
        points_in(self.s, &self.machine, WITNESS_ENUM.min(fallback.description_len().saturating_sub(1)))
            .into_iter()
            .find(|x| ok(x))
            .unwrap_or_else(|| fallback.clone())
    }

    /// A point of infinite cost from C, preferring short descriptions.
    fn infinite_cost_point(&self, c: &Config) -> Result<Option<EvPeriodicWord>, ShiftError> {
        let r = Reach::new(&self.machine, c);
        if self.depth.is_some() {
            return Ok(self
                .probes
                .iter()
                .chain(self.families.iter().flatten())
                .find(|x| self.cost_value(&r, x) == CostValue::Infinite)
                .cloned());
        }
        let lasso = r.infinite_point()?;
        let short = points_in(self.s, &self.machine, WITNESS_ENUM)
            .into_iter()
            .find(|x| r.cost_of(x).is_none());
        match (&lasso, &short) {
            (None, Some(x)) => Err(ShiftError::Inconsistent(format!("{} has infinite cost but no lasso was found", self.s.show_point(x)))),
            (Some(x), _) if r.cost_of(x).is_some() => {
                Err(ShiftError::Inconsistent(format!("lasso {} has finite cost", self.s.show_point(x))))
            }
            _ => Ok(short.or(lasso)),
        }
    }

    fn is_unbounded(&self, c: &Config) -> Result<bool, ShiftError> {
        Ok(matches!(self.sup_of(c)?.0, Sup::Unbounded { .. }))
    }

    /// Configurations over which the cofinality family quantifies.
    fn singles(&self) -> Vec<Config> {
        self.machine.states().map(Config::single).collect()
    }

    fn maximal(&self) -> Result<Vec<Config>, ShiftError> {
        if self.depth.is_some() {
            let mut profs: Vec<Config> = Vec::new();
            for g in primitive_words(self.machine.alphabet_size(), PERIODIC_PROBE) {
                let x = EvPeriodicWord::periodic(g).unwrap();
                if !self.s.contains_point(&x) {
                    continue;
                }
                let p = &self.machine.profiles(&x)[0];
                profs.push(Config::new(self.machine.states().filter(|&q| p[q as usize]).collect()));
            }
            // every state lies in some candidate
            for q in self.machine.states() {
                let x = lex_least_point(&self.machine, &Config::single(q)).expect("live state");
                let p = &self.machine.profiles(&x)[0];
                profs.push(Config::new(self.machine.states().filter(|&q| p[q as usize]).collect()));
            }
            profs.sort();
            profs.dedup();
            let all = profs.clone();
            profs.retain(|c| !all.iter().any(|d| d != c && c.is_subset_of(d)));
            return Ok(profs);
        }
        maximal_alive_configs(&self.machine)
    }

    /// Drops states from C, in order, while `fails` keeps holding.
    fn minimize(&self, c: &Config, mut fails: impl FnMut(&Config) -> Result<bool, ShiftError>) -> Result<Config, ShiftError> {
        let mut cur = c.clone();
        for &q in c.states() {
            if cur.len() == 1 {
                break;
            }
            let smaller = Config::new(cur.states().iter().copied().filter(|&p| p != q).collect());
            if fails(&smaller)? {
                cur = smaller;
            }
        }
        Ok(cur)
    }

    fn reach_verdict(&mut self, property: &'static str, collective: bool) -> Result<Verdict, ShiftError> {
        if let Some(v) = self.memo.get(property) {
            return Ok(v.clone());
        }
        let candidates = if collective { self.maximal()? } else { self.singles() };
        let mut verdict = Verdict::holds(property, self.confidence());
        for c in &candidates {
            if let Some(x) = self.infinite_cost_point(c)? {
                let c = self.minimize(c, |d| Ok(self.cost_value(&Reach::new(&self.machine, d), &x) == CostValue::Infinite))?;
                let b = self.reps(&c);
                let xs = self.s.show_point(&x);
                let args = cost_args(None, &xs, &b);
                verdict = Verdict::fails(property, self.confidence(), Witness::InfiniteCost { b: b.clone(), x: xs })
                    .with_replay(vec![ReplayStep::new("follower_nonempty", b, "true"), ReplayStep::new("cost", args, "inf")]);
                break;
            }
        }
        self.memo.insert(property, verdict.clone());
        Ok(verdict)
    }

    fn bounded_verdict(&mut self, property: &'static str, collective: bool) -> Result<Verdict, ShiftError> {
        if let Some(v) = self.memo.get(property) {
            return Ok(v.clone());
        }
        let candidates = if collective { self.maximal()? } else { self.singles() };
        let mut verdict = Verdict::holds(property, self.confidence());
        for c in &candidates {
            if let Sup::Unbounded { .. } = self.sup_of(c)?.0 {
                let c = self.minimize(c, |d| self.is_unbounded(d))?;
                let Sup::Unbounded { at, at_cost, depth } = self.sup_of(&c)?.0 else { unreachable!() };
                let b = self.reps(&c);
                let xs = self.s.show_point(&at);
                let args = cost_args(depth, &xs, &b);
                let value = at_cost;
                let witness = match at_cost {
                    CostValue::Infinite => Witness::InfiniteCost { b: b.clone(), x: xs },
                    CostValue::Finite(n) => Witness::UnboundedCost { b: b.clone(), x: xs, at_least: n },
                };
                verdict = Verdict::fails(property, self.confidence(), witness)
                    .with_replay(vec![ReplayStep::new("follower_nonempty", b, "true"), ReplayStep::new("cost", args, value.to_string())]);
                break;
            }
        }
        self.memo.insert(property, verdict.clone());
        Ok(verdict)
    }

    /// Every x can be reached from every β ∈ L_X.
    pub fn cofinal(&mut self) -> Result<Verdict, ShiftError> {
        self.reach_verdict("cofinal", false)
    }

    /// Every x can be reached collectively from every B with F_B ≠ ∅.
    pub fn collectively_cofinal(&mut self) -> Result<Verdict, ShiftError> {
        self.reach_verdict("collectively-cofinal", true)
    }

    pub fn strongly_cofinal(&mut self) -> Result<Verdict, ShiftError> {
        self.bounded_verdict("strongly-cofinal", false)
    }

    /// A failure of strong cofinality is reported with its own (smaller)
    /// witness; for exact shifts the full search must agree.
    pub fn hyper_cofinal(&mut self) -> Result<Verdict, ShiftError> {
        let strong = self.strongly_cofinal()?;
        if strong.value {
            return self.bounded_verdict("hyper-cofinal", true);
        }
        if self.depth.is_none() && self.bounded_verdict("hyper-cofinal", true)?.value {
            return Err(ShiftError::Inconsistent("hyper cofinal but not strongly cofinal".into()));
        }
        Ok(forward("hyper-cofinal", self.confidence(), &[&strong]))
    }

    pub fn minimal(&mut self) -> Result<Verdict, ShiftError> {
        if let Some(v) = self.memo.get("minimal") {
            return Ok(v.clone());
        }
        let col = self.collectively_cofinal()?;
        let strong = self.strongly_cofinal()?;
        let hyper = self.hyper_cofinal()?;
        let value = col.value && strong.value;
        if value != hyper.value && self.depth.is_none() {
            return Err(ShiftError::Inconsistent(format!(
                "collectively cofinal = {}, strongly cofinal = {}, but hyper cofinal = {}",
                col.value, strong.value, hyper.value
            )));
        }
        let v = forward("minimal", self.confidence(), &[&col, &strong]);
        self.memo.insert("minimal", v.clone());
        Ok(v)
    }

    pub fn topologically_free(&mut self) -> Result<Verdict, ShiftError> {
        if let Some(v) = self.memo.get("topologically-free") {
            return Ok(v.clone());
        }
        let conf = self.confidence();
        let m = &*self.machine;
        let mut verdict = Verdict::holds("topologically-free", conf);
        for c in self.maximal()? {
            let g = ConfigGraph::explore(m, std::slice::from_ref(&c));
            let Some(x) = g.unique_point(0) else { continue };
            let c = c.run(m, x.preperiod().letters()).expect("the unique point runs");
            let unique = |d: &Config| Ok(ConfigGraph::explore(m, std::slice::from_ref(d)).unique_point(0).is_some());
            let c = self.minimize(&c, unique)?;
            let b = self.reps(&c);
            let gamma = x.period().clone();
            let periodic = EvPeriodicWord::periodic(gamma.clone()).unwrap();
            verdict = Verdict::fails(
                "topologically-free",
                conf,
                Witness::IsolatedPeriodic { b: b.clone(), gamma: self.s.show_word(&gamma) },
            )
            .with_replay(vec![ReplayStep::new("follower_unique_point", b, self.s.show_point(&periodic))]);
            break;
        }
        if let Some(fast) = self.markov_top_free() {
            if fast != verdict.value {
                return Err(ShiftError::Inconsistent(format!(
                    "circuit-exit test says {fast}, follower configurations say {}",
                    verdict.value
                )));
            }
        }
        self.memo.insert("topologically-free", verdict.clone());
        Ok(verdict)
    }

    /// For one-step shifts: every circuit has an exit iff no cycle of the
    /// trimmed letter graph runs through vertices of out-degree one only.
    fn markov_top_free(&self) -> Option<bool> {
        let k = self.s.alphabet().len();
        let forbidden: Vec<Word> = match self.s.kind() {
            ShiftKind::Full => Vec::new(),
            ShiftKind::Sft { forbidden } if forbidden.iter().all(|w| w.len() <= 2) => forbidden.clone(),
            _ => return None,
        };
        let allowed = |w: &[Letter]| !forbidden.iter().any(|f| w.windows(f.len()).any(|v| v == f.letters()));
        let edge = |a: usize, b: usize| allowed(&[Letter(a as u16), Letter(b as u16)]) && allowed(&[Letter(a as u16)]) && allowed(&[Letter(b as u16)]);
        let alive = greatest_alive(k, |a| (0..k).filter(|&b| edge(a, b)).collect());
        let out: Vec<Vec<usize>> = (0..k).map(|a| (0..k).filter(|&b| alive[a] && alive[b] && edge(a, b)).collect()).collect();
        let thin: Vec<bool> = (0..k).map(|a| alive[a] && out[a].len() == 1).collect();
        for a in (0..k).filter(|&a| thin[a]) {
            let mut cur = a;
            for _ in 0..k {
                cur = out[cur][0];
                if !thin[cur] {
                    break;
                }
                if cur == a {
                    return Some(false);
                }
            }
        }
        Some(true)
    }

    /// Some essential component of the machine carries two distinct cycles.
    pub fn non_ev_periodic(&mut self) -> Result<Verdict, ShiftError> {
        if let Some(v) = self.memo.get("non-eventually-periodic") {
            return Ok(v.clone());
        }
        let m = &*self.machine;
        let succ: Vec<Vec<usize>> = m.states().map(|q| m.successors(q).map(|(_, t)| t as usize).collect()).collect();
        let comp = sccs(&succ);
        let conf = self.confidence();
        let mut verdict = Verdict::fails("non-eventually-periodic", conf, Witness::Clause {
            clause: "every component is a single cycle".into(),
            detail: format!("{} states", m.num_states()),
        });
        // the shortest pair of cycles over all branching states
        let mut best: Option<(Word, Word, Word)> = None;
        for p in m.states() {
            let inner: Vec<(Letter, StateId)> = m.successors(p).filter(|(_, t)| comp[*t as usize] == comp[p as usize]).collect();
            if inner.len() < 2 {
                continue;
            }
            let back = |t: StateId| -> Vec<Letter> {
                // shortest path t → p inside the component
                let mut prev: HashMap<StateId, (StateId, Letter)> = HashMap::new();
                let mut queue = VecDeque::from([t]);
                let mut seen = std::collections::HashSet::from([t]);
                while let Some(u) = queue.pop_front() {
                    if u == p {
                        break;
                    }
                    for (a, v) in m.successors(u) {
                        if comp[v as usize] == comp[p as usize] && seen.insert(v) {
                            prev.insert(v, (u, a));
                            queue.push_back(v);
                        }
                    }
                }
                let mut out = Vec::new();
                let mut cur = p;
                while cur != t {
                    let (u, a) = prev[&cur];
                    out.push(a);
                    cur = u;
                }
                out.reverse();
                out
            };
            let cycle = |(a, t): (Letter, StateId)| Word(std::iter::once(a).chain(back(t)).collect());
            let mut cycles: Vec<Word> = inner.into_iter().map(cycle).collect();
            cycles.sort_by_key(|w| w.len());
            let size = |b: &(Word, Word, Word)| (b.1.len() + b.2.len(), b.0.len());
            let cand = (m.rep(p).clone(), cycles[0].clone(), cycles[1].clone());
            if best.as_ref().is_none_or(|b| size(&cand) < size(b)) {
                best = Some(cand);
            }
        }
        if let Some((prefix, first, second)) = best {
            let show = |w: &Word| self.s.show_word(w);
            let mut replay = Vec::new();
            for tail in [first.clone(), second.clone(), first.concat(&second), first.concat(&first).concat(&second)] {
                let x = EvPeriodicWord::new(prefix.clone(), tail).unwrap();
                replay.push(ReplayStep::new("contains_point", vec![self.s.show_point(&x)], "true"));
            }
            verdict = Verdict::holds("non-eventually-periodic", conf)
                .with_witness(Witness::TwoCycles { prefix: show(&prefix), first: show(&first), second: show(&second) })
                .with_replay(replay);
        }
        self.memo.insert("non-eventually-periodic", verdict.clone());
        Ok(verdict)
    }

    pub fn simple(&mut self) -> Result<Verdict, ShiftError> {
        if let Some(v) = self.memo.get("simple") {
            return Ok(v.clone());
        }
        let hyper = self.hyper_cofinal()?;
        let nep = self.non_ev_periodic()?;
        let col = self.collectively_cofinal()?;
        let strong = self.strongly_cofinal()?;
        let free = self.topologically_free()?;
        let other = col.value && strong.value && free.value;
        let value = hyper.value && nep.value;
        if value != other && self.depth.is_none() {
            return Err(ShiftError::Inconsistent(format!(
                "hyper cofinal ∧ non-eventually-periodic = {value}, but collectively ∧ strongly cofinal ∧ topologically free = {other}"
            )));
        }
        // without a non-eventually-periodic point the witness is the
        // isolated periodic point, which topological freeness reports
        let v = forward("simple", self.confidence(), &[&hyper, &nep, &free]);
        self.memo.insert("simple", v.clone());
        Ok(v)
    }

    /// (μ, ν) with F_μ ⊆ F_{Bν}, shortest total length first.
    pub fn find_crazy_inclusion(&self, b: &[Word], budget: usize) -> Result<Option<(Word, Word)>, ShiftError> {
        let c = self.config_of(b)?;
        let m = &*self.machine;
        let k = m.alphabet_size();
        for total in 0..=budget {
            for mu_len in 0..=total {
                for mu in words_of_length(k, mu_len) {
                    let Some(q) = m.run(mu.letters()) else { continue };
                    for nu in words_of_length(k, total - mu_len) {
                        let Some(d) = c.run(m, nu.letters()) else { continue };
                        if follower_included(m, &Config::single(q), &d) {
                            return Ok(Some((mu, nu)));
                        }
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Arguments of a cost replay; a surrogate depth other than the verdict's
/// is passed explicitly.
fn cost_args(depth: Option<usize>, x: &str, b: &[String]) -> Vec<String> {
    let mut args: Vec<String> = depth.map(|d| format!("depth={d}")).into_iter().collect();
    args.push(x.to_string());
    args.extend(b.iter().cloned());
    args
}

fn forward(property: &str, confidence: Confidence, parts: &[&Verdict]) -> Verdict {
    match parts.iter().find(|v| !v.value) {
        None => Verdict::holds(property, confidence),
        Some(v) => {
            let w = v.witness.clone().unwrap_or(Witness::Clause { clause: v.property.clone(), detail: "false".into() });
            let mut out = Verdict::fails(property, confidence, w).with_replay(v.replay.clone());
            if let Some(Witness::TwoCycles { .. }) = out.witness {
                out.witness = Some(Witness::Clause { clause: v.property.clone(), detail: "false".into() });
            }
            out
        }
    }
}

fn probe_families(s: &Subshift, n_max: usize) -> Vec<Vec<EvPeriodicWord>> {
    let k = s.alphabet().len();
    let mut out = Vec::new();
    for u in 0..k as u16 {
        for v in (0..k as u16).filter(|&v| v != u) {
            let fam: Vec<EvPeriodicWord> = (1..=n_max.max(2))
                .map(|n| EvPeriodicWord::constant(Letter(v)).prepend(&Word(vec![Letter(u); n])))
                .collect();
            if fam.iter().all(|x| s.contains_point(x)) {
                out.push(fam);
            }
        }
    }
    out
}

/// Words that are not proper powers, up to length n, in shortlex order.
pub fn primitive_words(k: usize, n: usize) -> Vec<Word> {
    (1..=n)
        .flat_map(|l| words_of_length(k, l))
        .filter(|w| EvPeriodicWord::periodic(w.clone()).is_some_and(|x| x.period() == w))
        .collect()
}

/// All maximal configurations with nonempty follower set. Aliveness is
/// closed under subsets, so a depth-first search over sets in increasing
/// state order with pruning finds them.
pub fn maximal_alive_configs(m: &Machine) -> Result<Vec<Config>, ShiftError> {
    let n = m.num_states() as StateId;
    let mut memo: HashMap<Config, bool> = HashMap::new();
    let mut alive = |c: &Config| -> bool {
        if let Some(&v) = memo.get(c) {
            return v;
        }
        let v = ConfigGraph::explore(m, std::slice::from_ref(c)).alive[0];
        memo.insert(c.clone(), v);
        v
    };
    let mut out = Vec::new();
    let mut stack: Vec<Vec<StateId>> = (0..n).map(|q| vec![q]).collect();
    stack.reverse();
    let mut visited = 0;
    while let Some(cur) = stack.pop() {
        visited += 1;
        if visited > CONFIG_BUDGET {
            return Err(ShiftError::Budget(format!("more than {CONFIG_BUDGET} live configurations")));
        }
        let c = Config::new(cur.clone());
        let mut maximal = true;
        for q in (0..n).filter(|q| !c.contains(*q)) {
            let bigger = Config::new([cur.as_slice(), &[q]].concat());
            if alive(&bigger) {
                maximal = false;
                if q > *cur.last().unwrap() {
                    stack.push(bigger.states().to_vec());
                }
            }
        }
        if maximal {
            out.push(c);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// All verdicts, or a group of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Only {
    TopFree,
    Minimal,
    Simple,
    Cofinality,
}

impl FromStr for Only {
    type Err = String;
    fn from_str(s: &str) -> Result<Only, String> {
        match s {
            "top-free" => Ok(Only::TopFree),
            "minimal" => Ok(Only::Minimal),
            "simple" => Ok(Only::Simple),
            "cofinality" => Ok(Only::Cofinality),
            _ => Err(format!("unknown group `{s}` (top-free, minimal, simple, cofinality)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriteriaReport {
    pub confidence: Confidence,
    pub verdicts: BTreeMap<String, Verdict>,
}

pub fn criteria_report(s: &Subshift, only: Option<Only>, depth: Option<usize>) -> Result<CriteriaReport, ShiftError> {
    let mut a = Analysis::new(s, depth);
    let mut vs: Vec<Verdict> = Vec::new();
    let all = only.is_none();
    if all {
        vs.push(match a.depth {
            None => s.is_surjective()?,
            Some(d) => s.is_surjective_bounded(Some(d)),
        });
    }
    if all || only == Some(Only::Cofinality) {
        vs.push(a.cofinal()?);
    }
    if all || matches!(only, Some(Only::Cofinality | Only::Minimal | Only::Simple)) {
        vs.push(a.collectively_cofinal()?);
        vs.push(a.strongly_cofinal()?);
        vs.push(a.hyper_cofinal()?);
    }
    if all || matches!(only, Some(Only::TopFree | Only::Simple)) {
        vs.push(a.topologically_free()?);
        vs.push(a.non_ev_periodic()?);
    }
    if all || matches!(only, Some(Only::Minimal | Only::Simple)) {
        vs.push(a.minimal()?);
    }
    if all || only == Some(Only::Simple) {
        vs.push(a.simple()?);
    }
    Ok(CriteriaReport {
        confidence: a.confidence(),
        verdicts: vs.into_iter().map(|v| (v.property.clone(), v)).collect(),
    })
}

pub fn is_cofinal(s: &Subshift) -> Result<Verdict, ShiftError> {
    Analysis::new(s, None).cofinal()
}

pub fn is_collectively_cofinal(s: &Subshift) -> Result<Verdict, ShiftError> {
    Analysis::new(s, None).collectively_cofinal()
}

pub fn is_strongly_cofinal(s: &Subshift) -> Result<Verdict, ShiftError> {
    Analysis::new(s, None).strongly_cofinal()
}

pub fn is_hyper_cofinal(s: &Subshift) -> Result<Verdict, ShiftError> {
    Analysis::new(s, None).hyper_cofinal()
}

pub fn is_topologically_free(s: &Subshift) -> Result<Verdict, ShiftError> {
    Analysis::new(s, None).topologically_free()
}

pub fn has_non_ev_periodic_point(s: &Subshift) -> Result<Verdict, ShiftError> {
    Analysis::new(s, None).non_ev_periodic()
}

pub fn is_minimal(s: &Subshift) -> Result<Verdict, ShiftError> {
    Analysis::new(s, None).minimal()
}

pub fn is_simple(s: &Subshift) -> Result<Verdict, ShiftError> {
    Analysis::new(s, None).simple()
}

pub fn cost(s: &Subshift, b: &[Word], x: &EvPeriodicWord) -> Result<CostReport, ShiftError> {
    Analysis::with_depth(s, s.depth_bound()).cost(b, x)
}

/// For oracles the probes run at half the depth bound and are compared
/// with the full bound.
pub fn sup_cost(s: &Subshift, b: &[Word]) -> Result<CostReport, ShiftError> {
    Analysis::with_depth(s, s.depth_bound().map(|d| d / 2)).sup_cost(b)
}

pub fn thomsen_cost(s: &Subshift, b: &[Word], x: &EvPeriodicWord) -> Result<CostReport, ShiftError> {
    Analysis::with_depth(s, s.depth_bound()).thomsen_cost(b, x)
}

pub fn thomsen_sup(s: &Subshift, b: &[Word]) -> Result<CostReport, ShiftError> {
    Analysis::with_depth(s, s.depth_bound().map(|d| d / 2)).thomsen_sup(b)
}

pub fn find_crazy_inclusion(s: &Subshift, b: &[Word], budget: usize) -> Result<Option<(Word, Word)>, ShiftError> {
    Analysis::new(s, None).find_crazy_inclusion(b, budget)
}

/// Re-executes a replay script against the shift; `depth` is the surrogate
/// depth the script was produced with (oracles only).
pub fn replay(s: &Subshift, steps: &[ReplayStep], depth: Option<usize>) -> Result<(), String> {
    let a = Analysis::with_depth(s, depth.or(s.depth_bound()).filter(|_| s.is_oracle()));
    let err = |e: ShiftError| e.to_string();
    for step in steps {
        let words = |args: &[String]| -> Result<Vec<Word>, String> { args.iter().map(|t| s.word(t).map_err(err)).collect() };
        let got = match step.call.as_str() {
            "in_language" => s.in_language(&s.word(&step.args[0]).map_err(err)?).map_err(err)?.to_string(),
            "left_extendable" => s.left_extendable(&s.word(&step.args[0]).map_err(err)?).map_err(err)?.to_string(),
            "contains_point" => s.contains_point(&s.point(&step.args[0]).map_err(err)?).to_string(),
            "follower_nonempty" => {
                let cfg = s.follower_config_at(&words(&step.args)?, a.depth);
                s.follower_nonempty(&cfg).to_string()
            }
            "follower_unique_point" => {
                let cfg = s.follower_config_at(&words(&step.args)?, a.depth);
                match s.follower_unique_point(&cfg).map_err(err)? {
                    Some(x) => s.show_point(&x),
                    None => "none".into(),
                }
            }
            "cost" | "thomsen_cost" => {
                let mut args = step.args.as_slice();
                let mut local = None;
                if let Some(d) = args.first().and_then(|t| t.strip_prefix("depth=")) {
                    let d = d.parse().map_err(|_| format!("bad depth `{d}`"))?;
                    local = Some(Analysis::with_depth(s, Some(d)));
                    args = &args[1..];
                }
                let a = local.as_ref().unwrap_or(&a);
                let x = s.point(&args[0]).map_err(err)?;
                let b = words(&args[1..])?;
                let r = if step.call == "cost" { a.cost(&b, &x) } else { a.thomsen_cost(&b, &x) };
                r.map_err(err)?.cost.to_string()
            }
            other => return Err(format!("unknown replay call `{other}`")),
        };
        if got != step.expect {
            return Err(format!("{}({}) = {got}, expected {}", step.call, step.args.join(", "), step.expect));
        }
    }
    Ok(())
}

/// Replays a verdict's script at the depth it was computed with.
pub fn replay_verdict(s: &Subshift, v: &Verdict) -> Result<(), String> {
    replay(s, &v.replay, crate::shifts::confidence_depth(v.confidence))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shift(name: &str) -> Subshift {
        Subshift::builtin(name).unwrap()
    }

    fn words(s: &Subshift, ws: &[&str]) -> Vec<Word> {
        ws.iter().map(|w| s.word(w).unwrap()).collect()
    }

    #[test]
    fn cost_value_text() {
        assert_eq!("inf".parse::<CostValue>().unwrap(), CostValue::Infinite);
        assert_eq!(CostValue::Finite(3).to_string(), "3");
        assert!(CostValue::Finite(100) < CostValue::Infinite);
    }

    #[test]
    fn even_costs() {
        let s = shift("even");
        let r = cost(&s, &words(&s, &["01", "011"]), &s.point("(0)").unwrap()).unwrap();
        assert_eq!(r.cost, CostValue::Infinite);
        let r = cost(&s, &words(&s, &["0"]), &s.point("1(0)").unwrap()).unwrap();
        assert_eq!(r.cost, CostValue::Finite(1));
        assert!(replay(&s, &r.replay, None).is_ok());
        assert_eq!(sup_cost(&s, &words(&s, &["0"])).unwrap().cost, CostValue::Finite(1));
        assert_eq!(thomsen_sup(&s, &words(&s, &["0"])).unwrap().cost, CostValue::Finite(1));
    }

    #[test]
    fn even_verdicts() {
        let s = shift("even");
        let mut a = Analysis::new(&s, None);
        assert!(a.cofinal().unwrap().value);
        assert!(a.strongly_cofinal().unwrap().value);
        let col = a.collectively_cofinal().unwrap();
        assert!(!col.value);
        replay_verdict(&s, &col).unwrap();
        let tf = a.topologically_free().unwrap();
        assert!(!tf.value);
        assert!(matches!(&tf.witness, Some(Witness::IsolatedPeriodic { gamma, .. }) if gamma == "1"));
        replay_verdict(&s, &tf).unwrap();
        assert!(!a.minimal().unwrap().value);
        assert!(!a.simple().unwrap().value);
    }

    #[test]
    fn markov3_thomsen() {
        let s = shift("markov3");
        let r = thomsen_sup(&s, &words(&s, &["2"])).unwrap();
        assert_eq!(r.cost, CostValue::Infinite);
        assert_eq!(r.attained_at.as_deref(), Some("1(2)"));
        assert_eq!(sup_cost(&s, &words(&s, &["2"])).unwrap().cost, CostValue::Finite(1));
        assert!(is_simple(&s).unwrap().value);
    }

    #[test]
    fn sft001_isolated() {
        let s = shift("sft001");
        let v = is_topologically_free(&s).unwrap();
        assert!(!v.value);
        replay_verdict(&s, &v).unwrap();
        assert!(matches!(&v.witness, Some(Witness::IsolatedPeriodic { gamma, .. }) if gamma == "0"));
    }

    #[test]
    fn crazy_inclusions() {
        let s = shift("full2");
        assert_eq!(find_crazy_inclusion(&s, &words(&s, &["0"]), 3).unwrap(), Some((Word::empty(), Word::empty())));
        let e = shift("even");
        assert_eq!(find_crazy_inclusion(&e, &words(&e, &["01", "011"]), CRAZY_BUDGET).unwrap(), None);
        let g = shift("golden");
        assert!(find_crazy_inclusion(&g, &words(&g, &["1"]), CRAZY_BUDGET).unwrap().is_some());
    }

    #[test]
    fn primitive() {
        let p = primitive_words(2, 4);
        assert_eq!(p.len(), 2 + 2 + 6 + 12);
    }
}
