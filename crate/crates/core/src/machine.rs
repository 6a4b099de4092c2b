//! Deterministic "follower machines": every subshift is compiled into a
//! finite partial DFA whose states all have an infinite future. A point
//! belongs to X iff it can be read forever from the start state, and a
//! finite word is in L_X iff its run from the start state is defined.
//!
//! Intersections of follower sets are tracked as [`Config`]s: one machine
//! state per constraint word.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use crate::words::{EvPeriodicWord, Letter, Word};

pub type StateId = u32;

#[derive(Clone, Debug)]
pub struct Machine {
    k: usize,
    start: StateId,
    delta: Vec<Option<StateId>>,
    names: Vec<String>,
    reps: Vec<Word>,
}

impl Machine {
    /// Builds a machine from a raw partial DFA: drops states without an
    /// infinite future, keeps what is reachable from `start`, and merges
    /// equivalent states. Returns `None` when the language is empty.
    pub fn build(
        k: usize,
        start: usize,
        delta: &[Vec<Option<usize>>],
        names: &[String],
    ) -> Option<Machine> {
        let n = delta.len();
        let alive = greatest_alive(n, |q| delta[q].iter().flatten().copied().collect());
        if !alive[start] {
            return None;
        }
        let step = |q: usize, a: usize| delta[q][a].filter(|&t| alive[t]);

        // shortlex BFS numbering from the start
        let mut order = vec![start];
        let mut seen = vec![usize::MAX; n];
        seen[start] = 0;
        let mut reps = vec![Word::empty()];
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for a in 0..k {
                if let Some(t) = step(q, a) {
                    if seen[t] == usize::MAX {
                        seen[t] = order.len();
                        order.push(t);
                        reps.push(reps[i].pushed(Letter(a as u16)));
                    }
                }
            }
            i += 1;
        }

        // Moore refinement; all states start in one block
        let m = order.len();
        let mut class = vec![0usize; m];
        loop {
            let mut sigs: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next = vec![0usize; m];
            for (j, &q) in order.iter().enumerate() {
                let mut sig = vec![class[j]];
                for a in 0..k {
                    sig.push(step(q, a).map_or(usize::MAX, |t| class[seen[t]]));
                }
                let len = sigs.len();
                next[j] = *sigs.entry(sig).or_insert(len);
            }
            let stable = sigs.len() == class.iter().max().map_or(0, |c| c + 1);
            class = next;
            if stable {
                break;
            }
        }
        // renumber classes by first member in BFS order
        let mut renum = vec![usize::MAX; m];
        let mut count = 0;
        for j in 0..m {
            if renum[class[j]] == usize::MAX {
                renum[class[j]] = count;
                count += 1;
            }
        }
        let mut out_delta = vec![None; count * k];
        let mut out_names = vec![String::new(); count];
        let mut out_reps = vec![Word::empty(); count];
        let mut filled = vec![false; count];
        for (j, &q) in order.iter().enumerate() {
            let c = renum[class[j]];
            if filled[c] {
                continue;
            }
            filled[c] = true;
            out_names[c] = names[q].clone();
            out_reps[c] = reps[j].clone();
            for a in 0..k {
                out_delta[c * k + a] = step(q, a).map(|t| renum[class[seen[t]]] as StateId);
            }
        }
        Some(Machine { k, start: 0, delta: out_delta, names: out_names, reps: out_reps })
    }

    pub fn alphabet_size(&self) -> usize {
        self.k
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        0..self.names.len() as StateId
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.names[q as usize]
    }

    /// Shortlex-least word leading from the start state to `q`.
    pub fn rep(&self, q: StateId) -> &Word {
        &self.reps[q as usize]
    }

    pub fn step(&self, q: StateId, a: Letter) -> Option<StateId> {
        self.delta[q as usize * self.k + a.index()]
    }

    pub fn successors(&self, q: StateId) -> impl Iterator<Item = (Letter, StateId)> + '_ {
        (0..self.k).filter_map(move |a| {
            let a = Letter(a as u16);
            self.step(q, a).map(|t| (a, t))
        })
    }

    pub fn run_from(&self, q: StateId, w: &[Letter]) -> Option<StateId> {
        w.iter().try_fold(q, |q, &a| self.step(q, a))
    }

    pub fn run(&self, w: &[Letter]) -> Option<StateId> {
        self.run_from(self.start, w)
    }

    /// Whether the eventually periodic word can be read forever from `q`.
    pub fn runs_forever(&self, q: StateId, x: &EvPeriodicWord) -> bool {
        Config::single(q).runs_forever(self, x)
    }

    /// Prof(σ^a x) = {q : σ^a x runs forever from q} for a = 0..|pre|+|per|.
    pub fn profiles(&self, x: &EvPeriodicWord) -> Vec<Vec<bool>> {
        let pre = x.preperiod().letters();
        let per = x.period().letters();
        let n = self.num_states();
        let tail: Vec<bool> = (0..n)
            .map(|q| {
                let tail = EvPeriodicWord::periodic(x.period().clone()).unwrap();
                self.runs_forever(q as StateId, &tail)
            })
            .collect();
        // profiles of rotations of the period, computed backwards
        let mut rot = vec![Vec::new(); per.len()];
        rot[0] = tail.clone();
        let mut cur = tail;
        for i in (1..per.len()).rev() {
            cur = self.pre_image(&cur, per[i]);
            rot[i] = cur.clone();
        }
        let mut out = vec![Vec::new(); pre.len() + per.len()];
        for i in 0..per.len() {
            out[pre.len() + i] = rot[i].clone();
        }
        let mut cur = rot[0].clone();
        for i in (0..pre.len()).rev() {
            cur = self.pre_image(&cur, pre[i]);
            out[i] = cur.clone();
        }
        out
    }

    pub fn pre_image(&self, set: &[bool], a: Letter) -> Vec<bool> {
        (0..self.num_states())
            .map(|q| self.step(q as StateId, a).is_some_and(|t| set[t as usize]))
            .collect()
    }
}

/// Greatest set of nodes each having at least one successor inside the set.
pub fn greatest_alive<F>(n: usize, succ: F) -> Vec<bool>
where
    F: Fn(usize) -> Vec<usize>,
{
    let succs: Vec<Vec<usize>> = (0..n).map(&succ).collect();
    let mut preds = vec![Vec::new(); n];
    let mut live_out = vec![0usize; n];
    for (q, s) in succs.iter().enumerate() {
        live_out[q] = s.len();
        for &t in s {
            preds[t].push(q);
        }
    }
    let mut alive = vec![true; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&q| live_out[q] == 0).collect();
    for &q in &queue {
        alive[q] = false;
    }
    while let Some(t) = queue.pop_front() {
        for &p in &preds[t] {
            if alive[p] {
                live_out[p] -= 1;
                if live_out[p] == 0 {
                    alive[p] = false;
                    queue.push_back(p);
                }
            }
        }
    }
    alive
}

/// Strongly connected components (iterative Tarjan). Returns the component
/// index of every node.
pub fn sccs(succ: &[Vec<usize>]) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let n = succ.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![UNSEEN; n];
    let (mut next, mut ncomp) = (0, 0);
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        let mut calls = vec![(root, 0usize)];
        while let Some(&(v, i)) = calls.last() {
            if i < succ[v].len() {
                calls.last_mut().unwrap().1 += 1;
                let w = succ[v][i];
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(p, _)) = calls.last() {
                low[p] = low[p].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp[w] = ncomp;
                    if w == v {
                        break;
                    }
                }
                ncomp += 1;
            }
        }
    }
    comp
}

/// A finite set of machine states, sorted. Encodes F_B as the intersection
/// of the follower sets of its members.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Config(Vec<StateId>);

impl Config {
    pub fn new(mut states: Vec<StateId>) -> Config {
        states.sort_unstable();
        states.dedup();
        Config(states)
    }

    pub fn single(q: StateId) -> Config {
        Config(vec![q])
    }

    pub fn states(&self) -> &[StateId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, q: StateId) -> bool {
        self.0.binary_search(&q).is_ok()
    }

    pub fn is_subset_of(&self, other: &Config) -> bool {
        self.0.iter().all(|&q| other.contains(q))
    }

    pub fn step(&self, m: &Machine, a: Letter) -> Option<Config> {
        let mut v = Vec::with_capacity(self.0.len());
        for &q in &self.0 {
            v.push(m.step(q, a)?);
        }
        Some(Config::new(v))
    }

    pub fn run(&self, m: &Machine, w: &[Letter]) -> Option<Config> {
        let mut c = self.clone();
        for &a in w {
            c = c.step(m, a)?;
        }
        Some(c)
    }

    pub fn runs_forever(&self, m: &Machine, x: &EvPeriodicWord) -> bool {
        let Some(mut c) = self.run(m, x.preperiod().letters()) else {
            return false;
        };
        let mut seen = std::collections::HashSet::new();
        while seen.insert(c.clone()) {
            match c.run(m, x.period().letters()) {
                Some(n) => c = n,
                None => return false,
            }
        }
        true
    }

    pub fn union(&self, other: &Config) -> Config {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Config::new(v)
    }
}

/// The graph of configurations reachable from a set of roots, with the
/// greatest-fixpoint set of live configurations.
#[derive(Debug, Clone)]
pub struct ConfigGraph {
    pub nodes: Vec<Config>,
    pub index: HashMap<Config, usize>,
    pub succ: Vec<Vec<Option<usize>>>,
    pub alive: Vec<bool>,
}

impl ConfigGraph {
    pub fn explore(m: &Machine, roots: &[Config]) -> ConfigGraph {
        let k = m.alphabet_size();
        let mut g = ConfigGraph {
            nodes: Vec::new(),
            index: HashMap::new(),
            succ: Vec::new(),
            alive: Vec::new(),
        };
        for r in roots {
            g.intern(r.clone());
        }
        let mut i = 0;
        while i < g.nodes.len() {
            let c = g.nodes[i].clone();
            let row: Vec<Option<usize>> = (0..k)
                .map(|a| c.step(m, Letter(a as u16)).map(|n| g.intern(n)))
                .collect();
            g.succ.push(row);
            i += 1;
        }
        let succ = &g.succ;
        g.alive = greatest_alive(g.nodes.len(), |v| succ[v].iter().flatten().copied().collect());
        g
    }

    fn intern(&mut self, c: Config) -> usize {
        if let Some(&i) = self.index.get(&c) {
            return i;
        }
        let i = self.nodes.len();
        self.index.insert(c.clone(), i);
        self.nodes.push(c);
        i
    }

    pub fn id(&self, c: &Config) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn live_succ(&self, v: usize) -> impl Iterator<Item = (Letter, usize)> + '_ {
        self.succ[v]
            .iter()
            .enumerate()
            .filter_map(move |(a, t)| t.filter(|&t| self.alive[t]).map(|t| (Letter(a as u16), t)))
    }

    /// The unique point of F_C when every live configuration reachable from
    /// `v` has exactly one live successor.
    pub fn unique_point(&self, v: usize) -> Option<EvPeriodicWord> {
        if !self.alive[v] {
            return None;
        }
        let mut stack = vec![v];
        let mut seen = vec![false; self.nodes.len()];
        seen[v] = true;
        while let Some(u) = stack.pop() {
            let mut it = self.live_succ(u);
            let (_, t) = it.next()?;
            if it.next().is_some() {
                return None;
            }
            if !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
        Some(self.greedy_point(v, &Word::empty()))
    }

    /// Follows the smallest live letter from `v` until a configuration
    /// repeats; `prefix` is prepended to the result.
    pub fn greedy_point(&self, v: usize, prefix: &Word) -> EvPeriodicWord {
        let mut pos: HashMap<usize, usize> = HashMap::new();
        let mut letters = Vec::new();
        let mut u = v;
        while !pos.contains_key(&u) {
            pos.insert(u, letters.len());
            let (a, t) = self.live_succ(u).next().expect("live configuration");
            letters.push(a);
            u = t;
        }
        let cut = pos[&u];
        let pre = prefix.concat(&Word(letters[..cut].to_vec()));
        EvPeriodicWord::new(pre, Word(letters[cut..].to_vec())).unwrap()
    }

    /// Shortest (then lexicographically least) words from `v` to every
    /// configuration, along any edges (live or not).
    pub fn bfs_words(&self, v: usize) -> BTreeMap<usize, Word> {
        let mut out = BTreeMap::new();
        out.insert(v, Word::empty());
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            let w = out[&u].clone();
            for (a, t) in self.succ[u].iter().enumerate() {
                if let Some(t) = *t {
                    if let std::collections::btree_map::Entry::Vacant(e) = out.entry(t) {
                        e.insert(w.pushed(Letter(a as u16)));
                        queue.push_back(t);
                    }
                }
            }
        }
        out
    }
}

/// A deterministic side condition on points, checked letter by letter.
/// Once an accepting state is reached the condition holds for every
/// continuation.
pub trait PointFilter {
    fn start(&self) -> usize;
    fn step(&self, s: usize, a: Letter) -> Option<usize>;
    fn accepting(&self, s: usize) -> bool;
}

pub struct AnyPoint;

impl PointFilter for AnyPoint {
    fn start(&self) -> usize {
        0
    }
    fn step(&self, _: usize, _: Letter) -> Option<usize> {
        Some(0)
    }
    fn accepting(&self, _: usize) -> bool {
        true
    }
}

/// Points not in the cylinder of the given (nonempty) word.
pub struct AvoidPrefix<'a>(pub &'a Word);

impl PointFilter for AvoidPrefix<'_> {
    fn start(&self) -> usize {
        0
    }
    fn step(&self, s: usize, a: Letter) -> Option<usize> {
        let n = self.0.len();
        if s == n {
            return Some(n);
        }
        if self.0.letters()[s] != a {
            Some(n)
        } else if s + 1 == n {
            None
        } else {
            Some(s + 1)
        }
    }
    fn accepting(&self, s: usize) -> bool {
        s == self.0.len()
    }
}

/// Points different from the given one.
pub struct DifferFrom<'a>(pub &'a EvPeriodicWord);

impl PointFilter for DifferFrom<'_> {
    fn start(&self) -> usize {
        0
    }
    fn step(&self, s: usize, a: Letter) -> Option<usize> {
        let n = self.0.description_len();
        if s == n {
            return Some(n);
        }
        if self.0.letter(s) != a {
            return Some(n);
        }
        let next = s + 1;
        Some(if next == n { self.0.preperiod().len() } else { next })
    }
    fn accepting(&self, s: usize) -> bool {
        s == self.0.description_len()
    }
}

impl PointFilter for &dyn PointFilter {
    fn start(&self) -> usize {
        (**self).start()
    }
    fn step(&self, s: usize, a: Letter) -> Option<usize> {
        (**self).step(s, a)
    }
    fn accepting(&self, s: usize) -> bool {
        (**self).accepting(s)
    }
}

fn filter_accepts(f: &dyn PointFilter, x: &EvPeriodicWord) -> bool {
    let mut s = f.start();
    // the filter has at most description_len + 1 relevant states for our
    // filters; reading 2·(|x| + |filter word|) letters settles it
    let bound = 2 * x.description_len() + 64;
    for i in 0..bound {
        if f.accepting(s) {
            return true;
        }
        match f.step(s, x.letter(i)) {
            Some(t) => s = t,
            None => return false,
        }
    }
    f.accepting(s)
}

/// A point of F_C satisfying the filter, or `None` when there is none.
///
/// Existence is decided exactly on the product of the configuration graph
/// with the filter. The returned witness is the first point in witness order
/// (shorter description, then lexicographic) among descriptions up to
/// `enum_cap`, falling back to the graph witness.
pub fn find_point(
    m: &Machine,
    root: &Config,
    filter: &dyn PointFilter,
    enum_cap: usize,
) -> Option<EvPeriodicWord> {
    let g = ConfigGraph::explore(m, std::slice::from_ref(root));
    let v0 = 0;
    if !g.alive[v0] {
        return None;
    }
    // BFS over (config, filter state)
    let start = (v0, filter.start());
    let mut prev: HashMap<(usize, usize), Option<((usize, usize), Letter)>> = HashMap::new();
    prev.insert(start, None);
    let mut queue = VecDeque::from([start]);
    let mut hit = None;
    while let Some((v, s)) = queue.pop_front() {
        if filter.accepting(s) {
            hit = Some((v, s));
            break;
        }
        for (a, t) in g.live_succ(v) {
            if let Some(s2) = filter.step(s, a) {
                let key = (t, s2);
                if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(key) {
                    e.insert(Some(((v, s), a)));
                    queue.push_back(key);
                }
            }
        }
    }
    let hit = hit?;
    let mut path = Vec::new();
    let mut cur = hit;
    while let Some(Some((p, a))) = prev.get(&cur) {
        path.push(*a);
        cur = *p;
    }
    path.reverse();
    let graph_witness = g.greedy_point(hit.0, &Word(path));
    let cap = enum_cap.min(graph_witness.description_len().saturating_sub(1));
    for d in 1..=cap {
        for x in crate::words::ev_periodic_of_description(m.alphabet_size(), d) {
            if filter_accepts(filter, &x) && root.runs_forever(m, &x) {
                return Some(x);
            }
        }
    }
    Some(graph_witness)
}

/// Lexicographically least point of F_C (greedy), if any.
pub fn lex_least_point(m: &Machine, root: &Config) -> Option<EvPeriodicWord> {
    let g = ConfigGraph::explore(m, std::slice::from_ref(root));
    g.alive[0].then(|| g.greedy_point(0, &Word::empty()))
}

/// Whether F_C ⊆ F_D, decided on the product of the two configuration
/// graphs: fails iff some path keeps C alive forever while D dies.
pub fn follower_included(m: &Machine, c: &Config, d: &Config) -> bool {
    let gc = ConfigGraph::explore(m, std::slice::from_ref(c));
    if !gc.alive[0] {
        return true;
    }
    let mut seen: HashSet<(usize, Config)> = HashSet::new();
    let mut stack = vec![(0usize, d.clone())];
    seen.insert((0, d.clone()));
    while let Some((v, dc)) = stack.pop() {
        for (a, t) in gc.live_succ(v) {
            match dc.step(m, a) {
                None => return false,
                Some(n) => {
                    if seen.insert((t, n.clone())) {
                        stack.push((t, n));
                    }
                }
            }
        }
    }
    // every state has an infinite future, so D never dying is enough
    true
}
