//! Brute-force oracles. Everything here works from the raw spec (forbidden
//! words, presentation edges, or the power-of-two rule) and never touches
//! the library's automata, so agreement with the library is evidence.

#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use subshift::shifts::SpecKind;
use subshift::{EvPeriodicWord, FreeGroupElement, Letter, ShiftSpec, Subshift, Word};

/// A nondeterministic graph read from the start set: x ∈ X iff every
/// prefix of x labels a path.
pub struct Nfa {
    k: usize,
    start: Vec<usize>,
    out: Vec<Vec<(u16, usize)>>,
}

pub enum Brute {
    Graph(Nfa),
    /// Forbidden 0 1^n 0 for n ≥ 1 not a power of two.
    Pow2,
}

fn letter_index(spec: &ShiftSpec, sym: &str) -> u16 {
    spec.alphabet.iter().position(|a| a == sym).expect("known symbol") as u16
}

/// Parses a forbidden word, one symbol per character (all test alphabets
/// are single characters).
fn parse(spec: &ShiftSpec, text: &str) -> Vec<u16> {
    text.chars().map(|c| letter_index(spec, &c.to_string())).collect()
}

impl Brute {
    pub fn new(spec: &ShiftSpec) -> Brute {
        let k = spec.alphabet.len();
        match spec.kind {
            SpecKind::Full => Brute::Graph(Nfa { k, start: vec![0], out: vec![(0..k as u16).map(|a| (a, 0)).collect()] }),
            SpecKind::Sofic => {
                let id = |s: &str| spec.states.iter().position(|t| t == s).unwrap();
                let mut out = vec![Vec::new(); spec.states.len()];
                for (s, l, t) in &spec.edges {
                    out[id(s)].push((letter_index(spec, l), id(t)));
                }
                Brute::Graph(Nfa { k, start: (0..spec.states.len()).collect(), out })
            }
            SpecKind::Sft => {
                // states: the last ≤ M−1 letters read, starting from ε
                let forbidden: Vec<Vec<u16>> = spec.forbidden.iter().map(|f| parse(spec, f)).collect();
                let m = forbidden.iter().map(Vec::len).max().unwrap_or(1);
                let mut hist: Vec<Vec<u16>> = vec![Vec::new()];
                let mut out: Vec<Vec<(u16, usize)>> = Vec::new();
                let mut i = 0;
                while i < hist.len() {
                    let mut edges = Vec::new();
                    for a in 0..k as u16 {
                        let mut w = hist[i].clone();
                        w.push(a);
                        if forbidden.iter().any(|f| w.ends_with(f)) {
                            continue;
                        }
                        let keep = w.len().min(m.saturating_sub(1));
                        let t = w[w.len() - keep..].to_vec();
                        let j = match hist.iter().position(|h| *h == t) {
                            Some(j) => j,
                            None => {
                                hist.push(t);
                                hist.len() - 1
                            }
                        };
                        edges.push((a, j));
                    }
                    out.push(edges);
                    i += 1;
                }
                Brute::Graph(Nfa { k, start: vec![0], out })
            }
            SpecKind::Oracle if spec.rule.as_deref() == Some("pow2") => Brute::Pow2,
            SpecKind::Oracle => panic!("no brute-force oracle for {:?}", spec.rule),
        }
    }

    pub fn of(s: &Subshift) -> Brute {
        Brute::new(s.spec())
    }

    pub fn alphabet_size(&self) -> usize {
        match self {
            Brute::Graph(n) => n.k,
            Brute::Pow2 => 2,
        }
    }

    pub fn contains(&self, x: &EvPeriodicWord) -> bool {
        let (u, v) = (x.preperiod().letters(), x.period().letters());
        match self {
            Brute::Graph(n) => {
                let mut cur: BTreeSet<usize> = n.start.iter().copied().collect();
                let step = |cur: &BTreeSet<usize>, w: &[Letter]| {
                    let mut c = cur.clone();
                    for a in w {
                        c = c.iter().flat_map(|&q| n.out[q].iter().filter(|e| e.0 == a.0).map(|e| e.1)).collect();
                    }
                    c
                };
                cur = step(&cur, u);
                // the sets after u v^i repeat within 2^n rounds
                let rounds = 1usize << n.out.len().min(16);
                let mut seen = BTreeSet::new();
                for _ in 0..=rounds {
                    if cur.is_empty() {
                        return false;
                    }
                    if !seen.insert(cur.clone()) {
                        return true;
                    }
                    cur = step(&cur, v);
                }
                !cur.is_empty()
            }
            Brute::Pow2 => {
                let mut w: Vec<u16> = u.iter().map(|a| a.0).collect();
                for _ in 0..3 {
                    w.extend(v.iter().map(|a| a.0));
                }
                pow2_ok(&w)
            }
        }
    }

    /// w is a prefix of some point.
    pub fn word_in(&self, w: &Word) -> bool {
        match self {
            Brute::Graph(n) => {
                let alive = n.alive();
                let mut cur: BTreeSet<usize> = n.start.iter().copied().filter(|&q| alive[q]).collect();
                for a in w.letters() {
                    cur = cur
                        .iter()
                        .flat_map(|&q| n.out[q].iter().filter(|e| e.0 == a.0 && alive[e.1]).map(|e| e.1))
                        .collect();
                }
                !cur.is_empty()
            }
            Brute::Pow2 => pow2_ok(&w.letters().iter().map(|a| a.0).collect::<Vec<_>>()),
        }
    }

    /// cost(B, x) by trying every (α, γ) in order of |α|+|γ|; `None` when
    /// nothing up to `max_total` works.
    pub fn cost(&self, b: &[Word], x: &EvPeriodicWord, max_total: usize) -> Option<usize> {
        for t in 0..=max_total {
            for a in 0..=t {
                let y = x.shift(a);
                for gamma in all_words(self.alphabet_size(), t - a) {
                    if b.iter().all(|beta| self.contains(&y.prepend(&beta.concat(&gamma)))) {
                        return Some(t);
                    }
                }
            }
        }
        None
    }

    /// The Thomsen variant: α = ∅.
    pub fn thomsen_cost(&self, b: &[Word], x: &EvPeriodicWord, max_total: usize) -> Option<usize> {
        (0..=max_total).find(|&t| {
            all_words(self.alphabet_size(), t)
                .iter()
                .any(|gamma| b.iter().all(|beta| self.contains(&x.prepend(&beta.concat(gamma)))))
        })
    }

    /// F_B restricted to points of description ≤ d.
    pub fn follower(&self, b: &[Word], d: usize) -> Vec<EvPeriodicWord> {
        points(self.alphabet_size(), d)
            .into_iter()
            .filter(|y| self.contains(y) && b.iter().all(|beta| self.contains(&y.prepend(beta))))
            .collect()
    }

    /// ξ_x ∩ ball(R) straight from the definition: αβ⁻¹ with x = αy and
    /// βy ∈ X.
    pub fn xi_ball(&self, x: &EvPeriodicWord, r: usize) -> BTreeSet<FreeGroupElement> {
        let mut out = BTreeSet::new();
        for a in 0..=r {
            let alpha = x.prefix(a);
            let y = x.shift(a);
            for bl in 0..=r {
                for beta in all_words(self.alphabet_size(), bl) {
                    let g = FreeGroupElement::from_pair(&alpha, &beta);
                    if g.len() <= r && self.contains(&y.prepend(&beta)) {
                        out.insert(g);
                    }
                }
            }
        }
        out
    }
}

impl Nfa {
    /// States with an infinite future.
    fn alive(&self) -> Vec<bool> {
        let mut alive = vec![true; self.out.len()];
        loop {
            let mut changed = false;
            for q in 0..self.out.len() {
                if alive[q] && !self.out[q].iter().any(|e| alive[e.1]) {
                    alive[q] = false;
                    changed = true;
                }
            }
            if !changed {
                return alive;
            }
        }
    }
}

fn pow2_ok(w: &[u16]) -> bool {
    let zeros: Vec<usize> = (0..w.len()).filter(|&i| w[i] == 0).collect();
    zeros.windows(2).all(|p| {
        let n = p[1] - p[0] - 1;
        n == 0 || n.is_power_of_two()
    })
}

pub fn all_words(k: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|w: Vec<u16>| (0..k as u16).map(move |a| [w.clone(), vec![a]].concat())).collect();
    }
    out.into_iter().map(|w| Word::from_indices(&w)).collect()
}

/// All eventually periodic points with |u| + |v| ≤ d, deduplicated.
pub fn points(k: usize, d: usize) -> Vec<EvPeriodicWord> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for total in 1..=d {
        for p in 1..=total {
            for u in all_words(k, total - p) {
                for v in all_words(k, p) {
                    let x = EvPeriodicWord::new(u.clone(), v).unwrap();
                    if seen.insert(x.clone()) {
                        out.push(x);
                    }
                }
            }
        }
    }
    out
}

pub fn points_in(brute: &Brute, d: usize) -> Vec<EvPeriodicWord> {
    points(brute.alphabet_size(), d).into_iter().filter(|x| brute.contains(x)).collect()
}

pub fn words_in(brute: &Brute, n: usize) -> Vec<Word> {
    (0..=n).flat_map(|l| all_words(brute.alphabet_size(), l)).filter(|w| brute.word_in(w)).collect()
}

pub fn builtin(name: &str) -> Subshift {
    Subshift::builtin(name).unwrap()
}

/// Random small shifts: SFTs with short forbidden words, and sofic shifts
/// given by random labeled graphs on two or three states.
pub fn arb_shift() -> impl Strategy<Value = Subshift> {
    let sft = (2usize..=3, prop::collection::vec(prop::collection::vec(0u8..3, 1..=3), 0..=4)).prop_map(|(k, fs)| {
        ShiftSpec {
            alphabet: (0..k).map(|a| a.to_string()).collect(),
            kind: SpecKind::Sft,
            forbidden: fs
                .into_iter()
                .map(|f| f.into_iter().map(|a| (a as usize % k).to_string()).collect())
                .collect(),
            states: Vec::new(),
            edges: Vec::new(),
            rule: None,
            depth_bound: None,
        }
    });
    let sofic = (2usize..=3, prop::collection::vec((0usize..3, 0u8..2, 0usize..3), 2..=7)).prop_map(|(n, es)| ShiftSpec {
        alphabet: vec!["0".into(), "1".into()],
        kind: SpecKind::Sofic,
        forbidden: Vec::new(),
        states: (0..n).map(|q| format!("q{q}")).collect(),
        edges: es.into_iter().map(|(s, a, t)| (format!("q{}", s % n), a.to_string(), format!("q{}", t % n))).collect(),
        rule: None,
        depth_bound: None,
    });
    prop_oneof![sft, sofic].prop_filter_map("empty shift", |spec| Subshift::from_spec(spec).ok())
}
