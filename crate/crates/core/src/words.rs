//! Finite words, eventually periodic infinite words and reduced words in
//! the free group on the alphabet.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("duplicate symbol `{0}` in alphabet")]
    DuplicateSymbol(String),
    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("letter index {0} is outside the alphabet")]
    ForeignLetter(u16),
}

/// Index of a symbol in its alphabet. Letter order is declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter(pub u16);

impl Letter {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Alphabet {
    symbols: Vec<String>,
    lookup: HashMap<String, Letter>,
}

impl TryFrom<Vec<String>> for Alphabet {
    type Error = WordError;
    fn try_from(v: Vec<String>) -> Result<Self, WordError> {
        Alphabet::new(&v)
    }
}

impl From<Alphabet> for Vec<String> {
    fn from(a: Alphabet) -> Self {
        a.symbols
    }
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(symbols: &[S]) -> Result<Self, WordError> {
        if symbols.is_empty() {
            return Err(WordError::EmptyAlphabet);
        }
        let mut lookup = HashMap::new();
        let mut out = Vec::with_capacity(symbols.len());
        for (i, s) in symbols.iter().enumerate() {
            let s = s.as_ref().to_string();
            if s.is_empty() {
                return Err(WordError::Parse {
                    input: s,
                    reason: "empty symbol".into(),
                });
            }
            if lookup.insert(s.clone(), Letter(i as u16)).is_some() {
                return Err(WordError::DuplicateSymbol(s));
            }
            out.push(s);
        }
        Ok(Alphabet { symbols: out, lookup })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.symbols.len() as u16).map(Letter)
    }

    pub fn symbol(&self, a: Letter) -> &str {
        &self.symbols[a.index()]
    }

    pub fn letter(&self, symbol: &str) -> Option<Letter> {
        self.lookup.get(symbol).copied()
    }

    /// True when every symbol is a single character, so words print without
    /// separators.
    pub fn is_compact(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    fn contains(&self, a: Letter) -> bool {
        a.index() < self.symbols.len()
    }

    /// Parses a word: symbols separated by whitespace or `.`, or juxtaposed
    /// (longest symbol match). `""`, `∅` and `ε` denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word, WordError> {
        let t = text.trim();
        if t.is_empty() || t == "∅" || t == "ε" {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        for chunk in t.split(|c: char| c.is_whitespace() || c == '.') {
            if chunk.is_empty() {
                continue;
            }
            let mut rest = chunk;
            while !rest.is_empty() {
                let (a, n) = self.longest_symbol(rest).ok_or_else(|| WordError::Parse {
                    input: text.to_string(),
                    reason: format!("no symbol matches at `{rest}`"),
                })?;
                letters.push(a);
                rest = &rest[n..];
            }
        }
        Ok(Word(letters))
    }

    fn longest_symbol(&self, s: &str) -> Option<(Letter, usize)> {
        self.symbols
            .iter()
            .enumerate()
            .filter(|(_, sym)| s.starts_with(sym.as_str()))
            .max_by_key(|(_, sym)| sym.len())
            .map(|(i, sym)| (Letter(i as u16), sym.len()))
    }

    /// Parses `pre(per)`, e.g. `0(1)` for 01^∞ or `(001)`.
    pub fn parse_point(&self, text: &str) -> Result<EvPeriodicWord, WordError> {
        let t = text.trim();
        let bad = |reason: &str| WordError::Parse {
            input: text.to_string(),
            reason: reason.to_string(),
        };
        let open = t.find('(').ok_or_else(|| bad("expected `pre(period)`"))?;
        let inner = t[open + 1..]
            .strip_suffix(')')
            .or_else(|| t[open + 1..].strip_suffix(")^∞"))
            .ok_or_else(|| bad("missing closing `)`"))?;
        let pre = self.parse_word(&t[..open])?;
        let per = self.parse_word(inner)?;
        EvPeriodicWord::new(pre, per).ok_or_else(|| bad("period must be nonempty"))
    }

    /// Parses a group element: symbols optionally followed by `^-1`, `⁻¹`
    /// or `'`. `e`, `""` and `∅` denote the unit.
    pub fn parse_element(&self, text: &str) -> Result<FreeGroupElement, WordError> {
        let t = text.trim();
        if t.is_empty() || t == "∅" || (t == "e" && self.letter("e").is_none()) {
            return Ok(FreeGroupElement::unit());
        }
        let mut out = FreeGroupElement::unit();
        for chunk in t.split(|c: char| c.is_whitespace() || c == '.') {
            let mut rest = chunk;
            while !rest.is_empty() {
                let (a, n) = self.longest_symbol(rest).ok_or_else(|| WordError::Parse {
                    input: text.to_string(),
                    reason: format!("no symbol matches at `{rest}`"),
                })?;
                rest = &rest[n..];
                let mut inverse = false;
                for marker in ["^-1", "⁻¹", "'"] {
                    if let Some(r) = rest.strip_prefix(marker) {
                        rest = r;
                        inverse = true;
                        break;
                    }
                }
                out = out.mul(&FreeGroupElement::from_signed(vec![SignedLetter { letter: a, inverse }]));
            }
        }
        Ok(out)
    }

    pub fn fmt_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "∅".to_string();
        }
        let sep = if self.is_compact() { "" } else { " " };
        w.0.iter().map(|&a| self.symbol(a)).collect::<Vec<_>>().join(sep)
    }

    pub fn fmt_point(&self, x: &EvPeriodicWord) -> String {
        let pre = if x.preperiod().is_empty() {
            String::new()
        } else {
            self.fmt_word(x.preperiod())
        };
        format!("{pre}({})", self.fmt_word(x.period()))
    }

    pub fn fmt_element(&self, g: &FreeGroupElement) -> String {
        if g.is_unit() {
            return "e".to_string();
        }
        let sep = if self.is_compact() { "" } else { " " };
        g.factors()
            .iter()
            .map(|f| {
                if f.inverse {
                    format!("{}^-1", self.symbol(f.letter))
                } else {
                    self.symbol(f.letter).to_string()
                }
            })
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Free-group product that also checks both operands live over this alphabet.
    pub fn reduce_concat(
        &self,
        g: &FreeGroupElement,
        h: &FreeGroupElement,
    ) -> Result<FreeGroupElement, WordError> {
        for f in g.factors().iter().chain(h.factors()) {
            if !self.contains(f.letter) {
                return Err(WordError::ForeignLetter(f.letter.0));
            }
        }
        Ok(g.mul(h))
    }
}

/// A finite word over an alphabet (letters are indices into it).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_indices(ix: &[u16]) -> Self {
        Word(ix.iter().map(|&i| Letter(i)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pushed(&self, a: Letter) -> Word {
        let mut v = self.0.clone();
        v.push(a);
        Word(v)
    }

    pub fn repeat(&self, n: usize) -> Word {
        Word(self.0.repeat(n))
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn as_element(&self) -> FreeGroupElement {
        FreeGroupElement::from_signed(
            self.0
                .iter()
                .map(|&letter| SignedLetter { letter, inverse: false })
                .collect(),
        )
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex: shorter first, then lexicographic in alphabet order.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

/// All words of length exactly `n`, in lexicographic order.
pub fn words_of_length(alphabet_size: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * alphabet_size);
        for w in &out {
            for a in 0..alphabet_size {
                next.push(w.pushed(Letter(a as u16)));
            }
        }
        out = next;
    }
    out
}

/// An eventually periodic infinite word `preperiod · period^∞`, always kept
/// in canonical form: minimal period, then minimal preperiod.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EvPeriodicWord {
    pre: Word,
    per: Word,
}

impl EvPeriodicWord {
    pub fn new(pre: Word, per: Word) -> Option<Self> {
        if per.is_empty() {
            return None;
        }
        let mut per = per.0;
        let n = per.len();
        if let Some(d) = (1..=n).find(|&d| n.is_multiple_of(d) && (d..n).all(|i| per[i] == per[i - d])) {
            per.truncate(d);
        }
        let mut pre = pre.0;
        while let Some(&last) = pre.last() {
            if last != *per.last().unwrap() {
                break;
            }
            pre.pop();
            per.rotate_right(1);
        }
        Some(EvPeriodicWord { pre: Word(pre), per: Word(per) })
    }

    pub fn periodic(per: Word) -> Option<Self> {
        Self::new(Word::empty(), per)
    }

    pub fn constant(a: Letter) -> Self {
        EvPeriodicWord { pre: Word::empty(), per: Word(vec![a]) }
    }

    pub fn preperiod(&self) -> &Word {
        &self.pre
    }

    pub fn period(&self) -> &Word {
        &self.per
    }

    /// |preperiod| + |period| of the canonical form.
    pub fn description_len(&self) -> usize {
        self.pre.len() + self.per.len()
    }

    pub fn letter(&self, i: usize) -> Letter {
        if i < self.pre.len() {
            self.pre.0[i]
        } else {
            self.per.0[(i - self.pre.len()) % self.per.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word((0..n).map(|i| self.letter(i)).collect())
    }

    pub fn shift(&self, k: usize) -> EvPeriodicWord {
        if k <= self.pre.len() {
            return EvPeriodicWord { pre: Word(self.pre.0[k..].to_vec()), per: self.per.clone() };
        }
        let r = (k - self.pre.len()) % self.per.len();
        let mut per = self.per.0.clone();
        per.rotate_left(r);
        EvPeriodicWord { pre: Word::empty(), per: Word(per) }
    }

    pub fn prepend(&self, w: &Word) -> EvPeriodicWord {
        EvPeriodicWord::new(w.concat(&self.pre), self.per.clone()).unwrap()
    }

    pub fn is_periodic(&self) -> bool {
        self.pre.is_empty()
    }

    /// Lexicographic comparison of the infinite words.
    pub fn cmp_infinite(&self, other: &Self) -> Ordering {
        let bound = self.pre.len().max(other.pre.len()) + lcm(self.per.len(), other.per.len());
        for i in 0..bound {
            match self.letter(i).cmp(&other.letter(i)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    /// Witness preference: shorter description first, then lexicographic.
    pub fn witness_cmp(&self, other: &Self) -> Ordering {
        self.description_len()
            .cmp(&other.description_len())
            .then_with(|| self.cmp_infinite(other))
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// All eventually periodic words with canonical description length exactly
/// `n`, ordered lexicographically as infinite words.
pub fn ev_periodic_of_description(alphabet_size: usize, n: usize) -> Vec<EvPeriodicWord> {
    let mut out = Vec::new();
    for p in 1..=n {
        let pres = words_of_length(alphabet_size, n - p);
        let pers = words_of_length(alphabet_size, p);
        for pre in &pres {
            for per in &pers {
                let x = EvPeriodicWord::new(pre.clone(), per.clone()).unwrap();
                if x.pre.len() == pre.len() && x.per.len() == p {
                    out.push(x);
                }
            }
        }
    }
    out.sort_by(|a, b| a.cmp_infinite(b));
    out
}

/// All eventually periodic words with description length `1..=n`, in
/// witness-preference order.
pub fn ev_periodic_up_to(alphabet_size: usize, n: usize) -> Vec<EvPeriodicWord> {
    (1..=n).flat_map(|d| ev_periodic_of_description(alphabet_size, d)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SignedLetter {
    pub letter: Letter,
    pub inverse: bool,
}

impl SignedLetter {
    pub fn inv(self) -> Self {
        SignedLetter { letter: self.letter, inverse: !self.inverse }
    }
}

/// A reduced word over Λ ∪ Λ⁻¹.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreeGroupElement(Vec<SignedLetter>);

impl FreeGroupElement {
    pub fn unit() -> Self {
        FreeGroupElement(Vec::new())
    }

    pub fn generator(a: Letter) -> Self {
        FreeGroupElement(vec![SignedLetter { letter: a, inverse: false }])
    }

    /// Reduces an arbitrary signed word.
    pub fn from_signed(factors: Vec<SignedLetter>) -> Self {
        let mut out: Vec<SignedLetter> = Vec::with_capacity(factors.len());
        for f in factors {
            if out.last() == Some(&f.inv()) {
                out.pop();
            } else {
                out.push(f);
            }
        }
        FreeGroupElement(out)
    }

    /// αβ⁻¹, reduced.
    pub fn from_pair(alpha: &Word, beta: &Word) -> Self {
        alpha.as_element().mul(&beta.as_element().inverse())
    }

    pub fn factors(&self) -> &[SignedLetter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        FreeGroupElement(self.0.iter().rev().map(|f| f.inv()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.0.clone();
        let mut i = 0;
        while i < other.0.len() && out.last() == Some(&other.0[i].inv()) {
            out.pop();
            i += 1;
        }
        out.extend_from_slice(&other.0[i..]);
        FreeGroupElement(out)
    }

    /// The decomposition g = αβ⁻¹ when g ∈ F₊F₊⁻¹.
    pub fn positive_pair(&self) -> Option<PositivePair> {
        let split = self.0.iter().position(|f| f.inverse).unwrap_or(self.0.len());
        if self.0[split..].iter().any(|f| !f.inverse) {
            return None;
        }
        let alpha = Word(self.0[..split].iter().map(|f| f.letter).collect());
        let beta = Word(self.0[split..].iter().rev().map(|f| f.letter).collect());
        Some(PositivePair { alpha, beta })
    }

    /// True when every factor is positive.
    pub fn as_positive(&self) -> Option<Word> {
        if self.0.iter().any(|f| f.inverse) {
            None
        } else {
            Some(Word(self.0.iter().map(|f| f.letter).collect()))
        }
    }
}

impl PartialOrd for FreeGroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex on signed letters (a before a⁻¹).
impl Ord for FreeGroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PositivePair {
    pub alpha: Word,
    pub beta: Word,
}

impl PositivePair {
    pub fn element(&self) -> FreeGroupElement {
        FreeGroupElement::from_pair(&self.alpha, &self.beta)
    }
}

/// Every reduced word of length ≤ `r`, in shortlex order.
pub fn ball(alphabet_size: usize, r: usize) -> Vec<FreeGroupElement> {
    let gens: Vec<SignedLetter> = (0..alphabet_size as u16)
        .flat_map(|i| {
            [false, true].map(|inverse| SignedLetter { letter: Letter(i), inverse })
        })
        .collect();
    let mut out = vec![FreeGroupElement::unit()];
    let mut layer = vec![FreeGroupElement::unit()];
    for _ in 0..r {
        let mut next = Vec::new();
        for g in &layer {
            for &s in &gens {
                if g.0.last() == Some(&s.inv()) {
                    continue;
                }
                let mut v = g.0.clone();
                v.push(s);
                next.push(FreeGroupElement(v));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub struct Shown<'a, T: ?Sized>(pub &'a Alphabet, pub &'a T);

impl fmt::Display for Shown<'_, Word> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.fmt_word(self.1))
    }
}

impl fmt::Display for Shown<'_, EvPeriodicWord> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.fmt_point(self.1))
    }
}

impl fmt::Display for Shown<'_, FreeGroupElement> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.fmt_element(self.1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(&["a", "b", "c"]).unwrap()
    }

    #[test]
    fn reduce_concat_cancels() {
        let al = ab();
        let g = |s: &str| al.parse_element(s).unwrap();
        assert!(al.reduce_concat(&g("a"), &g("a^-1")).unwrap().is_unit());
        assert_eq!(al.reduce_concat(&g("ab"), &g("b^-1c")).unwrap(), g("ac"));
        assert!(al.reduce_concat(&g("ab^-1"), &g("ba^-1")).unwrap().is_unit());
        let foreign = FreeGroupElement::generator(Letter(7));
        assert!(al.reduce_concat(&g("a"), &foreign).is_err());
    }

    #[test]
    fn positive_pair_cases() {
        let al = ab();
        let g = |s: &str| al.parse_element(s).unwrap();
        let p = g("ab^-1").positive_pair().unwrap();
        assert_eq!(p.alpha, al.parse_word("a").unwrap());
        assert_eq!(p.beta, al.parse_word("b").unwrap());
        assert!(g("a^-1b").positive_pair().is_none());
        let u = FreeGroupElement::unit().positive_pair().unwrap();
        assert!(u.alpha.is_empty() && u.beta.is_empty());
        // β is read back in forward order
        let p = g("a c^-1 b^-1").positive_pair().unwrap();
        assert_eq!(al.fmt_word(&p.beta), "bc");
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(ball(2, 0).len(), 1);
        assert_eq!(ball(2, 1).len(), 5);
        assert_eq!(ball(2, 2).len(), 17);
        assert_eq!(ball(2, 3).len(), 53);
        assert_eq!(ball(3, 2).len(), 1 + 6 + 30);
    }

    #[test]
    fn canonical_forms() {
        let al = Alphabet::new(&["0", "1"]).unwrap();
        let p = |s: &str| al.parse_point(s).unwrap();
        assert_eq!(p("1(11)"), p("(1)"));
        assert_eq!(p("01(01)"), p("(01)"));
        assert_eq!(p("0(10)"), p("(01)"));
        assert_ne!(p("(01)"), p("(10)"));
        assert_eq!(al.fmt_point(&p("110(110)")), "(110)");
        assert_eq!(p("0(1)").shift(1), p("(1)"));
        assert_eq!(p("(011)").shift(1), p("(110)"));
        assert_eq!(al.fmt_point(&p("(1)").prepend(&al.parse_word("10").unwrap())), "10(1)");
    }

    #[test]
    fn description_enumeration_is_canonical_and_distinct() {
        for n in 1..=5 {
            let xs = ev_periodic_of_description(2, n);
            for x in &xs {
                assert_eq!(x.description_len(), n);
            }
            for w in xs.windows(2) {
                assert_eq!(w[0].cmp_infinite(&w[1]), Ordering::Less);
            }
        }
        assert_eq!(ev_periodic_of_description(2, 1).len(), 2);
        // 00,01,10,11 periods of length 2 that are primitive: 01,10; preperiod-1: 0(1),1(0)
        assert_eq!(ev_periodic_of_description(2, 2).len(), 4);
    }

    #[test]
    fn display_round_trip() {
        let al = Alphabet::new(&["x1", "y"]).unwrap();
        let w = al.parse_word("x1 y x1").unwrap();
        assert_eq!(al.parse_word(&al.fmt_word(&w)).unwrap(), w);
        let g = al.parse_element("x1 y^-1").unwrap();
        assert_eq!(al.fmt_element(&g), "x1 y^-1");
        assert_eq!(al.parse_element(&al.fmt_element(&g)).unwrap(), g);
    }
}
