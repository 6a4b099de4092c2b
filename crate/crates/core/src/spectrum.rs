//! Finite-radius views of elements of the spectrum Ω_X ⊆ 2^F: balls around
//! the unit, stems, membership certificates, basic open sets, limits of
//! ξ_{x_k} along convergent sequences and the spectral partial action.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::machine::{follower_included, Config};
use crate::paction::act;
use crate::shifts::{Point, ShiftError, Subshift};
use crate::verdict::{Confidence, Verdict, Witness};
use crate::words::{Alphabet, EvPeriodicWord, FreeGroupElement, Letter, SignedLetter, Word};

#[derive(Debug, Error)]
pub enum SpectrumError {
    #[error("{element} is not a member of the ball")]
    NotMember { element: String },
    #[error("radius {radius} is too small to decide {element}")]
    RadiusTooSmall { radius: usize, element: String },
    #[error("{0} is not a prefix of the stem")]
    NotOnStem(String),
    #[error(transparent)]
    Shift(#[from] ShiftError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Provenance {
    ExactPoint { x: EvPeriodicWord },
    LimitOf { family: String, stabilized_at: usize },
    Translated { g: FreeGroupElement, parent: Box<Provenance> },
    Given,
}

/// ξ ∩ ball(radius), with what is known of the stem.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumBall {
    pub radius: usize,
    pub members: BTreeSet<FreeGroupElement>,
    pub stem_prefix: Word,
    /// The full stem, when it is known exactly.
    pub stem: Option<EvPeriodicWord>,
    pub provenance: Provenance,
    pub confidence: Confidence,
}

impl SpectrumBall {
    pub fn contains(&self, g: &FreeGroupElement) -> bool {
        self.members.contains(g)
    }

    /// A ball given by its members only (for validation).
    pub fn given(al: &Alphabet, radius: usize, members: impl IntoIterator<Item = FreeGroupElement>) -> SpectrumBall {
        let members: BTreeSet<_> = members.into_iter().collect();
        let mut ball = SpectrumBall {
            radius,
            members,
            stem_prefix: Word::empty(),
            stem: None,
            provenance: Provenance::Given,
            confidence: Confidence::Exact,
        };
        if ball.contains(&FreeGroupElement::unit()) {
            ball.stem_prefix = chain_from(&ball, &FreeGroupElement::unit(), al.len());
        }
        ball
    }
}

fn chain_from(ball: &SpectrumBall, g: &FreeGroupElement, k: usize) -> Word {
    let mut out = Vec::new();
    let mut cur = g.clone();
    while cur.len() < ball.radius {
        let next: Vec<(Letter, FreeGroupElement)> = (0..k as u16)
            .map(Letter)
            .map(|a| (a, cur.mul(&FreeGroupElement::generator(a))))
            .filter(|(_, h)| h.len() == cur.len() + 1 && ball.contains(h))
            .collect();
        match next.as_slice() {
            [(a, h)] => {
                out.push(*a);
                cur = h.clone();
            }
            _ => break,
        }
    }
    Word(out)
}

/// ξ_x ∩ ball(R) = {αβ⁻¹ : x = αy, βy ∈ X, |αβ⁻¹| ≤ R}.
pub fn xi_ball(s: &Subshift, x: &EvPeriodicWord, r: usize) -> SpectrumBall {
    let mut members = BTreeSet::new();
    let mut confidence = s.confidence();
    let k = s.alphabet().len();
    for i in 0..=r {
        let alpha = x.prefix(i);
        let y = Point::Ev(x.shift(i));
        for len in 0..=(r - i) {
            for beta in crate::words::words_of_length(k, len) {
                if i > 0 && len > 0 && beta.letters().last() == alpha.letters().last() {
                    continue;
                }
                let (ok, c) = s.contains_prefixed(&beta, &y);
                confidence = confidence.and(c);
                if ok {
                    members.insert(FreeGroupElement::from_pair(&alpha, &beta));
                }
            }
        }
    }
    SpectrumBall {
        radius: r,
        members,
        stem_prefix: x.prefix(r),
        stem: Some(x.clone()),
        provenance: Provenance::ExactPoint { x: x.clone() },
        confidence,
    }
}

/// The positive chain through g: the word a₁a₂… with g a₁…a_j ∈ ξ.
pub fn stem_at(ball: &SpectrumBall, g: &FreeGroupElement, al: &Alphabet) -> Result<Word, SpectrumError> {
    if !ball.contains(g) {
        return Err(SpectrumError::NotMember { element: al.fmt_element(g) });
    }
    Ok(chain_from(ball, g, al.len()))
}

pub fn stem_of(ball: &SpectrumBall, al: &Alphabet) -> Result<Word, SpectrumError> {
    stem_at(ball, &FreeGroupElement::unit(), al)
}

/// Elements on the geodesic from g to h, both ends included.
fn geodesic(g: &FreeGroupElement, h: &FreeGroupElement) -> Vec<FreeGroupElement> {
    let d = g.inverse().mul(h);
    let mut out = vec![g.clone()];
    let mut cur = g.clone();
    for f in d.factors() {
        cur = cur.mul(&FreeGroupElement::from_signed(vec![*f]));
        out.push(cur.clone());
    }
    out
}

/// Checks the necessary conditions for ξ ∈ Ω_X on the ball; the witness is
/// the first violated clause.
pub fn validate_element(s: &Subshift, ball: &SpectrumBall) -> Verdict {
    let al = s.alphabet();
    let conf = ball.confidence;
    let fail = |clause: &str, detail: String| {
        Verdict::fails("spectrum-element", conf, Witness::Clause { clause: clause.into(), detail })
    };
    let unit = FreeGroupElement::unit();
    if !ball.contains(&unit) {
        return fail("7.8.i", "the unit is not a member".into());
    }
    if let Some(g) = ball.members.iter().find(|g| g.len() > ball.radius) {
        return fail("radius", format!("{} lies outside the ball", al.fmt_element(g)));
    }
    let members: Vec<&FreeGroupElement> = ball.members.iter().collect();
    for (i, g) in members.iter().enumerate() {
        for h in &members[i + 1..] {
            for k in geodesic(g, h) {
                if k.len() <= ball.radius && !ball.contains(&k) {
                    return fail(
                        "7.8.ii",
                        format!("{} lies between {} and {}", al.fmt_element(&k), al.fmt_element(g), al.fmt_element(h)),
                    );
                }
            }
        }
    }
    for g in &members {
        if g.len() >= ball.radius {
            continue;
        }
        let n = al
            .letters()
            .filter(|&a| ball.contains(&g.mul(&FreeGroupElement::generator(a))))
            .count();
        if n != 1 {
            return fail("7.8.iii", format!("{} has {n} letters a with ga a member", al.fmt_element(g)));
        }
    }
    for g in &members {
        for h in &members {
            if let Some(alpha) = g.inverse().mul(h).as_positive() {
                if !alpha.is_empty() && !s.in_language(&alpha).unwrap_or(true) {
                    return fail(
                        "7.8.iv",
                        format!("{} and {} are members but {} is not in the language", al.fmt_element(g), al.fmt_element(h), al.fmt_word(&alpha)),
                    );
                }
            }
        }
    }
    if let Some(g) = members.iter().find(|g| g.positive_pair().is_none()) {
        return fail("7.8.v", format!("{} is not of the form αβ⁻¹", al.fmt_element(g)));
    }
    let positives: BTreeSet<Word> = members.iter().filter_map(|g| g.as_positive()).collect();
    let chain = chain_from(ball, &unit, al.len());
    let prefixes: BTreeSet<Word> = (0..=chain.len()).map(|i| Word(chain.letters()[..i].to_vec())).collect();
    if positives != prefixes || !chain.is_prefix_of(&ball.stem_prefix) && !ball.stem_prefix.is_prefix_of(&chain) {
        return fail("stem", "positive members are not the prefixes of the stem".into());
    }
    if let Some(stem) = &ball.stem {
        if stem.prefix(chain.len()) != chain {
            return fail("stem", format!("the stem {} does not extend the positive chain", al.fmt_point(stem)));
        }
        if s.contains_point(stem) {
            let exact = xi_ball(s, stem, ball.radius);
            if let Some(g) = ball.members.iter().find(|g| !exact.contains(g)) {
                return fail("7.17", format!("{} is not in ξ of the stem", al.fmt_element(g)));
            }
        }
    }
    Verdict::holds("spectrum-element", conf)
}

/// gξ viewed in the ball of radius R − |g|.
pub fn spectral_translate(s: &Subshift, g: &FreeGroupElement, ball: &SpectrumBall) -> Result<SpectrumBall, SpectrumError> {
    let al = s.alphabet();
    if !ball.contains(&g.inverse()) {
        return Err(SpectrumError::NotMember { element: al.fmt_element(&g.inverse()) });
    }
    let r = ball.radius - g.len();
    let members: BTreeSet<FreeGroupElement> = ball
        .members
        .iter()
        .map(|h| g.mul(h))
        .filter(|k| k.len() <= r)
        .collect();
    let stem_prefix = {
        let w = chain_from(ball, &g.inverse(), al.len());
        Word(w.letters()[..w.len().min(r)].to_vec())
    };
    let stem = ball.stem.as_ref().and_then(|x| act(s, g, x).ok());
    Ok(SpectrumBall {
        radius: r,
        members,
        stem_prefix,
        stem,
        provenance: Provenance::Translated { g: g.clone(), parent: Box::new(ball.provenance.clone()) },
        confidence: ball.confidence,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MembershipStatus {
    /// g ∉ ξ for every ξ with this stem.
    Forbidden,
    /// Necessary condition holds; membership is not determined by the stem.
    NecessaryOnly,
    /// The stem lies in the interior of F_β, so g ∈ ξ.
    CertifiedIn,
}

/// Classifies g = αβ⁻¹ against the stem, α a prefix of it: β·σ^{|α|}(stem)
/// must lie in X, and membership is certain when some cylinder around
/// σ^{|α|}(stem) of length ≤ depth is inside F_β.
pub fn membership_tests(
    s: &Subshift,
    stem: &EvPeriodicWord,
    g: &FreeGroupElement,
    depth: usize,
) -> Result<MembershipStatus, SpectrumError> {
    let al = s.alphabet();
    let Some(p) = g.positive_pair() else { return Ok(MembershipStatus::Forbidden) };
    if stem.prefix(p.alpha.len()) != p.alpha {
        return Err(SpectrumError::NotOnStem(al.fmt_word(&p.alpha)));
    }
    let y = stem.shift(p.alpha.len());
    if !s.contains_point(&y.prepend(&p.beta)) {
        return Ok(MembershipStatus::Forbidden);
    }
    let m = s.machine();
    for j in 0..=depth {
        let w = y.prefix(j);
        let (Some(c), Some(d)) = (m.run(w.letters()), m.run(p.beta.concat(&w).letters())) else { continue };
        if follower_included(m, &Config::single(c), &Config::single(d)) {
            return Ok(MembershipStatus::CertifiedIn);
        }
    }
    Ok(MembershipStatus::NecessaryOnly)
}

/// V_{α; β₁..βₙ; γ₁..γₘ} = {η : α ∈ η, αβᵢ⁻¹ ∈ η, αγⱼ⁻¹ ∉ η}.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasicOpenSpec {
    pub alpha: Word,
    pub betas: Vec<Word>,
    pub gammas: Vec<Word>,
}

pub fn basic_open_contains(al: &Alphabet, ball: &SpectrumBall, v: &BasicOpenSpec) -> Result<bool, SpectrumError> {
    let look = |g: FreeGroupElement| -> Result<bool, SpectrumError> {
        if g.len() > ball.radius {
            return Err(SpectrumError::RadiusTooSmall { radius: ball.radius, element: al.fmt_element(&g) });
        }
        Ok(ball.contains(&g))
    };
    let mut ok = look(v.alpha.as_element())?;
    for b in &v.betas {
        ok &= look(FreeGroupElement::from_pair(&v.alpha, b))?;
    }
    for c in &v.gammas {
        ok &= !look(FreeGroupElement::from_pair(&v.alpha, c))?;
    }
    Ok(ok)
}

/// x_k = prefix · pump^k · tail, converging to prefix · pump^∞ (or constant
/// when the pump is empty).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointFamily {
    pub name: String,
    pub prefix: Word,
    pub pump: Word,
    pub tail: EvPeriodicWord,
}

impl PointFamily {
    pub fn term(&self, k: usize) -> EvPeriodicWord {
        self.tail.prepend(&self.prefix.concat(&self.pump.repeat(k)))
    }

    pub fn limit(&self) -> EvPeriodicWord {
        match EvPeriodicWord::new(self.prefix.clone(), self.pump.clone()) {
            Some(x) => x,
            None => self.tail.prepend(&self.prefix),
        }
    }

    /// Built-in families by name, or `prefix|pump|tail` with tail written
    /// as `pre(per)`.
    pub fn parse(s: &Subshift, text: &str) -> Result<PointFamily, ShiftError> {
        if text == "even-odd-ones" {
            return Ok(PointFamily {
                name: "1^(2k+1) 0^inf".into(),
                prefix: s.word("1")?,
                pump: s.word("11")?,
                tail: s.point("(0)")?,
            });
        }
        let parts: Vec<&str> = text.split('|').collect();
        if parts.len() != 3 {
            return Err(ShiftError::Precondition(format!(
                "unknown family `{text}` (use even-odd-ones or prefix|pump|tail)"
            )));
        }
        Ok(PointFamily {
            name: text.to_string(),
            prefix: s.word(parts[0])?,
            pump: s.word(parts[1])?,
            tail: s.point(parts[2])?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationReport {
    pub stabilized_at: Option<usize>,
    pub k_max: usize,
    pub window: usize,
    pub ball_sizes: Vec<usize>,
}

pub const DEFAULT_WINDOW: usize = 3;

/// Computes ξ_{x_k} ∩ ball(R) for k = 1, 2, … until `window` consecutive
/// balls agree and the points of the window share a prefix of length ≥ 2R.
pub fn limit_ball(
    s: &Subshift,
    family: &PointFamily,
    r: usize,
    k_max: usize,
    window: usize,
) -> Result<(Option<SpectrumBall>, StabilizationReport), ShiftError> {
    let window = window.max(1);
    let mut balls: Vec<SpectrumBall> = Vec::new();
    let mut report = StabilizationReport { stabilized_at: None, k_max, window, ball_sizes: Vec::new() };
    for k in 1..=k_max {
        let x = family.term(k);
        if !s.contains_point(&x) {
            return Err(ShiftError::Precondition(format!("x_{k} = {} is not in X", s.show_point(&x))));
        }
        let b = xi_ball(s, &x, r);
        report.ball_sizes.push(b.members.len());
        balls.push(b);
        if balls.len() < window {
            continue;
        }
        let first = k + 1 - window;
        let win = &balls[first - 1..];
        let same = win.iter().all(|b| b.members == win[0].members);
        let agree = (first..=k).all(|j| family.term(j).prefix(2 * r) == family.term(first).prefix(2 * r));
        if same && agree {
            report.stabilized_at = Some(first);
            let limit = family.limit();
            let stem_known = s.contains_point(&limit) && limit.prefix(2 * r) == family.term(first).prefix(2 * r);
            let ball = SpectrumBall {
                radius: r,
                members: win[0].members.clone(),
                stem_prefix: family.term(first).prefix(r),
                stem: stem_known.then_some(limit),
                provenance: Provenance::LimitOf { family: family.name.clone(), stabilized_at: first },
                confidence: win[0].confidence,
            };
            return Ok((Some(ball), report));
        }
    }
    Ok((None, report))
}

/// The Cayley graph ball of radius R with the members highlighted: stem
/// edges solid, other edges between members dashed, the rest dotted.
pub fn to_dot(al: &Alphabet, ball: &SpectrumBall) -> String {
    let name = |g: &FreeGroupElement| al.fmt_element(g).replace('"', "\\\"");
    let mut out = String::from("digraph spectrum {\n  rankdir=TB;\n  node [shape=ellipse, fontname=\"monospace\"];\n");
    let elements = crate::words::ball(al.len(), ball.radius);
    for g in &elements {
        if ball.contains(g) {
            let _ = writeln!(out, "  \"{}\" [style=filled, fillcolor=lightblue];", name(g));
        } else {
            let _ = writeln!(out, "  \"{}\" [color=gray, fontcolor=gray];", name(g));
        }
    }
    for h in elements.iter().filter(|h| !h.is_unit()) {
        let last = *h.factors().last().unwrap();
        let parent = h.mul(&FreeGroupElement::from_signed(vec![last.inv()]));
        let (src, dst) = if last.inverse { (h, &parent) } else { (&parent, h) };
        let SignedLetter { letter, .. } = last;
        let both = ball.contains(src) && ball.contains(dst);
        let style = if both && src.as_positive().is_some() && dst.as_positive().is_some() {
            "style=solid, penwidth=2"
        } else if both {
            "style=dashed"
        } else {
            "style=dotted, color=gray"
        };
        let _ = writeln!(out, "  \"{}\" -> \"{}\" [label=\"{}\", {style}];", name(src), name(dst), al.symbol(letter));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn even() -> Subshift {
        Subshift::builtin("even").unwrap()
    }

    #[test]
    fn even_fixed_point_ball() {
        let s = even();
        let al = s.alphabet();
        let b = xi_ball(&s, &s.point("(1)").unwrap(), 2);
        assert!(b.contains(&al.parse_element("0^-1").unwrap()));
        assert!(validate_element(&s, &b).value);
        assert_eq!(stem_of(&b, al).unwrap(), s.word("11").unwrap());
        assert_eq!(xi_ball(&s, &s.point("(1)").unwrap(), 0).members.len(), 1);
    }

    #[test]
    fn translate_fixed_point() {
        let s = even();
        let one = s.alphabet().parse_element("1").unwrap();
        let x = s.point("(1)").unwrap();
        let t = spectral_translate(&s, &one, &xi_ball(&s, &x, 3)).unwrap();
        assert_eq!(t.members, xi_ball(&s, &x, 2).members);
    }

    #[test]
    fn invalid_balls() {
        let s = even();
        let al = s.alphabet();
        let g = |t: &str| al.parse_element(t).unwrap();
        let two = SpectrumBall::given(al, 1, [g("e"), g("0"), g("1")]);
        let v = validate_element(&s, &two);
        assert!(matches!(v.witness, Some(Witness::Clause { ref clause, .. }) if clause == "7.8.iii"));
        let no_unit = SpectrumBall::given(al, 1, [g("0")]);
        let v = validate_element(&s, &no_unit);
        assert!(matches!(v.witness, Some(Witness::Clause { ref clause, .. }) if clause == "7.8.i"));
    }

    #[test]
    fn anomalous_limit() {
        let s = even();
        let fam = PointFamily::parse(&s, "even-odd-ones").unwrap();
        let (ball, rep) = limit_ball(&s, &fam, 2, 20, DEFAULT_WINDOW).unwrap();
        let ball = ball.unwrap();
        assert!(rep.stabilized_at.unwrap() <= 10);
        let zi = s.alphabet().parse_element("0^-1").unwrap();
        assert!(!ball.contains(&zi));
        assert_eq!(ball.stem, Some(s.point("(1)").unwrap()));
        assert_eq!(membership_tests(&s, &s.point("(1)").unwrap(), &zi, 8).unwrap(), MembershipStatus::NecessaryOnly);
        assert!(validate_element(&s, &ball).value);
    }

    #[test]
    fn golden_interior() {
        let s = Subshift::builtin("golden").unwrap();
        let g = s.alphabet().parse_element("1^-1").unwrap();
        let st = membership_tests(&s, &s.point("(0)").unwrap(), &g, 4).unwrap();
        assert_eq!(st, MembershipStatus::CertifiedIn);
        let bad = s.alphabet().parse_element("1^-1 1^-1").unwrap();
        assert_eq!(membership_tests(&s, &s.point("(0)").unwrap(), &bad, 4).unwrap(), MembershipStatus::Forbidden);
    }

    #[test]
    fn basic_opens() {
        let s = even();
        let v = BasicOpenSpec { alpha: Word::empty(), betas: vec![s.word("01").unwrap(), s.word("011").unwrap()], gammas: vec![] };
        let b1 = xi_ball(&s, &s.point("(1)").unwrap(), 3);
        assert!(basic_open_contains(s.alphabet(), &b1, &v).unwrap());
        let b0 = xi_ball(&s, &s.point("(0)").unwrap(), 3);
        assert!(!basic_open_contains(s.alphabet(), &b0, &v).unwrap());
        let small = xi_ball(&s, &s.point("(1)").unwrap(), 2);
        assert!(basic_open_contains(s.alphabet(), &small, &v).is_err());
    }
}
